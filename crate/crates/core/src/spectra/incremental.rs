//! Edges inserted in increasing weight while maintaining the strongly
//! connected components and a topological order of their condensation.
//!
//! Components live in a union-find; the order is kept with the
//! Pearce–Kelly bounded search. Two monotone flags per component record
//! whether it reaches, or is reached from, a component containing a cycle;
//! an inserted edge is Markov exactly when its endpoints carry those flags
//! or it closes a cycle, and Lagrange exactly when it closes a cycle.

use super::digraph::WeightedDigraph;
use super::{EdgeClassification, TieOrder, WeightSets};

struct Condensation {
    parent: Vec<usize>,
    size: Vec<usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    ord: Vec<usize>,
    cyclic: Vec<bool>,
    fwd: Vec<bool>,
    bwd: Vec<bool>,
    mark_f: Vec<u32>,
    mark_b: Vec<u32>,
    epoch: u32,
}

struct Inserted {
    closes_cycle: bool,
    markov: bool,
}

impl Condensation {
    fn new(n: usize) -> Self {
        Condensation {
            parent: (0..n).collect(),
            size: vec![1; n],
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            ord: (0..n).collect(),
            cyclic: vec![false; n],
            fwd: vec![false; n],
            bwd: vec![false; n],
            mark_f: vec![0; n],
            mark_b: vec![0; n],
            epoch: 0,
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn insert(&mut self, u: usize, v: usize) -> Inserted {
        let x = self.find(u);
        let y = self.find(v);
        if x == y {
            if !self.cyclic[x] {
                self.cyclic[x] = true;
                if !self.fwd[x] {
                    let seeds = self.inc[x].clone();
                    self.spread_fwd(x, &seeds);
                }
                if !self.bwd[x] {
                    let seeds = self.out[x].clone();
                    self.spread_bwd(x, &seeds);
                }
            }
            return Inserted { closes_cycle: true, markov: true };
        }
        if self.ord[x] < self.ord[y] {
            return Inserted { closes_cycle: false, markov: self.link(u, v, x, y) };
        }

        self.epoch += 1;
        let (fset, found) = self.search_forward(y, x);
        let bset = self.search_backward(x, y);
        let epoch = self.epoch;
        let mut pool: Vec<usize> =
            fset.iter().chain(bset.iter().filter(|&&c| self.mark_f[c] != epoch)).map(|&c| self.ord[c]).collect();
        pool.sort_unstable();

        let by_ord = |this: &Self, mut cs: Vec<usize>| {
            cs.sort_unstable_by_key(|&c| this.ord[c]);
            cs
        };
        let b_only = by_ord(self, bset.iter().copied().filter(|&c| self.mark_f[c] != epoch).collect());
        let f_only = by_ord(self, fset.iter().copied().filter(|&c| self.mark_b[c] != epoch).collect());

        if !found {
            for (slot, c) in pool.into_iter().zip(b_only.into_iter().chain(f_only)) {
                self.ord[c] = slot;
            }
            return Inserted { closes_cycle: false, markov: self.link(u, v, x, y) };
        }

        let members: Vec<usize> = fset.iter().copied().filter(|&c| self.mark_b[c] == epoch).collect();
        let lo = b_only.len();
        let hi = pool.len() - f_only.len();
        // `members` occupies hi - lo slots but collapses into one component;
        // the spare slots stay unused, which keeps the order valid.
        for (slot, &c) in pool[..lo].iter().zip(&b_only) {
            self.ord[c] = *slot;
        }
        for (slot, &c) in pool[hi..].iter().zip(&f_only) {
            self.ord[c] = *slot;
        }
        let (r, fwd_seeds, bwd_seeds) = self.merge(&members);
        self.ord[r] = pool[lo];
        self.cyclic[r] = true;
        self.spread_fwd(r, &fwd_seeds);
        self.spread_bwd(r, &bwd_seeds);
        Inserted { closes_cycle: true, markov: true }
    }

    fn link(&mut self, u: usize, v: usize, x: usize, y: usize) -> bool {
        self.out[x].push(v);
        self.inc[y].push(u);
        let markov = self.fwd[y] && self.bwd[x];
        if self.fwd[y] && !self.fwd[x] {
            let seeds = self.inc[x].clone();
            self.spread_fwd(x, &seeds);
        }
        if self.bwd[x] && !self.bwd[y] {
            let seeds = self.out[y].clone();
            self.spread_bwd(y, &seeds);
        }
        markov
    }

    /// Components reachable from `y` with order at most `ord[x]`; reports
    /// whether `x` is among them.
    fn search_forward(&mut self, y: usize, x: usize) -> (Vec<usize>, bool) {
        let bound = self.ord[x];
        let epoch = self.epoch;
        self.mark_f[y] = epoch;
        let mut seen = vec![y];
        let mut stack = vec![y];
        let mut found = false;
        while let Some(z) = stack.pop() {
            let list = std::mem::take(&mut self.out[z]);
            for &t in &list {
                let c = self.find(t);
                if c == z || self.ord[c] > bound || self.mark_f[c] == epoch {
                    continue;
                }
                self.mark_f[c] = epoch;
                found |= c == x;
                seen.push(c);
                stack.push(c);
            }
            self.out[z] = list;
        }
        (seen, found)
    }

    fn search_backward(&mut self, x: usize, y: usize) -> Vec<usize> {
        let bound = self.ord[y];
        let epoch = self.epoch;
        self.mark_b[x] = epoch;
        let mut seen = vec![x];
        let mut stack = vec![x];
        while let Some(z) = stack.pop() {
            let list = std::mem::take(&mut self.inc[z]);
            for &t in &list {
                let c = self.find(t);
                if c == z || self.ord[c] < bound || self.mark_b[c] == epoch {
                    continue;
                }
                self.mark_b[c] = epoch;
                seen.push(c);
                stack.push(c);
            }
            self.inc[z] = list;
        }
        seen
    }

    /// Collapses `members` into the largest of them. Returns the new
    /// representative and the predecessors (successors) of the members not
    /// yet known to reach (be reached from) a cycle: only those need the
    /// flag spread to them. Adjacency entries that became internal are left
    /// in place and skipped by the searches.
    fn merge(&mut self, members: &[usize]) -> (usize, Vec<usize>, Vec<usize>) {
        let r = *members.iter().max_by_key(|&&c| self.size[c]).expect("cycle has members");
        let mut fwd_seeds = Vec::new();
        let mut bwd_seeds = Vec::new();
        for &c in members {
            if !self.fwd[c] {
                fwd_seeds.extend_from_slice(&self.inc[c]);
            }
            if !self.bwd[c] {
                bwd_seeds.extend_from_slice(&self.out[c]);
            }
        }
        let mut out = std::mem::take(&mut self.out[r]);
        let mut inc = std::mem::take(&mut self.inc[r]);
        for &c in members {
            if c == r {
                continue;
            }
            self.parent[c] = r;
            self.size[r] += self.size[c];
            self.fwd[r] |= self.fwd[c];
            self.bwd[r] |= self.bwd[c];
            out.append(&mut self.out[c]);
            inc.append(&mut self.inc[c]);
        }
        self.out[r] = out;
        self.inc[r] = inc;
        (r, fwd_seeds, bwd_seeds)
    }

    /// Marks `c` as reaching a cycle, then every unmarked component reaching
    /// one of the vertices in `seeds` (predecessors of `c`), transitively.
    fn spread_fwd(&mut self, c: usize, seeds: &[usize]) {
        self.fwd[c] = true;
        let mut stack = Vec::new();
        for &s in seeds {
            let p = self.find(s);
            if !self.fwd[p] {
                self.fwd[p] = true;
                stack.push(p);
            }
        }
        while let Some(z) = stack.pop() {
            let list = std::mem::take(&mut self.inc[z]);
            for &s in &list {
                let p = self.find(s);
                if !self.fwd[p] {
                    self.fwd[p] = true;
                    stack.push(p);
                }
            }
            self.inc[z] = list;
        }
    }

    fn spread_bwd(&mut self, c: usize, seeds: &[usize]) {
        self.bwd[c] = true;
        let mut stack = Vec::new();
        for &t in seeds {
            let p = self.find(t);
            if !self.bwd[p] {
                self.bwd[p] = true;
                stack.push(p);
            }
        }
        while let Some(z) = stack.pop() {
            let list = std::mem::take(&mut self.out[z]);
            for &t in &list {
                let p = self.find(t);
                if !self.bwd[p] {
                    self.bwd[p] = true;
                    stack.push(p);
                }
            }
            self.out[z] = list;
        }
    }
}

/// Witness edges (first inserted per distinct weight) for both spectra.
pub fn incremental_classify<W: Ord>(g: &WeightedDigraph<W>, ties: TieOrder) -> EdgeClassification {
    let mut order: Vec<usize> = (0..g.n_edges()).collect();
    match ties {
        TieOrder::Forward => order.sort_by(|&a, &b| g.edge(a).weight.cmp(&g.edge(b).weight)),
        TieOrder::Reverse => order.sort_by(|&a, &b| g.edge(a).weight.cmp(&g.edge(b).weight).then(b.cmp(&a))),
    }
    let mut cond = Condensation::new(g.n_vertices());
    let mut result = EdgeClassification::default();
    for e in order {
        let edge = g.edge(e);
        let step = cond.insert(edge.source, edge.target);
        let fresh = |ids: &Vec<usize>| ids.last().is_none_or(|&l| g.edge(l).weight != edge.weight);
        if step.closes_cycle && fresh(&result.lagrange) {
            result.lagrange.push(e);
        }
        if step.markov && fresh(&result.markov) {
            result.markov.push(e);
        }
    }
    result
}

pub fn incremental_weight_sets<W: Ord + Clone>(g: &WeightedDigraph<W>) -> WeightSets<W> {
    incremental_classify(g, TieOrder::Forward).weight_sets(g)
}

pub fn incremental_weight_sets_with<W: Ord + Clone>(g: &WeightedDigraph<W>, ties: TieOrder) -> WeightSets<W> {
    incremental_classify(g, ties).weight_sets(g)
}
