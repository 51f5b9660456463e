//! Edge classification with the whole edge list known in advance.
//!
//! Distinct weights become levels `0..L`. A divide and conquer over levels
//! finds, for every edge, the first level at which its endpoints are
//! strongly connected in the subgraph of edges up to that level: edges whose
//! endpoints connect before the midpoint go left, the rest go right, and
//! the union-find over components is advanced in level order. An edge is
//! Lagrange exactly when this level does not exceed its own.
//!
//! For Markov edges, every vertex gets the first level at which it reaches a
//! cycle (and, symmetrically, is reached from one). These are bottleneck
//! distances to the vertices lying on cycles, computed by a Dijkstra search
//! with `max` in place of `+`. The whole run costs `O(m log m)`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::digraph::WeightedDigraph;
use super::{EdgeClassification, TieOrder, WeightSets};

const NEVER: u32 = u32::MAX;

/// Level of every edge (rank of its weight among the distinct weights).
fn levels<W: Ord>(g: &WeightedDigraph<W>) -> (Vec<u32>, u32) {
    let mut order: Vec<usize> = (0..g.n_edges()).collect();
    order.sort_by(|&a, &b| g.edge(a).weight.cmp(&g.edge(b).weight));
    let mut level = vec![0u32; g.n_edges()];
    let mut current = 0u32;
    for (i, &e) in order.iter().enumerate() {
        if i > 0 && g.edge(order[i - 1]).weight != g.edge(e).weight {
            current += 1;
        }
        level[e] = current;
    }
    let n_levels = if order.is_empty() { 0 } else { current + 1 };
    (level, n_levels)
}

struct Splitter<'g, W> {
    g: &'g WeightedDigraph<W>,
    level: Vec<u32>,
    parent: Vec<usize>,
    /// First level at which the endpoints of each edge are strongly connected.
    joined: Vec<u32>,
    // scratch for the local graphs, indexed by representative
    local_id: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl<W> Splitter<'_, W> {
    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn solve(&mut self, lo: u32, hi: u32, edges: Vec<usize>, n_levels: u32) {
        if edges.is_empty() {
            return;
        }
        if hi - lo == 1 {
            for e in edges {
                self.joined[e] = if lo == n_levels { NEVER } else { lo };
                if lo < n_levels {
                    let (u, v) = (self.g.edge(e).source, self.g.edge(e).target);
                    let (ru, rv) = (self.find(u), self.find(v));
                    self.parent[ru] = rv;
                }
            }
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let comp = self.components(&edges, mid);
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (i, e) in edges.into_iter().enumerate() {
            match comp[i] {
                Some((a, b)) if a == b => left.push(e),
                _ => right.push(e),
            }
        }
        self.solve(lo, mid, left, n_levels);
        self.solve(mid, hi, right, n_levels);
    }

    /// Strongly connected components of the edges below `mid`, over the
    /// current representatives; per edge, the components of its endpoints.
    fn components(&mut self, edges: &[usize], mid: u32) -> Vec<Option<(u32, u32)>> {
        self.epoch += 1;
        let epoch = self.epoch;
        let mut ends: Vec<Option<(u32, u32)>> = Vec::with_capacity(edges.len());
        let mut n = 0u32;
        for &e in edges {
            if self.level[e] >= mid {
                ends.push(None);
                continue;
            }
            let (u, v) = (self.g.edge(e).source, self.g.edge(e).target);
            let (ru, rv) = (self.find(u), self.find(v));
            for r in [ru, rv] {
                if self.stamp[r] != epoch {
                    self.stamp[r] = epoch;
                    self.local_id[r] = n;
                    n += 1;
                }
            }
            ends.push(Some((self.local_id[ru], self.local_id[rv])));
        }
        let pairs: Vec<(u32, u32)> = ends.iter().flatten().copied().collect();
        let comp = tarjan(n as usize, &pairs);
        ends.into_iter().map(|x| x.map(|(a, b)| (comp[a as usize], comp[b as usize]))).collect()
    }
}

/// Component index of every vertex, by an iterative Tarjan search.
fn tarjan(n: usize, edges: &[(u32, u32)]) -> Vec<u32> {
    let mut start = vec![0usize; n + 1];
    for &(a, _) in edges {
        start[a as usize + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut adj = vec![0u32; edges.len()];
    let mut fill = start.clone();
    for &(a, b) in edges {
        adj[fill[a as usize]] = b;
        fill[a as usize] += 1;
    }

    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut call: Vec<(u32, usize)> = Vec::new();
    let (mut next_index, mut next_comp) = (0u32, 0u32);
    for root in 0..n as u32 {
        if index[root as usize] != UNSEEN {
            continue;
        }
        call.push((root, start[root as usize]));
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let vi = v as usize;
            if *pos < start[vi + 1] {
                let w = adj[*pos] as usize;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w as u32, start[w]));
                } else if on_stack[w] {
                    low[vi] = low[vi].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent as usize] = low[parent as usize].min(low[vi]);
            }
            if low[vi] == index[vi] {
                loop {
                    let w = stack.pop().expect("vertex on stack") as usize;
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == vi {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Bottleneck distance from every vertex to a seed, along `adj` (CSR of
/// `(neighbor, level)`): the least level `l` such that a seed with
/// `seed[x] <= l` is reachable through edges of level at most `l`.
fn bottleneck(seed: &[u32], start: &[usize], adj: &[(usize, u32)]) -> Vec<u32> {
    let mut dist = seed.to_vec();
    let mut heap: BinaryHeap<Reverse<(u32, usize)>> =
        dist.iter().enumerate().filter(|(_, &d)| d != NEVER).map(|(v, &d)| Reverse((d, v))).collect();
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(u, l) in &adj[start[v]..start[v + 1]] {
            let cand = d.max(l);
            if cand < dist[u] {
                dist[u] = cand;
                heap.push(Reverse((cand, u)));
            }
        }
    }
    dist
}

fn csr(n: usize, items: impl Iterator<Item = (usize, usize, u32)> + Clone) -> (Vec<usize>, Vec<(usize, u32)>) {
    let mut start = vec![0usize; n + 1];
    for (a, _, _) in items.clone() {
        start[a + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut adj = vec![(0usize, 0u32); start[n]];
    for (a, b, l) in items {
        adj[fill[a]] = (b, l);
        fill[a] += 1;
    }
    (start, adj)
}

/// Witness edges per distinct weight; among tied candidates the first
/// (or, with [`TieOrder::Reverse`], the last) edge id is reported.
pub fn offline_classify<W: Ord>(g: &WeightedDigraph<W>, ties: TieOrder) -> EdgeClassification {
    let n = g.n_vertices();
    let m = g.n_edges();
    let (level, n_levels) = levels(g);
    let mut s = Splitter {
        g,
        level,
        parent: (0..n).collect(),
        joined: vec![NEVER; m],
        local_id: vec![0; n],
        stamp: vec![0; n],
        epoch: 0,
    };
    s.solve(0, n_levels + 1, (0..m).collect(), n_levels);
    let (level, joined) = (s.level, s.joined);

    // a vertex lies on a cycle from the first level at which an out-edge closes one
    let mut on_cycle = vec![NEVER; n];
    for (edge, &j) in g.edges().iter().zip(&joined) {
        on_cycle[edge.source] = on_cycle[edge.source].min(j);
    }
    let edges = g.edges();
    let (rs, radj) = csr(n, edges.iter().enumerate().map(|(e, x)| (x.target, x.source, level[e])));
    let reaches = bottleneck(&on_cycle, &rs, &radj);
    let (fs, fadj) = csr(n, edges.iter().enumerate().map(|(e, x)| (x.source, x.target, level[e])));
    let reached = bottleneck(&on_cycle, &fs, &fadj);

    let mut lagrange: Vec<Option<usize>> = vec![None; n_levels as usize];
    let mut markov: Vec<Option<usize>> = vec![None; n_levels as usize];
    let ids: Box<dyn Iterator<Item = usize>> = match ties {
        TieOrder::Forward => Box::new(0..m),
        TieOrder::Reverse => Box::new((0..m).rev()),
    };
    for e in ids {
        let l = level[e];
        let slot = l as usize;
        if joined[e] <= l && lagrange[slot].is_none() {
            lagrange[slot] = Some(e);
        }
        if reaches[edges[e].target] <= l && reached[edges[e].source] <= l && markov[slot].is_none() {
            markov[slot] = Some(e);
        }
    }
    EdgeClassification {
        lagrange: lagrange.into_iter().flatten().collect(),
        markov: markov.into_iter().flatten().collect(),
    }
}

pub fn offline_weight_sets<W: Ord + Clone>(g: &WeightedDigraph<W>) -> WeightSets<W> {
    offline_classify(g, TieOrder::Forward).weight_sets(g)
}
