//! Graphs over `C_{K,Q}` whose bi-infinite paths spell the sequences of `Σ_K`.
//!
//! A state `(p, a0, u)` of the product graph stands for the sequences whose
//! reversed left tail starts with the leaf `p`, whose center digit is `a0`
//! and whose right tail starts with the trie node `u`. Prolongation edges
//! read one more digit of the right tail; when `u` reaches a leaf `s`, the
//! shift edge moves the center one step right and carries the weight
//! `a0 + mid(p) + mid(s)`, which is within `1/Q` of `λ0` on its cylinder.

use crate::continued_fractions::Word;
use crate::cylinder_sets::{CylinderSet, PrefixTrie};
use crate::error::{Error, Result};
use crate::exact_numbers::{Rational, Surd};
use crate::spectra::digraph::{Adjacency, Weight, WeightedDigraph};

/// The prefix trie of `C_{K,Q}` together with the suffix link of every leaf.
#[derive(Clone, Debug)]
pub struct SuffixTrie<'c> {
    cs: &'c CylinderSet,
    suffix_link: Vec<usize>,
    vplus: Vec<usize>,
    in_vplus: Vec<bool>,
}

pub fn build_trie(cs: &CylinderSet) -> SuffixTrie<'_> {
    let trie = cs.trie();
    let suffix_link: Vec<usize> = cs
        .leaves()
        .iter()
        .map(|leaf| trie.locate(&leaf.digits()[1..]).expect("a suffix of a leaf lies in the prefix closure"))
        .collect();
    let mut in_vplus = vec![false; trie.len()];
    for &v in &suffix_link {
        in_vplus[v] = true;
    }
    let vplus = (0..trie.len()).filter(|&v| in_vplus[v]).collect();
    SuffixTrie { cs, suffix_link, vplus, in_vplus }
}

impl<'c> SuffixTrie<'c> {
    pub fn cylinders(&self) -> &'c CylinderSet {
        self.cs
    }

    pub fn trie(&self) -> &'c PrefixTrie {
        self.cs.trie()
    }

    /// Node spelling leaf `i` without its first digit.
    pub fn suffix_link(&self, leaf: usize) -> usize {
        self.suffix_link[leaf]
    }

    pub fn suffix_links(&self) -> &[usize] {
        &self.suffix_link
    }

    /// Endpoints of suffix links, in node order.
    pub fn vplus(&self) -> &[usize] {
        &self.vplus
    }

    pub fn is_vplus(&self, node: usize) -> bool {
        self.in_vplus[node]
    }

    /// Deepest ancestor-or-self of `node` in `V+`.
    pub fn nearest_vplus(&self, mut node: usize) -> Option<usize> {
        let trie = self.trie();
        loop {
            if self.in_vplus[node] {
                return Some(node);
            }
            node = trie.node(node).parent?;
        }
    }

    fn path_label(&self, from: usize, to: usize) -> Word {
        let word = self.trie().word_of(to);
        let depth = self.trie().node(from).depth;
        Word::from_trusted(word.digits()[depth..].to_vec(), self.cs.k())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Prolongation,
    Shift,
}

/// Edge of `G+` between trie nodes; shift edges also name the leaf they complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPlusEdge {
    pub source: usize,
    pub target: usize,
    pub kind: EdgeKind,
    pub label: Word,
    pub leaf: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct GPlus {
    vertices: Vec<usize>,
    edges: Vec<GPlusEdge>,
    out: Vec<Vec<usize>>,
}

pub fn build_gplus(t: &SuffixTrie<'_>) -> GPlus {
    let trie = t.trie();
    let mut edges = Vec::new();
    let mut out = Vec::with_capacity(t.vplus().len());
    for &v in t.vplus() {
        let mut ids = Vec::new();
        // Explore below v until the first V+ node or leaf on every branch.
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if u != v && t.is_vplus(u) {
                ids.push(edges.len());
                edges.push(GPlusEdge {
                    source: v,
                    target: u,
                    kind: EdgeKind::Prolongation,
                    label: t.path_label(v, u),
                    leaf: None,
                });
            } else if let Some(leaf) = trie.leaf_index(u) {
                ids.push(edges.len());
                edges.push(GPlusEdge {
                    source: v,
                    target: t.suffix_link(leaf),
                    kind: EdgeKind::Shift,
                    label: t.path_label(v, u),
                    leaf: Some(leaf),
                });
            } else {
                // reversed so that edges come out in lexicographic label order
                let children: Vec<usize> = trie.children(u).collect();
                stack.extend(children.into_iter().rev());
            }
        }
        out.push(ids);
    }
    GPlus { vertices: t.vplus().to_vec(), edges, out }
}

impl GPlus {
    /// Trie nodes of `V+`, in node order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GPlusEdge] {
        &self.edges
    }

    /// Edges leaving the `i`-th vertex.
    pub fn out_edges(&self, i: usize) -> impl Iterator<Item = &GPlusEdge> {
        self.out[i].iter().map(move |&e| &self.edges[e])
    }

    pub fn vertex_index(&self, node: usize) -> Option<usize> {
        self.vertices.binary_search(&node).ok()
    }

    pub fn count(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }
}

/// A shift edge of the product graph: left leaf, center digit, right leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftTriple {
    pub p: usize,
    pub a0: u8,
    pub s: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeInfo {
    /// Descent in the trie between the given nodes, left leaf and center unchanged.
    Prolongation {
        from: usize,
        to: usize,
    },
    Shift(ShiftTriple),
}

/// The product graph. Edge weights are ranks into [`ProductGraph::values`],
/// so the graph algorithms compare machine integers instead of surds.
#[derive(Clone, Debug)]
pub struct ProductGraph<'c> {
    cs: &'c CylinderSet,
    compressed: bool,
    slots: Vec<usize>,
    slot_of: Vec<Option<usize>>,
    graph: WeightedDigraph<Weight<u32>>,
    info: Vec<EdgeInfo>,
    values: Vec<Surd>,
    out: Adjacency,
}

/// `F(p, a0, s) = a0 + mid(p) + mid(s)`.
pub fn shift_weight(cs: &CylinderSet, t: ShiftTriple) -> Surd {
    (cs.mid(t.p) + cs.mid(t.s)).add_rational(&Rational::from_integer(t.a0.into()))
}

/// Distinct shift weights in increasing order, and the rank of every
/// triple indexed by `(p * K + a0 - 1) * |C| + s`.
fn rank_weights(cs: &CylinderSet) -> (Vec<Surd>, Vec<u32>) {
    let n = cs.len();
    let k = usize::from(cs.k());
    let mut all: Vec<(Surd, f64, usize)> = Vec::with_capacity(n * n * k);
    for p in 0..n {
        for a0 in 1..=cs.k() {
            for s in 0..n {
                let w = shift_weight(cs, ShiftTriple { p, a0, s });
                let approx = w.approx();
                all.push((w, approx, (p * k + usize::from(a0) - 1) * n + s));
            }
        }
    }
    // Floating point decides only when far from a tie, so this is the exact order.
    all.sort_by(|x, y| if (x.1 - y.1).abs() > 1e-9 { x.1.total_cmp(&y.1) } else { x.0.cmp(&y.0) });
    let mut values: Vec<Surd> = Vec::new();
    let mut rank = vec![0u32; all.len()];
    for (w, _, idx) in all {
        if values.last() != Some(&w) {
            values.push(w);
        }
        rank[idx] = u32::try_from(values.len() - 1).expect("fewer than 2^32 distinct weights");
    }
    (values, rank)
}

/// `prefix_leaf(a0 · p)` for every leaf `p` and digit `a0`, indexed `p * K + a0 - 1`.
fn left_shifts(cs: &CylinderSet) -> Vec<usize> {
    let mut table = Vec::with_capacity(cs.len() * usize::from(cs.k()));
    let mut buf = Vec::new();
    for p in 0..cs.len() {
        for a0 in 1..=cs.k() {
            buf.clear();
            buf.push(a0);
            buf.extend_from_slice(cs.leaf(p).digits());
            table.push(cs.prefix_leaf_index(&buf).expect("a0·p has diameter at most that of p"));
        }
    }
    table
}

struct Builder<'c> {
    cs: &'c CylinderSet,
    slot_of: Vec<Option<usize>>,
    n_slots: usize,
    left: Vec<usize>,
    rank: Vec<u32>,
    graph: WeightedDigraph<Weight<u32>>,
    info: Vec<EdgeInfo>,
}

impl Builder<'_> {
    fn state(&self, p: usize, a0: u8, node: usize) -> usize {
        let slot = self.slot_of[node].expect("state node has a slot");
        (p * usize::from(self.cs.k()) + usize::from(a0) - 1) * self.n_slots + slot
    }

    fn prolongation(&mut self, p: usize, a0: u8, from: usize, to: usize) {
        let (u, v) = (self.state(p, a0, from), self.state(p, a0, to));
        self.graph.add_edge(u, v, Weight::Bottom);
        self.info.push(EdgeInfo::Prolongation { from, to });
    }

    fn shift(&mut self, p: usize, a0: u8, from: usize, s: usize, suffix: usize) {
        let k = usize::from(self.cs.k());
        let n = self.cs.len();
        let p_next = self.left[p * k + usize::from(a0) - 1];
        let s1 = self.cs.leaf(s).digits()[0];
        let (u, v) = (self.state(p, a0, from), self.state(p_next, s1, suffix));
        let rank = self.rank[(p * k + usize::from(a0) - 1) * n + s];
        self.graph.add_edge(u, v, Weight::Value(rank));
        self.info.push(EdgeInfo::Shift(ShiftTriple { p, a0, s }));
    }
}

/// Reference construction: one state per trie node, one-digit prolongations.
pub fn build_product(cs: &CylinderSet) -> ProductGraph<'_> {
    let t = build_trie(cs);
    let trie = cs.trie();
    let slots: Vec<usize> = (0..trie.len()).collect();
    let slot_of = slots.iter().map(|&s| Some(s)).collect();
    finish(cs, false, slots, slot_of, |b| {
        for p in 0..cs.len() {
            for a0 in 1..=cs.k() {
                for u in 0..trie.len() {
                    match trie.leaf_index(u) {
                        Some(s) => b.shift(p, a0, u, s, t.suffix_link(s)),
                        None => {
                            for c in trie.children(u) {
                                b.prolongation(p, a0, u, c);
                            }
                        }
                    }
                }
            }
        }
    })
}

/// States restricted to `V+`, prolongation chains contracted along `G+`.
pub fn build_compressed(cs: &CylinderSet) -> ProductGraph<'_> {
    let t = build_trie(cs);
    let gplus = build_gplus(&t);
    let slots = gplus.vertices().to_vec();
    let mut slot_of = vec![None; cs.trie().len()];
    for (i, &v) in slots.iter().enumerate() {
        slot_of[v] = Some(i);
    }
    finish(cs, true, slots, slot_of, |b| {
        for p in 0..cs.len() {
            for a0 in 1..=cs.k() {
                for i in 0..gplus.vertices().len() {
                    for e in gplus.out_edges(i) {
                        match e.leaf {
                            Some(s) => b.shift(p, a0, e.source, s, e.target),
                            None => b.prolongation(p, a0, e.source, e.target),
                        }
                    }
                }
            }
        }
    })
}

fn finish<'c>(
    cs: &'c CylinderSet,
    compressed: bool,
    slots: Vec<usize>,
    slot_of: Vec<Option<usize>>,
    fill: impl FnOnce(&mut Builder<'c>),
) -> ProductGraph<'c> {
    let (values, rank) = rank_weights(cs);
    let n_states = cs.len() * usize::from(cs.k()) * slots.len();
    let mut b = Builder {
        cs,
        n_slots: slots.len(),
        slot_of,
        left: left_shifts(cs),
        rank,
        graph: WeightedDigraph::new(n_states),
        info: Vec::new(),
    };
    fill(&mut b);
    let out = b.graph.out_adjacency();
    ProductGraph { cs, compressed, slots, slot_of: b.slot_of, graph: b.graph, info: b.info, values, out }
}

/// A path of the product graph: its first state and its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl<'c> ProductGraph<'c> {
    pub fn cylinders(&self) -> &'c CylinderSet {
        self.cs
    }

    pub fn is_compressed(&self) -> bool {
        self.compressed
    }

    pub fn graph(&self) -> &WeightedDigraph<Weight<u32>> {
        &self.graph
    }

    pub fn n_states(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn n_edges(&self) -> usize {
        self.graph.n_edges()
    }

    pub fn count(&self, kind: EdgeKind) -> usize {
        self.info.iter().filter(|i| (kind == EdgeKind::Shift) == matches!(i, EdgeInfo::Shift(_))).count()
    }

    /// State id of `(p, a0, node)`, if `node` is a state of this graph.
    pub fn state(&self, p: usize, a0: u8, node: usize) -> Option<usize> {
        let slot = self.slot_of[node]?;
        Some((p * usize::from(self.cs.k()) + usize::from(a0) - 1) * self.slots.len() + slot)
    }

    /// Inverse of [`ProductGraph::state`]: `(p, a0, node)`.
    pub fn state_parts(&self, id: usize) -> (usize, u8, usize) {
        let n_slots = self.slots.len();
        let k = usize::from(self.cs.k());
        let (pa, slot) = (id / n_slots, id % n_slots);
        (pa / k, (pa % k + 1) as u8, self.slots[slot])
    }

    pub fn info(&self, e: usize) -> EdgeInfo {
        self.info[e]
    }

    pub fn out_edges(&self, state: usize) -> &[usize] {
        self.out.of(state)
    }

    /// Distinct shift weights in increasing order.
    pub fn values(&self) -> &[Surd] {
        &self.values
    }

    pub fn weight(&self, e: usize) -> Option<&Surd> {
        self.graph.edge(e).weight.value().map(|&r| &self.values[r as usize])
    }

    /// Digits of the right tail read along edge `e`.
    pub fn label(&self, e: usize) -> Vec<u8> {
        let trie = self.cs.trie();
        let (from, to) = match self.info[e] {
            EdgeInfo::Prolongation { from, to } => (from, to),
            EdgeInfo::Shift(t) => {
                let (_, _, from) = self.state_parts(self.graph.edge(e).source);
                (from, self.cs.leaf_node(t.s))
            }
        };
        trie.word_of(to).digits()[trie.node(from).depth..].to_vec()
    }

    pub fn walk_labels(&self, walk: &Walk) -> Vec<u8> {
        walk.edges.iter().flat_map(|&e| self.label(e)).collect()
    }

    /// Center digits of the shift edges along `walk`, i.e. the digits it moves past.
    pub fn walk_centers(&self, walk: &Walk) -> Vec<u8> {
        walk.edges
            .iter()
            .filter_map(|&e| match self.info[e] {
                EdgeInfo::Shift(t) => Some(t.a0),
                EdgeInfo::Prolongation { .. } => None,
            })
            .collect()
    }

    /// Size bound `|C| (|C| + log2((K(K+1)+1)(K+2) Q / K))` on the number of edges.
    pub fn edge_bound(&self) -> f64 {
        edge_bound(self.cs)
    }

    /// The path reading `window`, centered at `window[origin]`.
    ///
    /// The left leaf is read from `window[..origin]` backwards, continued by
    /// the digits of leaf `left_pad` when given. The walk starts at the root
    /// and consumes every digit right of the origin; it fails with
    /// [`Error::InsufficientContext`] when the left leaf is undetermined or
    /// no cylinder on the right is completed. Only the uncompressed graph
    /// has a root state to start from.
    pub fn encode_walk(&self, window: &[u8], origin: usize, left_pad: Option<usize>) -> Result<Walk> {
        if self.compressed {
            return Err(Error::Config("walks are encoded on the uncompressed product graph".into()));
        }
        let k = self.cs.k();
        if let Some(&digit) = window.iter().find(|&&d| d == 0 || d > k) {
            return Err(Error::DigitOutOfRange { digit, k });
        }
        if origin >= window.len() {
            return Err(Error::InsufficientContext(format!(
                "origin {origin} outside a window of {} digits",
                window.len()
            )));
        }
        let mut left: Vec<u8> = window[..origin].iter().rev().copied().collect();
        if let Some(pad) = left_pad {
            left.extend_from_slice(self.cs.leaf(pad).digits());
        }
        let p = self.cs.prefix_leaf_index(&left)?;
        let trie = self.cs.trie();
        let start = self.state(p, window[origin], PrefixTrie::ROOT).expect("every node is a state");
        let mut state = start;
        let mut edges = Vec::new();
        let mut shifts = 0;
        let mut next = origin + 1;
        loop {
            let (_, _, node) = self.state_parts(state);
            let e = if trie.is_leaf(node) {
                shifts += 1;
                self.out_edges(state)[0]
            } else if next < window.len() {
                let child = trie.child(node, window[next]).expect("internal node");
                next += 1;
                *self
                    .out_edges(state)
                    .iter()
                    .find(|&&e| self.info[e] == EdgeInfo::Prolongation { from: node, to: child })
                    .expect("one prolongation per child")
            } else {
                break;
            };
            edges.push(e);
            state = self.graph.edge(e).target;
        }
        if shifts == 0 {
            return Err(Error::InsufficientContext(format!(
                "{} digits right of the origin complete no cylinder of C_{{{},{}}}",
                window.len() - origin - 1,
                k,
                self.cs.q()
            )));
        }
        Ok(Walk { start, edges })
    }
}

pub fn edge_bound(cs: &CylinderSet) -> f64 {
    let k = f64::from(cs.k());
    let c = cs.len() as f64;
    c * (c + ((k * (k + 1.0) + 1.0) * (k + 2.0) * cs.q() as f64 / k).log2())
}
