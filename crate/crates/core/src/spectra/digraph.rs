use std::fmt;

/// Edge weight extended with a bottom element that sorts below every value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight<W> {
    Bottom,
    Value(W),
}

impl<W> Weight<W> {
    pub fn value(&self) -> Option<&W> {
        match self {
            Weight::Bottom => None,
            Weight::Value(w) => Some(w),
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Weight::Bottom)
    }
}

impl<W: fmt::Display> fmt::Display for Weight<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Bottom => write!(f, "⊥"),
            Weight::Value(w) => w.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<W> {
    pub source: usize,
    pub target: usize,
    pub weight: W,
}

/// Directed multigraph with totally ordered edge weights.
#[derive(Clone, Debug)]
pub struct WeightedDigraph<W> {
    n_vertices: usize,
    edges: Vec<Edge<W>>,
}

impl<W> WeightedDigraph<W> {
    pub fn new(n_vertices: usize) -> Self {
        WeightedDigraph { n_vertices, edges: Vec::new() }
    }

    pub fn with_capacity(n_vertices: usize, n_edges: usize) -> Self {
        WeightedDigraph { n_vertices, edges: Vec::with_capacity(n_edges) }
    }

    /// Adds `source -> target`; panics when an endpoint is out of range.
    pub fn add_edge(&mut self, source: usize, target: usize, weight: W) -> usize {
        assert!(
            source < self.n_vertices && target < self.n_vertices,
            "edge {source} -> {target} out of range for {} vertices",
            self.n_vertices
        );
        self.edges.push(Edge { source, target, weight });
        self.edges.len() - 1
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge<W> {
        &self.edges[e]
    }

    pub fn map_weights<V>(&self, mut f: impl FnMut(&W) -> V) -> WeightedDigraph<V> {
        WeightedDigraph {
            n_vertices: self.n_vertices,
            edges: self
                .edges
                .iter()
                .map(|e| Edge { source: e.source, target: e.target, weight: f(&e.weight) })
                .collect(),
        }
    }

    /// Outgoing edge ids per vertex.
    pub fn out_adjacency(&self) -> Adjacency {
        Adjacency::build(self.n_vertices, self.edges.iter().map(|e| e.source))
    }

    /// Incoming edge ids per vertex.
    pub fn in_adjacency(&self) -> Adjacency {
        Adjacency::build(self.n_vertices, self.edges.iter().map(|e| e.target))
    }
}

/// Compressed sparse rows of edge ids keyed by vertex.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    edge_ids: Vec<usize>,
}

impl Adjacency {
    fn build(n: usize, keys: impl Iterator<Item = usize> + Clone) -> Adjacency {
        let mut offsets = vec![0usize; n + 1];
        for v in keys.clone() {
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut edge_ids = vec![0usize; offsets[n]];
        for (e, v) in keys.enumerate() {
            edge_ids[fill[v]] = e;
            fill[v] += 1;
        }
        Adjacency { offsets, edge_ids }
    }

    pub fn of(&self, v: usize) -> &[usize] {
        &self.edge_ids[self.offsets[v]..self.offsets[v + 1]]
    }
}
