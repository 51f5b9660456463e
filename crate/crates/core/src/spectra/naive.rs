//! Per-edge tests by depth-first search, `O(m)` each.

use rayon::prelude::*;

use super::digraph::{Adjacency, WeightedDigraph};
use super::{EdgeClassification, WeightSets};

/// True iff `target(e)` reaches `source(e)` through edges of weight at most `weight(e)`.
pub fn is_lagrange_edge<W: Ord>(g: &WeightedDigraph<W>, e: usize) -> bool {
    lagrange_with(g, &g.out_adjacency(), e)
}

/// True iff, among edges of weight at most `weight(e)`, `target(e)` reaches a
/// cycle and `source(e)` is reached from one.
pub fn is_markov_edge<W: Ord>(g: &WeightedDigraph<W>, e: usize) -> bool {
    markov_with(g, &g.out_adjacency(), &g.in_adjacency(), e)
}

fn lagrange_with<W: Ord>(g: &WeightedDigraph<W>, out: &Adjacency, e: usize) -> bool {
    let edge = g.edge(e);
    if edge.source == edge.target {
        return true;
    }
    let mut seen = vec![false; g.n_vertices()];
    let mut stack = vec![edge.target];
    seen[edge.target] = true;
    while let Some(v) = stack.pop() {
        for &f in out.of(v) {
            let next = g.edge(f);
            if next.weight > edge.weight || seen[next.target] {
                continue;
            }
            if next.target == edge.source {
                return true;
            }
            seen[next.target] = true;
            stack.push(next.target);
        }
    }
    false
}

fn markov_with<W: Ord>(g: &WeightedDigraph<W>, out: &Adjacency, inc: &Adjacency, e: usize) -> bool {
    let edge = g.edge(e);
    reaches_cycle(g, out, edge.target, &edge.weight, true) && reaches_cycle(g, inc, edge.source, &edge.weight, false)
}

/// Whether the part of the `<= bound` subgraph explored from `start` (along
/// edges when `forward`, against them otherwise) contains a cycle; detected
/// as a back edge of the depth-first search.
fn reaches_cycle<W: Ord>(g: &WeightedDigraph<W>, adj: &Adjacency, start: usize, bound: &W, forward: bool) -> bool {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let mut color = vec![WHITE; g.n_vertices()];
    let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
    color[start] = GRAY;
    while let Some(top) = stack.last_mut() {
        let (v, i) = *top;
        let ids = adj.of(v);
        if i == ids.len() {
            color[v] = BLACK;
            stack.pop();
            continue;
        }
        top.1 += 1;
        let f = g.edge(ids[i]);
        if f.weight > *bound {
            continue;
        }
        let next = if forward { f.target } else { f.source };
        match color[next] {
            GRAY => return true,
            WHITE => {
                color[next] = GRAY;
                stack.push((next, 0));
            }
            _ => {}
        }
    }
    false
}

/// Every edge tested independently; one witness edge per distinct weight.
pub fn naive_classify<W: Ord + Sync>(g: &WeightedDigraph<W>) -> EdgeClassification {
    let out = g.out_adjacency();
    let inc = g.in_adjacency();
    let flags: Vec<(bool, bool)> =
        (0..g.n_edges()).into_par_iter().map(|e| (lagrange_with(g, &out, e), markov_with(g, &out, &inc, e))).collect();
    let pick = |select: fn(&(bool, bool)) -> bool| {
        let mut ids: Vec<usize> = (0..g.n_edges()).filter(|&e| select(&flags[e])).collect();
        ids.sort_by(|&a, &b| g.edge(a).weight.cmp(&g.edge(b).weight).then(a.cmp(&b)));
        ids.dedup_by(|b, a| g.edge(*a).weight == g.edge(*b).weight);
        ids
    };
    EdgeClassification { lagrange: pick(|f| f.0), markov: pick(|f| f.1) }
}

pub fn naive_weight_sets<W: Ord + Clone + Sync>(g: &WeightedDigraph<W>) -> WeightSets<W> {
    naive_classify(g).weight_sets(g)
}
