//! Lagrange and Markov edges of weighted digraphs, and the spectrum
//! approximations they induce on the product graph.
//!
//! An edge is *Lagrange* when it has maximal weight (ties allowed) on some
//! cycle through it, and *Markov* when it has maximal weight on some
//! configuration "cycle, path, cycle" through it. The weights of these edges
//! in the product graph over `C_{K,Q}` are `1/Q`-close to the Lagrange and
//! Markov spectra.

pub mod digraph;
pub mod incremental;
pub mod naive;
pub mod offline;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cylinder_sets::CylinderSet;
use crate::error::{Error, Result};
use crate::exact_numbers::{compare_real, Rational, Surd};
use crate::graph_builder::{build_compressed, EdgeInfo, ProductGraph, ShiftTriple};

pub use digraph::{Adjacency, Edge, Weight, WeightedDigraph};
pub use incremental::{incremental_classify, incremental_weight_sets, incremental_weight_sets_with};
pub use naive::{is_lagrange_edge, is_markov_edge, naive_classify, naive_weight_sets};
pub use offline::{offline_classify, offline_weight_sets};

/// Sorted, deduplicated weights of the Lagrange and Markov edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSets<W> {
    pub lagrange: Vec<W>,
    pub markov: Vec<W>,
}

/// One witness edge per distinct weight, in increasing weight order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeClassification {
    pub lagrange: Vec<usize>,
    pub markov: Vec<usize>,
}

impl EdgeClassification {
    pub fn weight_sets<W: Clone>(&self, g: &WeightedDigraph<W>) -> WeightSets<W> {
        let pick = |ids: &[usize]| ids.iter().map(|&e| g.edge(e).weight.clone()).collect();
        WeightSets { lagrange: pick(&self.lagrange), markov: pick(&self.markov) }
    }
}

/// Insertion order among edges of equal weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieOrder {
    Forward,
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Lagrange,
    Markov,
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumKind::Lagrange => "lagrange",
            SpectrumKind::Markov => "markov",
        })
    }
}

impl FromStr for SpectrumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lagrange" => Ok(SpectrumKind::Lagrange),
            "markov" => Ok(SpectrumKind::Markov),
            _ => Err(Error::Config(format!("unknown spectrum kind {s:?}"))),
        }
    }
}

/// Finite set of weights `1/Q`-close to one of the spectra for alphabet `1..=K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumApproximation {
    pub kind: SpectrumKind,
    pub k: u8,
    pub q: u64,
    /// Strictly increasing.
    pub weights: Vec<Surd>,
    /// Shift edge realizing each weight.
    pub provenance: Vec<ShiftTriple>,
}

impl SpectrumApproximation {
    pub fn resolution(&self) -> Rational {
        Rational::new(1.into(), self.q.into())
    }

    pub fn min(&self) -> Option<&Surd> {
        self.weights.first()
    }

    pub fn max(&self) -> Option<&Surd> {
        self.weights.last()
    }

    /// Whether every weight lies in `[sqrt(5) - 1/Q, sqrt(K^2 + 4K) + 1/Q]`,
    /// the range of both spectra widened by the resolution.
    pub fn within_bounds(&self) -> bool {
        let eps = self.resolution();
        let k = u128::from(self.k);
        let lo = Surd::sqrt(5).expect("5 is square-free").add_rational(&-eps.clone());
        let hi = Surd::sqrt(k * k + 4 * k).expect("K^2 + 4K is never a square").add_rational(&eps);
        self.weights.iter().all(|w| compare_real(w, &lo) != Ordering::Less && compare_real(w, &hi) != Ordering::Greater)
    }
}

/// Both approximations, sharing one graph construction and one solve.
#[derive(Clone, Debug)]
pub struct Spectra {
    pub lagrange: SpectrumApproximation,
    pub markov: SpectrumApproximation,
}

impl Spectra {
    pub fn get(&self, kind: SpectrumKind) -> &SpectrumApproximation {
        match kind {
            SpectrumKind::Lagrange => &self.lagrange,
            SpectrumKind::Markov => &self.markov,
        }
    }
}

pub fn spectrum(cs: &CylinderSet, kind: SpectrumKind) -> SpectrumApproximation {
    let both = spectra(cs);
    match kind {
        SpectrumKind::Lagrange => both.lagrange,
        SpectrumKind::Markov => both.markov,
    }
}

pub fn spectra(cs: &CylinderSet) -> Spectra {
    spectra_of(&build_compressed(cs))
}

/// Solves the given product graph; it must carry no cycle of prolongations only.
pub fn spectra_of(g: &ProductGraph<'_>) -> Spectra {
    spectra_with(g, Solver::Offline)
}

/// Which edge classifier drives [`spectra_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Naive,
    Incremental,
    Offline,
}

pub fn spectra_with(g: &ProductGraph<'_>, solver: Solver) -> Spectra {
    let cls = match solver {
        Solver::Naive => naive_classify(g.graph()),
        Solver::Incremental => incremental_classify(g.graph(), TieOrder::Forward),
        Solver::Offline => offline_classify(g.graph(), TieOrder::Forward),
    };
    let cs = g.cylinders();
    let make = |kind, ids: &[usize]| {
        let mut weights = Vec::with_capacity(ids.len());
        let mut provenance = Vec::with_capacity(ids.len());
        for &e in ids {
            match g.info(e) {
                EdgeInfo::Shift(t) => {
                    weights.push(g.weight(e).expect("shift edges are weighted").clone());
                    provenance.push(t);
                }
                EdgeInfo::Prolongation { .. } => unreachable!("a cycle of prolongations only"),
            }
        }
        SpectrumApproximation { kind, k: cs.k(), q: cs.q(), weights, provenance }
    };
    Spectra { lagrange: make(SpectrumKind::Lagrange, &cls.lagrange), markov: make(SpectrumKind::Markov, &cls.markov) }
}

/// Whether every element of `a` is within `eps` of some element of `b` and
/// vice versa. Both slices must be sorted increasingly; an empty set is close
/// only to an empty set.
pub fn hausdorff_close(a: &[Surd], b: &[Surd], eps: &Rational) -> bool {
    directed_close(a, b, eps) && directed_close(b, a, eps)
}

/// Whether every element of `a` is within `eps` (inclusive) of some element of sorted `b`.
pub fn directed_close(a: &[Surd], b: &[Surd], eps: &Rational) -> bool {
    a.iter().all(|x| nearest_within(b, x, eps))
}

/// Whether sorted `b` has an element within `eps` (inclusive) of `x`.
pub fn nearest_within(b: &[Surd], x: &Surd, eps: &Rational) -> bool {
    let i = b.partition_point(|w| compare_real(w, x) == Ordering::Less);
    let above = b.get(i).is_some_and(|w| compare_real(&w.add_rational(&-eps.clone()), x) != Ordering::Greater);
    let below = i > 0 && compare_real(&b[i - 1].add_rational(eps), x) != Ordering::Less;
    above || below
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continued_fractions::make_context;
    use crate::cylinder_sets::build_cylinders;
    use crate::graph_builder::build_product;

    fn cs(k: u32, q: u64) -> CylinderSet {
        build_cylinders(&make_context(k).unwrap(), q).unwrap()
    }

    #[test]
    fn compressed_matches_reference() {
        for (k, q) in [(2, 3), (2, 20), (3, 15)] {
            let c = cs(k, q);
            let a = spectra_of(&build_product(&c));
            let b = spectra_of(&build_compressed(&c));
            assert_eq!(a.lagrange.weights, b.lagrange.weights);
            assert_eq!(a.markov.weights, b.markov.weights);
        }
    }

    #[test]
    fn two_leaf_spectrum() {
        let s = spectra(&cs(2, 3));
        assert!(!s.lagrange.weights.is_empty());
        assert!(s.lagrange.within_bounds() && s.markov.within_bounds());
        assert!(s.lagrange.weights.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn provenance_reproduces_weights() {
        let c = cs(2, 20);
        let s = spectra(&c);
        for (w, t) in s.markov.weights.iter().zip(&s.markov.provenance) {
            assert_eq!(*w, crate::graph_builder::shift_weight(&c, *t));
        }
    }

    #[test]
    fn closeness() {
        let x = |n: i64| Surd::from_integer(n, 5).unwrap();
        let eps = Rational::from_integer(1.into());
        assert!(hausdorff_close(&[x(1), x(3)], &[x(2)], &eps));
        assert!(!hausdorff_close(&[x(1), x(4)], &[x(2)], &eps));
        assert!(hausdorff_close(&[], &[], &eps));
        assert!(!hausdorff_close(&[x(1)], &[], &eps));
    }
}
