//! Independent ground truth: exact Lagrange values of periodic sequences,
//! certified enclosures of Markov values of eventually periodic ones, and
//! the nets of periodic values used to check computed spectra.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::continued_fractions::{convergents, periodic_value, KContext, Word};
use crate::error::{Error, Result};
use crate::exact_numbers::{compare_real, Rational, Surd};
use crate::spectra::{nearest_within, SpectrumApproximation};

/// The bi-infinite word `... u u u ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSequence {
    period: Word,
}

impl PeriodicSequence {
    pub fn new(period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(PeriodicSequence { period })
    }

    pub fn period(&self) -> &Word {
        &self.period
    }
}

/// `... p p p center s s s ...`, with `center` occupying positions `0..|center|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventuallyPeriodic {
    left_period: Word,
    center: Word,
    right_period: Word,
}

impl EventuallyPeriodic {
    pub fn new(left_period: Word, center: Word, right_period: Word) -> Result<Self> {
        if left_period.is_empty() || right_period.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(EventuallyPeriodic { left_period, center, right_period })
    }

    pub fn periodic(period: Word) -> Result<Self> {
        let k = period.k();
        Self::new(period.clone(), Word::empty(k), period)
    }

    pub fn left_period(&self) -> &Word {
        &self.left_period
    }

    pub fn center(&self) -> &Word {
        &self.center
    }

    pub fn right_period(&self) -> &Word {
        &self.right_period
    }

    pub fn digit_at(&self, i: i64) -> u8 {
        let c = self.center.len() as i64;
        if i < 0 {
            let p = self.left_period.digits();
            let n = p.len() as i64;
            p[(n - 1 - (-1 - i) % n) as usize]
        } else if i < c {
            self.center.digits()[i as usize]
        } else {
            let s = self.right_period.digits();
            s[((i - c) % s.len() as i64) as usize]
        }
    }
}

/// Closed rational interval `[lo, hi]` known to contain a real value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueEnclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl ValueEnclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        ValueEnclosure { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Surd) -> bool {
        x.cmp_rational(&self.lo) != Ordering::Less && x.cmp_rational(&self.hi) != Ordering::Greater
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// Enclosure of `x + y`.
    pub fn add(&self, other: &ValueEnclosure) -> ValueEnclosure {
        ValueEnclosure::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }
}

/// `L` of a periodic word: the largest `λ0` over the positions of one period.
///
/// At the position of `r_0` for the rotation `r`, the right tail is the
/// periodic fraction of `r` rotated by one and the left tail that of `r`
/// reversed. Rotation and reversal keep the trace of the period's matrix,
/// so all these values share one quadratic field and the maximum is exact.
pub fn lagrange_periodic(s: &PeriodicSequence) -> Surd {
    let period = s.period();
    (0..period.len())
        .map(|i| {
            let r = period.rotated(i);
            let right = periodic_value(&r.rotated(1)).expect("nonempty period");
            let left = periodic_value(&r.reversed()).expect("nonempty period");
            (right + left).add_rational(&Rational::from_integer(r.digits()[0].into()))
        })
        .max()
        .expect("nonempty period")
}

pub fn lagrange_of_period(period: &Word) -> Result<Surd> {
    Ok(lagrange_periodic(&PeriodicSequence::new(period.clone())?))
}

/// Enclosure of `[0; digits, t]` over every tail `t` in `[0, 1]`.
pub fn tail_enclosure(digits: &[u8]) -> ValueEnclosure {
    let c = convergents(digits);
    let a = Rational::new(c.p.clone(), c.q.clone());
    let b = Rational::new(&c.p + &c.p_prev, &c.q + &c.q_prev);
    if a <= b {
        ValueEnclosure::new(a, b)
    } else {
        ValueEnclosure::new(b, a)
    }
}

/// Enclosure of `λ0 = a0 + [0; left...] + [0; right...]` over all infinite
/// continuations of the given tails; `left` lists `a_{-1}, a_{-2}, ...`.
pub fn lambda0_enclosure(left: &[u8], a0: u8, right: &[u8]) -> ValueEnclosure {
    let center = Rational::from_integer(a0.into());
    let sum = tail_enclosure(left).add(&tail_enclosure(right));
    ValueEnclosure::new(sum.lo + &center, sum.hi + center)
}

/// `2^(1-n)`: two continued fractions sharing their first `n` digits differ by less.
fn truncation_bound(n: usize) -> Rational {
    let exp = u32::try_from(n.max(1) - 1).expect("depth fits u32");
    Rational::new(BigInt::one(), BigInt::from(2u32).pow(exp))
}

/// Enclosure of the Markov value `sup_n λ0(σ^n a)` of an eventually periodic sequence.
///
/// Positions within `w` of the center block are evaluated with both tails
/// truncated at depth `w`. Every position further out shares at least `w`
/// digits on its short side with a periodic sequence, so its value is at
/// most that periodic sequence's `L` plus `2^(1-w)`; the bound used is
/// `L + 2 * 2^(1-w)`, which keeps the enclosure width nonincreasing in `w`.
/// Those `L` also bound the supremum from below, being limits of values
/// far out. Exact surds are rounded outward at `precision` decimals.
pub fn markov_window(s: &EventuallyPeriodic, w: usize, precision: u32) -> ValueEnclosure {
    let w = w.max(1);
    let width = w as i64;
    let c = s.center().len() as i64;
    let positions: Vec<i64> = (-width..c + width).collect();
    let encs: Vec<ValueEnclosure> = positions
        .par_iter()
        .map(|&i| {
            let left: Vec<u8> = (1..=width).map(|j| s.digit_at(i - j)).collect();
            let right: Vec<u8> = (1..=width).map(|j| s.digit_at(i + j)).collect();
            lambda0_enclosure(&left, s.digit_at(i), &right)
        })
        .collect();
    let mut lo = encs.iter().map(|e| e.lo.clone()).max().expect("window is nonempty");
    let mut hi = encs.into_iter().map(|e| e.hi).max().expect("window is nonempty");
    let slack = truncation_bound(w) * Rational::from_integer(2.into());
    for period in [s.left_period(), s.right_period()] {
        let (l_lo, l_hi) = lagrange_of_period(period).expect("nonempty period").enclosure(precision);
        lo = lo.max(l_lo);
        hi = hi.max(l_hi + &slack);
    }
    ValueEnclosure::new(lo, hi)
}

/// Lyndon words over `1..=k` of length at most `maxlen`, in lexicographic order.
pub fn lyndon_words(k: u8, maxlen: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if maxlen == 0 || k == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![1];
    loop {
        out.push(Word::from_trusted(w.clone(), k));
        let m = w.len();
        while w.len() < maxlen {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&k) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => return out,
        }
    }
}

/// `L` of every periodic word of period at most `maxlen`, sorted and deduplicated.
#[derive(Clone, Debug)]
pub struct PeriodicNet {
    pub values: Vec<Surd>,
    /// Largest `N` with `maxlen >= K^(2N+1)`: the net is then `2^(2-N)`-dense in `L_K`.
    pub certified_n: Option<u32>,
}

pub const MAX_NET_PERIOD: usize = 19;

pub fn periodic_net(ctx: &KContext, maxlen: usize) -> Result<PeriodicNet> {
    if maxlen == 0 || maxlen > MAX_NET_PERIOD {
        return Err(Error::PeriodTooLong(maxlen));
    }
    let words = lyndon_words(ctx.k(), maxlen);
    let mut values: Vec<Surd> =
        words.par_iter().map(|w| lagrange_periodic(&PeriodicSequence { period: w.clone() })).collect();
    values.sort_by(compare_real);
    values.dedup();
    Ok(PeriodicNet { values, certified_n: certified_n(ctx.k(), maxlen) })
}

pub fn certified_n(k: u8, maxlen: usize) -> Option<u32> {
    let k = u128::from(k);
    let maxlen = maxlen as u128;
    let mut best = None;
    let mut n = 0u32;
    while let Some(p) = k.checked_pow(2 * n + 1) {
        if p > maxlen {
            break;
        }
        best = Some(n);
        n += 1;
    }
    best
}

/// Outcome of checking that every net value is within `1/Q` of a computed weight.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checked: usize,
    pub violations: Vec<Surd>,
    /// Net value farthest from the weights, with that distance (for reporting).
    pub worst: Option<(Surd, f64)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_spectrum(sa: &SpectrumApproximation, net: &[Surd]) -> VerifyReport {
    let eps = sa.resolution();
    let weights: Vec<f64> = sa.weights.iter().map(Surd::to_f64).collect();
    let mut violations = Vec::new();
    let mut worst: Option<(Surd, f64)> = None;
    for v in net {
        if !nearest_within(&sa.weights, v, &eps) {
            violations.push(v.clone());
        }
        let x = v.to_f64();
        let gap = weights.iter().map(|w| (w - x).abs()).fold(f64::INFINITY, f64::min);
        if worst.as_ref().is_none_or(|(_, g)| gap > *g) {
            worst = Some((v.clone(), gap));
        }
    }
    VerifyReport { checked: net.len(), violations, worst }
}
