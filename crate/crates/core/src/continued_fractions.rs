//! Continued-fraction convergents and cylinder geometry over `{1, ..., K}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_numbers::{mobius_fixed_point, Mobius, Rational, Surd};

/// A finite word over the alphabet `{1, ..., k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    digits: Vec<u8>,
    k: u8,
}

impl Word {
    pub fn new(digits: Vec<u8>, k: u8) -> Result<Word> {
        if let Some(&digit) = digits.iter().find(|&&x| x == 0 || x > k) {
            return Err(Error::DigitOutOfRange { digit, k });
        }
        Ok(Word { digits, k })
    }

    pub fn empty(k: u8) -> Word {
        Word { digits: Vec::new(), k }
    }

    pub(crate) fn from_trusted(digits: Vec<u8>, k: u8) -> Word {
        debug_assert!(digits.iter().all(|&x| x >= 1 && x <= k));
        Word { digits, k }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn child(&self, digit: u8) -> Word {
        let mut digits = self.digits.clone();
        digits.push(digit);
        Word::from_trusted(digits, self.k)
    }

    pub fn reversed(&self) -> Word {
        Word::from_trusted(self.digits.iter().rev().copied().collect(), self.k)
    }

    /// The cyclic rotation starting at index `i`.
    pub fn rotated(&self, i: usize) -> Word {
        let n = self.digits.len();
        Word::from_trusted((0..n).map(|j| self.digits[(i + j) % n]).collect(), self.k)
    }

    pub fn convergents(&self) -> Convergents {
        convergents(&self.digits)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "()");
        }
        if self.k <= 9 {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.digits.iter().map(u8::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// The last two convergents `p_n/q_n` and `p_{n-1}/q_{n-1}` of `[0; b_1, ..., b_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergents {
    pub p: BigInt,
    pub q: BigInt,
    pub p_prev: BigInt,
    pub q_prev: BigInt,
}

impl Convergents {
    /// Seeds `p_0 = 0, q_0 = 1, p_{-1} = 1, q_{-1} = 0`.
    pub fn empty() -> Convergents {
        Convergents { p: BigInt::zero(), q: BigInt::one(), p_prev: BigInt::one(), q_prev: BigInt::zero() }
    }

    pub fn push(&self, digit: u8) -> Convergents {
        let b = BigInt::from(digit);
        Convergents {
            p: &b * &self.p + &self.p_prev,
            q: &b * &self.q + &self.q_prev,
            p_prev: self.p.clone(),
            q_prev: self.q.clone(),
        }
    }

    /// `x -> (p_{n-1} x + p_n) / (q_{n-1} x + q_n)`, which maps the tail
    /// `[0; b_{n+1}, ...]` to `[0; b_1, ..., b_n, b_{n+1}, ...]`.
    pub fn matrix(&self) -> Mobius {
        [[self.p_prev.clone(), self.p.clone()], [self.q_prev.clone(), self.q.clone()]]
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }
}

pub fn convergents(digits: &[u8]) -> Convergents {
    digits.iter().fold(Convergents::empty(), |c, &b| c.push(b))
}

/// Literature constants for `K` in `{2, 3, 4}`: Hausdorff-dimension bracket
/// of `E_K` and the envelope constants for `|C_{K,Q}|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthConstants {
    pub hd_lower: f64,
    pub hd_upper: f64,
    pub c1: f64,
    pub c2: f64,
}

impl GrowthConstants {
    pub fn for_k(k: u8) -> Option<GrowthConstants> {
        let (hd_lower, hd_upper, c1, c2) = match k {
            2 => (0.5312, 0.5313, 0.28, 4.98),
            3 => (0.7056, 0.7057, 0.23, 14.85),
            4 => (0.7889, 0.7890, 0.23, 31.2),
            _ => return None,
        };
        Some(GrowthConstants { hd_lower, hd_upper, c1, c2 })
    }

    pub fn lower_envelope(&self, q: f64) -> f64 {
        self.c1 * q.powf(self.hd_lower)
    }

    pub fn upper_envelope(&self, q: f64) -> f64 {
        self.c2 * q.powf(self.hd_upper)
    }
}

/// Everything that depends only on the alphabet bound `K`.
#[derive(Clone, Debug)]
pub struct KContext {
    k: u8,
    radicand: u128,
    alpha_minus: Surd,
    alpha_plus: Surd,
    width: Surd,
    alpha_sum: Surd,
    alpha_product: Surd,
    growth: Option<GrowthConstants>,
    diam_ratio_lower: Rational,
}

/// Context for `K >= 2`: `alpha_plus = [0; 1, K, 1, K, ...]` is the root in
/// `(0, 1)` of `x^2 + K x - K`, and `alpha_minus = alpha_plus / K`.
pub fn make_context(k: u32) -> Result<KContext> {
    if !(2..=255).contains(&k) {
        return Err(Error::InvalidAlphabet(k));
    }
    let kk = BigInt::from(k);
    let radicand = u128::from(k) * u128::from(k + 4);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let alpha_plus = Surd::new(Rational::from_integer(-&kk) * &half, half.clone(), radicand)?;
    let alpha_minus = alpha_plus.scale(&Rational::new(BigInt::one(), kk.clone()));
    let kq = Rational::from_integer(kk);
    let one = Rational::one();
    let diam_ratio_lower = &kq / ((&kq * (&kq + &one) + &one) * (&kq + Rational::from_integer(2.into())));
    let k8 = k as u8;
    Ok(KContext {
        k: k8,
        radicand,
        width: &alpha_plus - &alpha_minus,
        alpha_sum: &alpha_plus + &alpha_minus,
        alpha_product: &alpha_plus * &alpha_minus,
        alpha_minus,
        alpha_plus,
        growth: GrowthConstants::for_k(k8),
        diam_ratio_lower,
    })
}

impl KContext {
    pub fn k(&self) -> u8 {
        self.k
    }

    /// `K (K + 4)` before square factors are extracted.
    pub fn radicand(&self) -> u128 {
        self.radicand
    }

    /// Square-free radicand of the field every cylinder quantity lives in.
    pub fn field(&self) -> u128 {
        self.alpha_plus.radicand()
    }

    pub fn alpha_minus(&self) -> &Surd {
        &self.alpha_minus
    }

    pub fn alpha_plus(&self) -> &Surd {
        &self.alpha_plus
    }

    /// `alpha_plus - alpha_minus`, the diameter of the empty cylinder.
    pub fn width(&self) -> &Surd {
        &self.width
    }

    pub fn growth(&self) -> Option<GrowthConstants> {
        self.growth
    }

    /// `K / ((K(K+1)+1)(K+2))`.
    pub fn diam_ratio_lower(&self) -> &Rational {
        &self.diam_ratio_lower
    }

    pub fn word(&self, digits: Vec<u8>) -> Result<Word> {
        Word::new(digits, self.k)
    }

    fn lift(&self, n: &BigInt) -> Surd {
        self.alpha_plus.lift(Rational::from_integer(n.clone()))
    }

    fn endpoint(&self, c: &Convergents, alpha: &Surd) -> Surd {
        let num = &self.lift(&c.p) + &alpha.scale(&Rational::from_integer(c.p_prev.clone()));
        let den = &self.lift(&c.q) + &alpha.scale(&Rational::from_integer(c.q_prev.clone()));
        num / den
    }

    /// `(q + alpha_plus q') (q + alpha_minus q')`.
    fn denominator_product(&self, c: &Convergents) -> Surd {
        let q = Rational::from_integer(c.q.clone());
        let qp = Rational::from_integer(c.q_prev.clone());
        let mixed = self.alpha_sum.scale(&(&q * &qp));
        let square = self.alpha_product.scale(&(&qp * &qp));
        (mixed + square).add_rational(&(&q * &q))
    }

    pub fn interval_of(&self, c: &Convergents) -> (Surd, Surd) {
        let x = self.endpoint(c, &self.alpha_plus);
        let y = self.endpoint(c, &self.alpha_minus);
        if x < y {
            (x, y)
        } else {
            (y, x)
        }
    }

    pub fn diam_of(&self, c: &Convergents) -> Surd {
        &self.width / &self.denominator_product(c)
    }

    pub fn mid_of(&self, c: &Convergents) -> Surd {
        let (lo, hi) = self.interval_of(c);
        (lo + hi).scale(&Rational::new(BigInt::one(), BigInt::from(2)))
    }

    /// `diam <= 1/q`, decided as `q (alpha_plus - alpha_minus) <= (q_n + alpha_plus q_{n-1})(q_n + alpha_minus q_{n-1})`.
    pub fn diam_at_most(&self, c: &Convergents, q: u64) -> bool {
        let lhs = self.width.scale(&Rational::from_integer(BigInt::from(q)));
        lhs <= self.denominator_product(c)
    }

    /// The interval `I_K(w)`, endpoints sorted.
    pub fn cylinder_interval(&self, w: &Word) -> (Surd, Surd) {
        self.interval_of(&w.convergents())
    }

    pub fn diam(&self, w: &Word) -> Surd {
        self.diam_of(&w.convergents())
    }

    pub fn mid(&self, w: &Word) -> Surd {
        self.mid_of(&w.convergents())
    }
}

/// Exact value of the purely periodic continued fraction `[0; w, w, w, ...]`.
pub fn periodic_value(w: &Word) -> Result<Surd> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    mobius_fixed_point(&w.convergents().matrix())
}
