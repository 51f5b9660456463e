#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use spectra_core::continued_fractions::{make_context, Word};
use spectra_core::cylinder_sets::{build_cylinders, CylinderSet};
use spectra_core::exact_numbers::{Rational, Surd};

pub fn cylinders(k: u32, q: u64) -> CylinderSet {
    build_cylinders(&make_context(k).unwrap(), q).unwrap()
}

pub fn word(digits: &[u8], k: u8) -> Word {
    Word::new(digits.to_vec(), k).unwrap()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `floor(x * 10^digits)` for `x = a + b sqrt(d)`, computed from an integer
/// square root of `b^2 d 10^(2 digits)` rather than through surd arithmetic.
/// Exact up to one unit in the last place.
pub fn scaled_floor(x: &Surd, digits: u32) -> BigInt {
    let scale = BigInt::from(10u32).pow(digits);
    let a = x.rational_part();
    let b = x.irrational_part();
    let a_scaled = (a * Rational::from_integer(scale.clone())).floor().to_integer();
    let b2d = b * b * Rational::from_integer(BigInt::from(x.radicand())) * Rational::from_integer(&scale * &scale);
    let root = b2d.floor().to_integer().sqrt();
    if b.is_negative() {
        a_scaled - root
    } else {
        a_scaled + root
    }
}

/// Sign of a surd by a 64-digit decimal evaluation; `None` when too close to zero to tell.
pub fn decimal_sign(x: &Surd) -> Option<i8> {
    let v = scaled_floor(x, 64);
    if v.abs() <= BigInt::from(3) {
        if x.irrational_part().is_zero() {
            return Some(if x.rational_part().is_zero() {
                0
            } else if x.rational_part().is_positive() {
                1
            } else {
                -1
            });
        }
        None
    } else if v.is_positive() {
        Some(1)
    } else {
        Some(-1)
    }
}

/// `[0; digits]` evaluated from the back in double precision.
pub fn cf_f64(digits: &[u8], tail: f64) -> f64 {
    digits.iter().rev().fold(tail, |x, &d| 1.0 / (f64::from(d) + x))
}
