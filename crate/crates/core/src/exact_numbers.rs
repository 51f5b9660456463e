//! Exact arithmetic in a real quadratic field `Q(sqrt(d))`.
//!
//! A [`Surd`] is `a + b*sqrt(d)` with rational `a`, `b` and a square-free
//! radicand `d >= 2`. Every constructor extracts square factors from the
//! radicand, so two equal numbers of the same field always carry the same
//! representation and structural equality is value equality.
//!
//! Comparisons never touch floating point: the sign of `a + b*sqrt(d)` is
//! decided by comparing `a^2` with `b^2 d` when the signs of `a` and `b`
//! disagree.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Writes `n = f^2 * r` with `r` square-free and returns `(f, r)`.
///
/// Trial division runs up to the cube root of the unfactored part; what
/// remains has at most two prime factors and is square-full only when it
/// is a perfect square.
pub fn squarefree_decompose(n: u128) -> (u128, u128) {
    assert!(n > 0, "squarefree_decompose(0)");
    let mut rest = n;
    let mut f = 1u128;
    let mut r = 1u128;
    let mut p = 2u128;
    let mut step = 2u128;
    while p * p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            f *= p.pow(e / 2);
            if e % 2 == 1 {
                r *= p;
            }
        }
        p = match p {
            2 => 3,
            3 => 5,
            _ => {
                let next = p + step;
                step = 6 - step;
                next
            }
        };
    }
    let s = rest.sqrt();
    if s * s == rest {
        f *= s;
    } else {
        r *= rest;
    }
    (f, r)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Rational,
    b: Rational,
    d: u128,
}

/// Rounding direction for decimal rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Nearest,
    Floor,
    Ceil,
}

impl Surd {
    /// Builds `a + b*sqrt(d)`, normalising the radicand to its square-free part.
    pub fn new(a: Rational, b: Rational, d: u128) -> Result<Surd> {
        if d == 0 {
            return Err(Error::PerfectSquareRadicand(0));
        }
        let (f, r) = squarefree_decompose(d);
        if r == 1 {
            return Err(Error::PerfectSquareRadicand(d));
        }
        Ok(Surd { a, b: b * Rational::from_integer(BigInt::from(f)), d: r })
    }

    /// The rational `a` viewed as an element of `Q(sqrt(d))`.
    pub fn from_rational(a: Rational, d: u128) -> Result<Surd> {
        Surd::new(a, Rational::zero(), d)
    }

    pub fn from_integer(n: i64, d: u128) -> Result<Surd> {
        Surd::from_rational(Rational::from_integer(n.into()), d)
    }

    /// `sqrt(d)` itself, with square factors pulled out.
    pub fn sqrt(d: u128) -> Result<Surd> {
        Surd::new(Rational::zero(), Rational::one(), d)
    }

    /// Another element of the same field.
    pub fn with_parts(&self, a: Rational, b: Rational) -> Surd {
        Surd { a, b, d: self.d }
    }

    /// The rational `q` in the field of `self`.
    pub fn lift(&self, q: Rational) -> Surd {
        self.with_parts(q, Rational::zero())
    }

    pub fn zero_like(&self) -> Surd {
        self.lift(Rational::zero())
    }

    pub fn one_like(&self) -> Surd {
        self.lift(Rational::one())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u128 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn same_field(&self, other: &Surd) -> bool {
        self.d == other.d
    }

    fn check_field(&self, other: &Surd) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.d, other.d))
        }
    }

    pub fn try_add(&self, other: &Surd) -> Result<Surd> {
        self.check_field(other)?;
        Ok(self.with_parts(&self.a + &other.a, &self.b + &other.b))
    }

    pub fn try_sub(&self, other: &Surd) -> Result<Surd> {
        self.check_field(other)?;
        Ok(self.with_parts(&self.a - &other.a, &self.b - &other.b))
    }

    pub fn try_mul(&self, other: &Surd) -> Result<Surd> {
        self.check_field(other)?;
        let d = Rational::from_integer(BigInt::from(self.d));
        let a = &self.a * &other.a + &self.b * &other.b * d;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(self.with_parts(a, b))
    }

    pub fn try_div(&self, other: &Surd) -> Result<Surd> {
        self.check_field(other)?;
        self.try_mul(&other.inv()?)
    }

    /// `a^2 - d b^2`, the product with the conjugate.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn conjugate(&self) -> Surd {
        self.with_parts(self.a.clone(), -&self.b)
    }

    pub fn inv(&self) -> Result<Surd> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.with_parts(&self.a / &n, -&self.b / &n))
    }

    pub fn scale(&self, q: &Rational) -> Surd {
        self.with_parts(&self.a * q, &self.b * q)
    }

    pub fn add_rational(&self, q: &Rational) -> Surd {
        self.with_parts(&self.a + q, self.b.clone())
    }

    /// Exact sign: -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 d using integer cross products.
        let lhs = self.a.numer() * self.a.numer() * self.b.denom() * self.b.denom();
        let rhs = self.b.numer() * self.b.numer() * BigInt::from(self.d) * self.a.denom() * self.a.denom();
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            // a^2 = b^2 d with b != 0 would make d a rational square.
            Ordering::Equal => unreachable!("square-free radicand {} admits no rational square root", self.d),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Exact comparison of two elements of the same field.
    pub fn try_cmp(&self, other: &Surd) -> Result<Ordering> {
        let diff = self.try_sub(other)?;
        Ok(diff.signum().cmp(&0))
    }

    /// Exact comparison with a rational number.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        self.add_rational(&-q).signum().cmp(&0)
    }

    /// `floor(a + b*sqrt(d))`, exactly.
    pub fn floor(&self) -> BigInt {
        // Bring to the form (num_a + num_b*sqrt(d)) / den with den > 0.
        let den = self.a.denom() * self.b.denom();
        let num_a = self.a.numer() * self.b.denom();
        let num_b = self.b.numer() * self.a.denom();
        if num_b.is_zero() {
            return num_a.div_floor(&den);
        }
        // num_b*sqrt(d) lies strictly between s and s + 1.
        let root = (&num_b * &num_b * BigInt::from(self.d)).sqrt();
        let s = if num_b.is_positive() { root } else { -root - 1 };
        // The value lies strictly inside ((num_a + s)/den, (num_a + s + 1)/den),
        // an open interval that contains no integer besides possibly its floor.
        (num_a + s).div_floor(&den)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Rational enclosure `[lo, lo + 10^-digits]` with `lo = floor(x 10^digits) / 10^digits`.
    pub fn enclosure(&self, digits: u32) -> (Rational, Rational) {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = self.scale(&Rational::from_integer(scale.clone()));
        let lo = scaled.floor();
        let exact = scaled.is_rational() && Rational::from_integer(lo.clone()) == scaled.a;
        let hi = if exact { lo.clone() } else { &lo + 1 };
        (Rational::new(lo, scale.clone()), Rational::new(hi, scale))
    }

    /// Decimal rendering with `digits` fractional digits, rounded to nearest
    /// (ties toward +infinity).
    pub fn to_decimal(&self, digits: u32) -> String {
        self.to_decimal_rounded(digits, Rounding::Nearest)
    }

    pub fn to_decimal_rounded(&self, digits: u32, rounding: Rounding) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = self.scale(&Rational::from_integer(scale.clone()));
        let n = match rounding {
            Rounding::Nearest => scaled.add_rational(&Rational::new(1.into(), 2.into())).floor(),
            Rounding::Floor => scaled.floor(),
            Rounding::Ceil => scaled.ceil(),
        };
        format_fixed(&n, &scale, digits)
    }

    /// Double-precision value, accurate to a few ulps unless `a` and
    /// `b*sqrt(d)` nearly cancel.
    pub fn approx(&self) -> f64 {
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        f(&self.a) + f(&self.b) * (self.d as f64).sqrt()
    }

    /// Lossy conversion for reporting only.
    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }
}

fn sign_of(q: &Rational) -> i8 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn format_fixed(n: &BigInt, scale: &BigInt, digits: u32) -> String {
    let (int_part, frac_part) = n.abs().div_rem(scale);
    let sign = if n.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits as usize)
}

/// Renders a rational with `digits` fractional digits, rounded to nearest.
pub fn rational_to_decimal(q: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = q * Rational::from_integer(scale.clone()) + Rational::new(1.into(), 2.into());
    format_fixed(&scaled.floor().to_integer(), &scale, digits)
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})*sqrt({})", self.b, self.d),
            (false, false) => write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.d),
        }
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Surd) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order on one field. Comparing elements of different fields is a
/// contract violation and panics; use [`Surd::try_cmp`] to get an error instead.
impl Ord for Surd {
    fn cmp(&self, other: &Surd) -> Ordering {
        self.try_cmp(other).expect("Surd comparison across fields")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Surd> for &Surd {
            type Output = Surd;
            fn $method(self, rhs: &Surd) -> Surd {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}", e))
            }
        }
        impl $trait<Surd> for Surd {
            type Output = Surd;
            fn $method(self, rhs: Surd) -> Surd {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Surd> for Surd {
            type Output = Surd;
            fn $method(self, rhs: &Surd) -> Surd {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        self.with_parts(-&self.a, -&self.b)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

/// 2x2 integer matrix `[[a, b], [c, d]]` acting as `x -> (a x + b) / (c x + d)`.
pub type Mobius = [[BigInt; 2]; 2];

/// The fixed point in `(0, 1)` of `x -> (a x + b)/(c x + d)`, i.e. the root of
/// `c x^2 + (d - a) x - b = 0` lying strictly between 0 and 1.
pub fn mobius_fixed_point(m: &Mobius) -> Result<Surd> {
    let [[a, b], [c, d]] = m;
    if c.is_zero() {
        return Err(Error::NoFixedPoint("linear map (c = 0) has no quadratic fixed point".into()));
    }
    let lin = d - a;
    let disc = &lin * &lin + BigInt::from(4) * b * c;
    if !disc.is_positive() {
        return Err(Error::NoFixedPoint(format!("discriminant {disc} is not positive")));
    }
    let disc_u: u128 = disc.to_biguint().and_then(|u| u128::try_from(u).ok()).ok_or(Error::RadicandTooLarge)?;
    let (_, r) = squarefree_decompose(disc_u);
    if r == 1 {
        return Err(Error::NoFixedPoint(format!(
            "discriminant {disc} is a perfect square; the fixed points are rational"
        )));
    }
    let two_c = Rational::from_integer(BigInt::from(2) * c);
    let center = Rational::from_integer(a - d) / &two_c;
    let half_width = Rational::one() / &two_c;
    let zero = Surd::from_rational(Rational::zero(), disc_u)?;
    let one = zero.one_like();
    for sign in [1, -1] {
        let root = Surd::new(center.clone(), &half_width * Rational::from_integer(sign.into()), disc_u)?;
        if root > zero && root < one {
            return Ok(root);
        }
    }
    Err(Error::NoFixedPoint(format!("no root of {c} x^2 + {lin} x - {b} in (0, 1)")))
}

/// Total order on reals that may live in different quadratic fields.
///
/// Same-field and rational comparisons are exact. Otherwise the two values
/// are irrationals of distinct fields, hence distinct, and decimal
/// enclosures are refined until they separate.
pub fn compare_real(x: &Surd, y: &Surd) -> Ordering {
    if x.same_field(y) {
        return x.try_cmp(y).expect("same field");
    }
    if x.is_rational() {
        return y.cmp_rational(&x.a).reverse();
    }
    if y.is_rational() {
        return x.cmp_rational(&y.a);
    }
    for digits in [16, 40, 100, 250] {
        let (xl, xh) = x.enclosure(digits);
        let (yl, yh) = y.enclosure(digits);
        if xh < yl {
            return Ordering::Less;
        }
        if yh < xl {
            return Ordering::Greater;
        }
    }
    // Unreachable for inputs of sane height; keep the order total regardless.
    x.d.cmp(&y.d)
}
