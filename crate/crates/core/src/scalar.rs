//! Number types the geometric and analytic routines are generic over.
//!
//! Rational Reeb vectors run through [`BigRational`] and every identity holds
//! exactly. Irrational Reeb vectors run through `f64`; equality tests then use
//! a relative tolerance.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Relative tolerance used for membership and equality tests in float mode.
pub const FLOAT_TOL: f64 = 1e-10;

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_i128(v: i128) -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;

    /// The exact value, when the scalar carries one.
    fn to_ratio(&self) -> Option<BigRational>;

    /// Whether `self` is zero relative to `scale` (exact zero in exact mode).
    fn negligible(&self, scale: &Self) -> bool;

    fn approx_eq(&self, other: &Self, scale: &Self) -> bool {
        (self.clone() - other.clone()).negligible(scale)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_i128(v: i128) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn to_ratio(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_i128(v: i128) -> Self {
        v as f64
    }

    fn from_ratio(r: &BigRational) -> Self {
        ratio_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_ratio(&self) -> Option<BigRational> {
        None
    }

    fn negligible(&self, scale: &Self) -> bool {
        self.abs() <= FLOAT_TOL * (1.0 + scale.abs())
    }
}

/// Converts a rational to the nearest-ish `f64` without overflowing on huge
/// numerators or denominators.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rvec(values: &[(i64, i64)]) -> Vec<BigRational> {
    values.iter().map(|&(n, d)| ratio(n, d)).collect()
}

pub fn ivec_to<S: Scalar>(v: &[i64]) -> Vec<S> {
    v.iter().map(|&x| S::from_i64(x)).collect()
}

/// `<u, x>` for an integer vector `u`.
pub fn dot_int<S: Scalar>(u: &[i64], x: &[S]) -> S {
    u.iter()
        .zip(x)
        .fold(S::zero(), |acc, (&a, b)| acc + S::from_i64(a) * b.clone())
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn scale_vec<S: Scalar>(v: &[S], c: &S) -> Vec<S> {
    v.iter().map(|x| x.clone() * c.clone()).collect()
}

pub fn sub_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub fn max_abs<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |m, x| S::max_of(m, x.abs()))
}

pub fn factorial<S: Scalar>(k: usize) -> S {
    (1..=k).fold(S::one(), |acc, i| acc * S::from_i64(i as i64))
}
