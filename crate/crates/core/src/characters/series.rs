//! Truncated univariate power series in `t`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Power series `Σ_{k=0}^{N} c_k t^k`, truncated at a fixed degree `N`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PowerSeries<S> {
    pub(crate) coeffs: Vec<S>,
}

impl<S: Scalar> PowerSeries<S> {
    pub(crate) fn zero(degree: usize) -> Self {
        PowerSeries {
            coeffs: vec![S::zero(); degree + 1],
        }
    }

    pub(crate) fn constant(c: S, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = c;
        s
    }

    pub(crate) fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        let d = self.degree().min(other.degree());
        let mut out = Self::zero(d);
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d + 1 - i) {
                out.coeffs[i + j] = out.coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        out
    }

    pub(crate) fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = a.clone() + b.clone();
        }
    }

    pub(crate) fn scale(&self, c: &S) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Multiplies by `t`, dropping the top coefficient.
    pub(crate) fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(S::zero());
        coeffs.extend(self.coeffs[..self.degree()].iter().cloned());
        PowerSeries { coeffs }
    }

    /// `exp(c t)`.
    pub(crate) fn exp_linear(c: &S, degree: usize) -> Self {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut term = S::one();
        for k in 0..=degree {
            if k > 0 {
                term = term * c.clone() / S::from_i64(k as i64);
            }
            coeffs.push(term.clone());
        }
        PowerSeries { coeffs }
    }

    /// `x / (1 - e^{-x})` at `x = a t`, i.e. `Σ (-1)^k B_k (a t)^k / k!`.
    pub(crate) fn todd(a: &S, degree: usize) -> Self {
        Self::bernoulli_series(a, degree, true)
    }

    /// `x / (e^{x} - 1)` at `x = a t`, i.e. `Σ B_k (a t)^k / k!`.
    pub(crate) fn bernoulli_gen(a: &S, degree: usize) -> Self {
        Self::bernoulli_series(a, degree, false)
    }

    fn bernoulli_series(a: &S, degree: usize, alternate: bool) -> Self {
        let b = bernoulli_numbers(degree);
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut pow_over_fact = S::one();
        for (k, bk) in b.iter().enumerate() {
            if k > 0 {
                pow_over_fact = pow_over_fact * a.clone() / S::from_i64(k as i64);
            }
            let mut c = S::from_ratio(bk) * pow_over_fact.clone();
            if alternate && k % 2 == 1 {
                c = -c;
            }
            coeffs.push(c);
        }
        PowerSeries { coeffs }
    }
}

/// Bernoulli numbers `B_0, ..., B_m` with `B_1 = -1/2`.
pub(crate) fn bernoulli_numbers(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        if n == 0 {
            b.push(BigRational::one());
            continue;
        }
        // Σ_{k=0}^{n} C(n+1, k) B_k = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b
}
