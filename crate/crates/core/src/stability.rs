//! Log discrepancy, expected vanishing order, the δ-invariant and the Futaki
//! invariant of product test configurations for toric cones.
//!
//! With `ξ` normalized by `<ξ, l> = 1`, a toric valuation `v ∈ σ` has
//! `A(v) = <v, l>`, `S(v) = <v, ū^Q>` and `S'(v) = A(ξ) <v, ū^P>`, and
//! `δ = min_i 1 / <v_i, ū^P>`. Since `ξ` is a positive combination of the
//! `v_i` and `<ξ, ū^P> = <ξ, l> = 1`, some `<v_i, ū^P>` is at least one, so
//! `δ <= 1` with equality exactly when `ū^P = l`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::characters::{index_character, weight_character, CharacterOptions, SimplicialPiece};
use crate::error::{Error, Result};
use crate::geometry::{
    for_each_lattice_point, gorenstein_vector, gorenstein_vector_with_boundary, polytope_slice,
    GorensteinVector, ReebVector, ToricCone,
};
use crate::scalar::{dot, dot_int, max_abs, sub_vec, Scalar};

/// Tolerance for the K-semistability verdict off the rational locus,
/// relative to `1 + ‖l‖∞`.
pub const KSS_FLOAT_TOL: f64 = 1e-9;

/// A torus-invariant valuation, given by a nonzero vector of `σ`.
///
/// Valuations in the central fiber correspond to boundary vectors of `σ`.
/// Interior vectors are accepted but flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct ToricValuation<S: Scalar> {
    v: Vec<S>,
    interior: bool,
}

impl<S: Scalar> ToricValuation<S> {
    pub fn new(cone: &ToricCone, v: Vec<S>) -> Result<Self> {
        if v.len() != cone.dim() {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: cone.dim(),
                found: v.len(),
            });
        }
        if v.iter().all(|x| x.is_zero()) || !cone.contains(&v) {
            return Err(Error::InvalidValuation);
        }
        let interior = cone.contains_interior(&v);
        Ok(ToricValuation { v, interior })
    }

    pub fn ray(cone: &ToricCone, index: usize) -> Self {
        ToricValuation {
            v: cone.rays()[index].iter().map(|&x| S::from_i64(x)).collect(),
            interior: cone.dim() == 1,
        }
    }

    pub fn vector(&self) -> &[S] {
        &self.v
    }

    /// Whether the vector lies in the interior of `σ` (not on `∂σ`).
    pub fn is_interior(&self) -> bool {
        self.interior
    }

    /// `(tξ) * v`, which for toric valuations is `v + tξ`.
    pub fn translate(&self, xi: &ReebVector<S>, t: &S) -> Self {
        let v: Vec<S> = self
            .v
            .iter()
            .zip(xi.xi())
            .map(|(a, b)| a.clone() + t.clone() * b.clone())
            .collect();
        let interior = self.interior || t > &S::zero();
        ToricValuation { v, interior }
    }
}

/// `A(v) = <v, l>`.
pub fn log_discrepancy<S: Scalar>(l: &GorensteinVector, v: &ToricValuation<S>) -> S {
    dot(v.vector(), &l.to_scalars())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SValue<S> {
    /// `S(v; ξ) = <v, ū^Q>`.
    pub s: S,
    /// `S'(v; ξ) = A(ξ) <v, ū^P>`.
    pub s_prime: S,
}

pub fn s_value<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    v: &ToricValuation<S>,
) -> Result<SValue<S>> {
    let l = gorenstein_vector(cone)?;
    let q = polytope_slice(cone, xi)?;
    Ok(SValue {
        s: dot(v.vector(), &q.bary_q),
        s_prime: xi.log_discrepancy(&l) * dot(v.vector(), &q.bary_p),
    })
}

/// Lattice average `S_m(v) = Σ_{u ∈ mQ_ξ ∩ M} <v, u> / (m #(mQ_ξ ∩ M))`.
pub fn s_m_oracle<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    v: &[S],
    m: u64,
) -> Result<BigRational> {
    let v: Vec<BigRational> = v
        .iter()
        .map(|x| x.to_ratio().ok_or(Error::IrrationalReeb))
        .collect::<Result<_>>()?;
    let mut sum = vec![0i128; v.len()];
    let mut count = 0u64;
    for_each_lattice_point(cone, xi, m, |u| {
        count += 1;
        for (s, &x) in sum.iter_mut().zip(u) {
            *s += x as i128;
        }
    })?;
    let total: BigRational = sum
        .iter()
        .zip(&v)
        .map(|(&s, x)| BigRational::from_integer(BigInt::from(s)) * x)
        .sum();
    let denom = BigInt::from(m) * BigInt::from(count);
    Ok(total / BigRational::from_integer(denom))
}

/// δ-invariant, barycenter certificate and related data for `(X_σ; ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport<S> {
    pub delta: S,
    /// `min(1, δ)`.
    pub delta_prime: S,
    pub bary_p: Vec<S>,
    pub bary_q: Vec<S>,
    pub gorenstein: Vec<BigRational>,
    /// `ξ / <ξ, l>`.
    pub normalized_xi: Vec<S>,
    /// The factor `1 / <ξ, l>` applied to reach the normalized slice.
    pub rescale: S,
    /// `<v_i, ū^P>` for each ray.
    pub ray_pairings: Vec<S>,
    /// Rays attaining the minimum of `A(v_i) / <v_i, ū^P>`.
    pub minimizing_rays: Vec<usize>,
    pub kss: bool,
    /// `‖ū^P - l‖∞`.
    pub residual: S,
    /// `n / ((n+1) A(ξ)) · min_i A(v_i) / S(v_i; ξ)` at the unnormalized `ξ`.
    pub delta_definitional: S,
}

/// δ-invariant via the barycenter of `P_ξ`.
pub fn delta<S: Scalar>(cone: &ToricCone, xi: &ReebVector<S>) -> Result<StabilityReport<S>> {
    let l = gorenstein_vector(cone)?;
    delta_for(cone, xi, &l)
}

/// δ-invariant of the pair `(X, Σ c_i D_i)`, with `A(v_i) = 1 - c_i`.
///
/// Only available with `experimental = true`.
pub fn delta_with_boundary<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    coeffs: &[BigRational],
    experimental: bool,
) -> Result<StabilityReport<S>> {
    if !experimental {
        return Err(Error::ExperimentalDisabled);
    }
    let l = gorenstein_vector_with_boundary(cone, coeffs)?;
    delta_for(cone, xi, &l)
}

fn delta_for<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    l: &GorensteinVector,
) -> Result<StabilityReport<S>> {
    let n = cone.dim();
    let l_s: Vec<S> = l.to_scalars();
    let (normalized, rescale) = xi.normalize(l);
    let slice = polytope_slice(cone, &normalized)?;

    let ray_pairings: Vec<S> = cone
        .rays()
        .iter()
        .map(|v| dot_int(v, &slice.bary_p))
        .collect();
    let log_disc: Vec<S> = cone.rays().iter().map(|v| dot_int(v, &l_s)).collect();
    let ratios: Vec<S> = log_disc
        .iter()
        .zip(&ray_pairings)
        .map(|(a, p)| a.clone() / p.clone())
        .collect();
    let delta = ratios
        .iter()
        .cloned()
        .reduce(S::min_of)
        .expect("cone has rays");
    let minimizing_rays = (0..ratios.len())
        .filter(|&i| ratios[i].approx_eq(&delta, &delta))
        .collect();

    let residual = max_abs(&sub_vec(&slice.bary_p, &l_s));
    let kss = if S::EXACT {
        residual.is_zero()
    } else {
        residual.to_f64() <= KSS_FLOAT_TOL * (1.0 + max_abs(&l_s).to_f64())
    };
    let delta_prime = S::min_of(S::one(), delta.clone());

    // definitional form at the caller's ξ
    let raw = polytope_slice(cone, xi)?;
    let a_xi = xi.log_discrepancy(l);
    let min_ratio = log_disc
        .iter()
        .zip(cone.rays())
        .map(|(a, v)| a.clone() / dot_int(v, &raw.bary_q))
        .reduce(S::min_of)
        .expect("cone has rays");
    let nn = S::from_i64(n as i64);
    let delta_definitional = nn.clone() / ((nn + S::one()) * a_xi) * min_ratio;

    Ok(StabilityReport {
        delta,
        delta_prime,
        bary_p: slice.bary_p,
        bary_q: slice.bary_q,
        gorenstein: l.l.clone(),
        normalized_xi: normalized.xi().to_vec(),
        rescale,
        ray_pairings,
        minimizing_rays,
        kss,
        residual,
        delta_definitional,
    })
}

/// `A(v) / S(v; ξ)` scaled as in the definition of δ, for any valuation.
pub fn definitional_ratio<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    v: &ToricValuation<S>,
) -> Result<S> {
    let l = gorenstein_vector(cone)?;
    let q = polytope_slice(cone, xi)?;
    let n = S::from_i64(cone.dim() as i64);
    let a_xi = xi.log_discrepancy(&l);
    Ok(n.clone() / ((n + S::one()) * a_xi) * log_discrepancy(&l, v) / dot(v.vector(), &q.bary_q))
}

/// Futaki invariant of the product test configuration generated by `η`,
/// with the character coefficients it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct FutakiReport<S> {
    pub a0: S,
    pub a1: S,
    pub b0: S,
    pub b1: S,
    /// `(a_0 b_1 - a_1 b_0) / a_0^2`.
    pub f1: S,
    /// `-2 F_1`.
    pub fut: S,
}

pub fn futaki_product<S: Scalar>(
    pieces: &[SimplicialPiece],
    xi: &ReebVector<S>,
    eta: &[S],
    opts: CharacterOptions,
) -> Result<FutakiReport<S>> {
    let n = xi.xi().len();
    if n < 2 {
        return Err(Error::DimensionTooSmall {
            dim: n,
            what: "Futaki invariant",
        });
    }
    let f = index_character(pieces, xi, 1, opts)?;
    let c = weight_character(pieces, xi, eta, 1, opts)?;
    let (a0, a1) = f.index_coefficients(n)?;
    let (b0, b1) = c.weight_coefficients(n)?;
    let f1 = (a0.clone() * b1.clone() - a1.clone() * b0.clone()) / (a0.clone() * a0.clone());
    let fut = -(S::from_i64(2) * f1.clone());
    Ok(FutakiReport {
        a0,
        a1,
        b0,
        b1,
        f1,
        fut,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioProfile<S> {
    pub a_v: S,
    pub s_prime_v: S,
    pub a_xi: S,
    /// `f` increases when `S'(v) > A(v)` and decreases when `S'(v) < A(v)`.
    pub monotonicity: Monotonicity,
    pub values: Vec<(S, S)>,
}

/// `f(t) = (A(v) + t A(ξ)) / (S'(v) + t A(ξ))` along `w_t = (tξ) * v`.
///
/// The denominator uses `S'`, so `f(t) = A(w_t) / S'(w_t)`.
pub fn ratio_profile<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    v: &ToricValuation<S>,
    t_values: &[S],
) -> Result<RatioProfile<S>> {
    if t_values.iter().any(|t| t < &S::zero()) {
        return Err(Error::InvalidArgument(
            "t values must be nonnegative".into(),
        ));
    }
    let l = gorenstein_vector(cone)?;
    let a_v = log_discrepancy(&l, v);
    let a_xi = xi.log_discrepancy(&l);
    let s_prime_v = s_value(cone, xi, v)?.s_prime;
    let diff = s_prime_v.clone() - a_v.clone();
    let monotonicity = if diff.negligible(&a_v) {
        Monotonicity::Constant
    } else if diff > S::zero() {
        Monotonicity::Increasing
    } else {
        Monotonicity::Decreasing
    };
    let values = t_values
        .iter()
        .map(|t| {
            let shift = t.clone() * a_xi.clone();
            (
                t.clone(),
                (a_v.clone() + shift.clone()) / (s_prime_v.clone() + shift),
            )
        })
        .collect();
    Ok(RatioProfile {
        a_v,
        s_prime_v,
        a_xi,
        monotonicity,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{decompose_dual, DEFAULT_MAX_BOX_POINTS};
    use crate::geometry::dual_cone;
    use crate::scalar::{ratio, rvec};

    fn orthant2() -> ToricCone {
        dual_cone(&[vec![1, 0], vec![0, 1]], 2).unwrap()
    }

    fn a1() -> ToricCone {
        dual_cone(&[vec![1, 0], vec![1, 2]], 2).unwrap()
    }

    #[test]
    fn log_discrepancy_examples() {
        let c = orthant2();
        let l = gorenstein_vector(&c).unwrap();
        let v = ToricValuation::new(&c, rvec(&[(1, 1), (0, 1)])).unwrap();
        assert_eq!(log_discrepancy(&l, &v), ratio(1, 1));
        let v = ToricValuation::new(&c, rvec(&[(2, 1), (3, 1)])).unwrap();
        assert_eq!(log_discrepancy(&l, &v), ratio(5, 1));
        assert!(v.is_interior());

        let c = a1();
        let l = gorenstein_vector(&c).unwrap();
        let v = ToricValuation::new(&c, rvec(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(log_discrepancy(&l, &v), ratio(1, 1));
        assert!(!v.is_interior());
    }

    #[test]
    fn valuation_must_lie_in_cone() {
        let c = orthant2();
        assert_eq!(
            ToricValuation::new(&c, rvec(&[(1, 1), (-1, 1)])),
            Err(Error::InvalidValuation)
        );
        assert_eq!(
            ToricValuation::new(&c, rvec(&[(0, 1), (0, 1)])),
            Err(Error::InvalidValuation)
        );
    }

    #[test]
    fn s_value_orthant() {
        let c = orthant2();
        let xi = ReebVector::new(&c, rvec(&[(1, 2), (1, 2)])).unwrap();
        let v = ToricValuation::new(&c, rvec(&[(1, 1), (0, 1)])).unwrap();
        let s = s_value(&c, &xi, &v).unwrap();
        assert_eq!(s.s, ratio(2, 3));
        assert_eq!(s.s_prime, ratio(1, 1));

        // S(v; cξ) = S(v; ξ) / c
        let xi2 = xi.scaled(&ratio(3, 1));
        assert_eq!(s_value(&c, &xi2, &v).unwrap().s, ratio(2, 9));

        // S'((tξ) * v) = S'(v) + t A(ξ)
        let w = v.translate(&xi, &ratio(1, 1));
        assert_eq!(s_value(&c, &xi, &w).unwrap().s_prime, ratio(2, 1));
    }

    #[test]
    fn s_m_examples() {
        let c = orthant2();
        let xi = ReebVector::new(&c, rvec(&[(1, 1), (1, 1)])).unwrap();
        let v = rvec(&[(1, 1), (0, 1)]);
        assert_eq!(s_m_oracle(&c, &xi, &v, 1).unwrap(), ratio(1, 3));
        assert_eq!(s_m_oracle(&c, &xi, &v, 2).unwrap(), ratio(1, 3));
        let xf = ReebVector::new(&c, vec![1.0, 1.0]).unwrap();
        assert_eq!(
            s_m_oracle(&c, &xf, &[1.0, 0.0], 1),
            Err(Error::IrrationalReeb)
        );
    }

    #[test]
    fn delta_worked_cases() {
        let c = orthant2();
        let r = delta(&c, &ReebVector::new(&c, rvec(&[(5, 1), (5, 1)])).unwrap()).unwrap();
        assert_eq!(r.delta, ratio(1, 1));
        assert!(r.kss);
        assert_eq!(r.rescale, ratio(1, 10));

        let c = a1();
        let r = delta(&c, &ReebVector::new(&c, rvec(&[(1, 1), (1, 1)])).unwrap()).unwrap();
        assert_eq!(r.delta, ratio(1, 1));
        assert_eq!(r.bary_p, rvec(&[(1, 1), (0, 1)]));
        assert!(r.kss);

        let r = delta(&c, &ReebVector::new(&c, rvec(&[(1, 1), (1, 2)])).unwrap()).unwrap();
        assert_eq!(r.bary_p, rvec(&[(2, 3), (2, 3)]));
        assert_eq!(r.delta, ratio(1, 2));
        assert_eq!(r.delta_prime, ratio(1, 2));
        assert_eq!(r.minimizing_rays, vec![1]);
        assert!(!r.kss);
        assert_eq!(r.delta_definitional, r.delta);
        assert_eq!(r.residual, ratio(2, 3));
    }

    #[test]
    fn boundary_requires_flag() {
        let c = orthant2();
        let xi = ReebVector::new(&c, rvec(&[(1, 1), (1, 1)])).unwrap();
        let coeffs = rvec(&[(1, 2), (0, 1)]);
        assert_eq!(
            delta_with_boundary(&c, &xi, &coeffs, false),
            Err(Error::ExperimentalDisabled)
        );
        let r = delta_with_boundary(&c, &xi, &coeffs, true).unwrap();
        assert_eq!(r.gorenstein, rvec(&[(1, 2), (1, 1)]));
        assert!(r.delta <= ratio(1, 1));
    }

    #[test]
    fn futaki_c2_symmetric_is_zero() {
        let c = orthant2();
        let pieces = decompose_dual(&c, DEFAULT_MAX_BOX_POINTS).unwrap();
        let xi = ReebVector::new(&c, rvec(&[(1, 1), (1, 1)])).unwrap();
        let r = futaki_product(
            &pieces,
            &xi,
            &rvec(&[(1, 1), (0, 1)]),
            CharacterOptions::default(),
        )
        .unwrap();
        assert_eq!((r.a0.clone(), r.a1.clone()), (ratio(1, 1), ratio(1, 1)));
        assert_eq!((r.b0.clone(), r.b1.clone()), (ratio(1, 2), ratio(1, 2)));
        assert_eq!(r.fut, ratio(0, 1));
    }

    #[test]
    fn ratio_profile_constant_and_limit() {
        let c = orthant2();
        let xi = ReebVector::new(&c, rvec(&[(1, 2), (1, 2)])).unwrap();
        let v = ToricValuation::new(&c, rvec(&[(1, 1), (0, 1)])).unwrap();
        let ts = rvec(&[(0, 1), (1, 1), (10, 1)]);
        let p = ratio_profile(&c, &xi, &v, &ts).unwrap();
        assert_eq!(p.monotonicity, Monotonicity::Constant);
        assert!(p.values.iter().all(|(_, f)| f == &ratio(1, 1)));

        let c = a1();
        let xi = ReebVector::new(&c, rvec(&[(1, 1), (1, 2)])).unwrap();
        let v = ToricValuation::new(&c, rvec(&[(1, 1), (2, 1)])).unwrap();
        let ts = rvec(&[(0, 1), (1, 1), (1000, 1)]);
        let p = ratio_profile(&c, &xi, &v, &ts).unwrap();
        // S'(v) = 2 > A(v) = 1
        assert_eq!(p.monotonicity, Monotonicity::Increasing);
        assert!(p.values[0].1 < p.values[1].1 && p.values[1].1 < p.values[2].1);
        assert!(ratio(1, 1) - p.values[2].1.clone() < ratio(1, 1000));
    }
}
