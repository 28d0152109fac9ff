//! Rational polyhedral geometry of an affine toric cone.
//!
//! A [`ToricCone`] holds the primitive ray generators `v_i` of `σ` together
//! with the primitive generators `u_j` of the dual cone `σ^∨`. The generators
//! of `σ^∨` are also the inward facet normals of `σ`, and the `v_i` are the
//! inward facet normals of `σ^∨`.

mod dd;
mod polytope;
mod triangulate;

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    dot_i, primitive_i64, rank_int, solve_rational, to_rational_matrix, LinearSolution,
};
use crate::scalar::{dot, dot_int, Scalar};

pub use polytope::{for_each_lattice_point, lattice_points, polytope_slice, PolytopeSlice};
pub use triangulate::triangulate_dual;

/// Largest ambient dimension accepted.
pub const MAX_DIM: usize = 8;
/// Largest number of ray generators accepted.
pub const MAX_RAYS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning(pub String);

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A full-dimensional pointed rational cone `σ ⊂ R^n` and its dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricCone {
    dim: usize,
    rays: Vec<Vec<i64>>,
    dual_rays: Vec<Vec<i64>>,
    warnings: Vec<Warning>,
}

impl ToricCone {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Primitive ray generators `v_1, ..., v_d` of `σ`, in input order.
    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// Primitive generators of `σ^∨`, sorted lexicographically.
    pub fn dual_rays(&self) -> &[Vec<i64>] {
        &self.dual_rays
    }

    /// Inward facet normals of `σ`; these coincide with the dual rays.
    pub fn facets_sigma(&self) -> &[Vec<i64>] {
        &self.dual_rays
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// The cone generated by the dual rays, i.e. `σ^∨` as a cone in its own
    /// right. Its dual is `σ` again.
    pub fn dual(&self) -> Result<ToricCone> {
        dual_cone(&self.dual_rays, self.dim)
    }

    /// Whether `x` pairs strictly positively with every dual ray.
    pub fn contains_interior<S: Scalar>(&self, x: &[S]) -> bool {
        self.first_nonpositive(x).is_none()
    }

    fn first_nonpositive<S: Scalar>(&self, x: &[S]) -> Option<usize> {
        self.dual_rays
            .iter()
            .position(|u| dot_int(u, x) <= S::zero())
    }

    /// Whether `x ∈ σ` (closed).
    pub fn contains<S: Scalar>(&self, x: &[S]) -> bool {
        let scale = crate::scalar::max_abs(x);
        self.dual_rays.iter().all(|u| {
            let p = dot_int(u, x);
            p >= S::zero() || p.negligible(&scale)
        })
    }
}

/// Builds a [`ToricCone`] from ray generators, computing `σ^∨` by double
/// description.
///
/// Rays are re-primitivized with a warning. Zero, repeated and non-extreme
/// generators are rejected.
pub fn dual_cone(rays: &[Vec<i64>], dim: usize) -> Result<ToricCone> {
    if dim == 0 {
        return Err(Error::NotFullDimensional { dim, rank: 0 });
    }
    if dim > MAX_DIM {
        return Err(Error::ExceedsSupportedSize {
            what: "dimension",
            found: dim,
            limit: MAX_DIM,
        });
    }
    if rays.len() > MAX_RAYS {
        return Err(Error::ExceedsSupportedSize {
            what: "ray count",
            found: rays.len(),
            limit: MAX_RAYS,
        });
    }
    let mut warnings = Vec::new();
    let mut prim = Vec::with_capacity(rays.len());
    for (i, r) in rays.iter().enumerate() {
        if r.len() != dim {
            return Err(Error::DimensionMismatch {
                index: i,
                expected: dim,
                found: r.len(),
            });
        }
        if r.iter().all(|&x| x == 0) {
            return Err(Error::RedundantRay { index: i });
        }
        let p = primitive_i64(r);
        if &p != r {
            warnings.push(Warning(format!(
                "ray {i} re-primitivized to {}",
                format_ivec(&p)
            )));
        }
        if prim.contains(&p) {
            return Err(Error::RedundantRay { index: i });
        }
        prim.push(p);
    }
    let rank = rank_int(&prim);
    if rank < dim {
        return Err(Error::NotFullDimensional { dim, rank });
    }
    let dual_rays = dd::extreme_rays(&prim, dim)?;
    let dual_rank = rank_int(&dual_rays);
    if dual_rank < dim {
        return Err(Error::NotPointed {
            dim,
            rank: dual_rank,
        });
    }
    // v_i is extreme in σ iff it is the normal of a facet of σ^∨.
    for (i, v) in prim.iter().enumerate() {
        let tight: Vec<Vec<i64>> = dual_rays
            .iter()
            .filter(|u| dot_i(v, u) == 0)
            .cloned()
            .collect();
        if dim > 1 && rank_int(&tight) != dim - 1 {
            return Err(Error::RedundantRay { index: i });
        }
    }
    Ok(ToricCone {
        dim,
        rays: prim,
        dual_rays,
        warnings,
    })
}

pub(crate) fn format_ivec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// The rational covector `l` with `<v_i, l> = 1` for every ray generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GorensteinVector {
    pub l: Vec<BigRational>,
}

impl GorensteinVector {
    pub fn to_scalars<S: Scalar>(&self) -> Vec<S> {
        self.l.iter().map(S::from_ratio).collect()
    }
}

/// Solves `<v_i, l> = 1` over the rationals and checks `l ∈ int σ^∨`.
pub fn gorenstein_vector(cone: &ToricCone) -> Result<GorensteinVector> {
    let rhs = vec![BigRational::one(); cone.rays.len()];
    gorenstein_from_system(cone.rays(), cone.dim(), &rhs)
}

/// Generalized Gorenstein condition `<v_i, l> = 1 - c_i` for a boundary
/// divisor `Σ c_i D_i` with `c_i ∈ [0, 1)`.
pub fn gorenstein_vector_with_boundary(
    cone: &ToricCone,
    coeffs: &[BigRational],
) -> Result<GorensteinVector> {
    if coeffs.len() != cone.rays.len() {
        return Err(Error::DimensionMismatch {
            index: 0,
            expected: cone.rays.len(),
            found: coeffs.len(),
        });
    }
    if coeffs
        .iter()
        .any(|c| c < &BigRational::zero() || c >= &BigRational::one())
    {
        return Err(Error::InvalidArgument(
            "boundary coefficients must lie in [0, 1)".into(),
        ));
    }
    let rhs: Vec<BigRational> = coeffs.iter().map(|c| BigRational::one() - c).collect();
    gorenstein_from_system(cone.rays(), cone.dim(), &rhs)
}

/// Solves `<v_i, l> = rhs_i` for raw ray data.
///
/// Unlike [`gorenstein_vector`] this accepts rays that do not span, in which
/// case a consistent system yields [`Error::DegenerateSolutionSet`].
pub fn gorenstein_from_system(
    rays: &[Vec<i64>],
    dim: usize,
    rhs: &[BigRational],
) -> Result<GorensteinVector> {
    let a = to_rational_matrix(rays);
    match solve_rational(&a, rhs, dim) {
        LinearSolution::Inconsistent => Err(Error::NotQGorenstein),
        LinearSolution::Underdetermined => Err(Error::DegenerateSolutionSet),
        LinearSolution::Unique(l) => {
            // <v_i, l> = rhs_i > 0 for every ray, so l is interior exactly
            // when every right-hand side is positive.
            if rays.iter().any(|v| dot_int(v, &l) <= BigRational::zero()) {
                return Err(Error::GorensteinNotInterior);
            }
            Ok(GorensteinVector { l })
        }
    }
}

/// A Reeb vector: a point of the interior of `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReebVector<S: Scalar> {
    xi: Vec<S>,
    normalized: bool,
}

impl<S: Scalar> ReebVector<S> {
    pub fn new(cone: &ToricCone, xi: Vec<S>) -> Result<Self> {
        if xi.len() != cone.dim() {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: cone.dim(),
                found: xi.len(),
            });
        }
        if let Some(index) = cone.first_nonpositive(&xi) {
            return Err(Error::NotInReebCone { index });
        }
        let normalized = match gorenstein_vector(cone) {
            Ok(g) => dot(&xi, &g.to_scalars()).approx_eq(&S::one(), &S::one()),
            Err(_) => false,
        };
        Ok(ReebVector { xi, normalized })
    }

    pub fn xi(&self) -> &[S] {
        &self.xi
    }

    /// Whether `<ξ, l> = 1` (false when the cone is not Q-Gorenstein).
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `A(ξ) = <ξ, l>`.
    pub fn log_discrepancy(&self, l: &GorensteinVector) -> S {
        dot(&self.xi, &l.to_scalars())
    }

    /// Rescales to `<ξ, l> = 1`, returning the new vector and the factor
    /// `1 / <ξ, l>` that was applied.
    pub fn normalize(&self, l: &GorensteinVector) -> (ReebVector<S>, S) {
        let factor = S::one() / self.log_discrepancy(l);
        let xi = crate::scalar::scale_vec(&self.xi, &factor);
        (
            ReebVector {
                xi,
                normalized: true,
            },
            factor,
        )
    }

    pub fn scaled(&self, c: &S) -> ReebVector<S> {
        ReebVector {
            xi: crate::scalar::scale_vec(&self.xi, c),
            normalized: self.normalized && c.approx_eq(&S::one(), &S::one()),
        }
    }

    /// Smallest pairing `<ξ, u_j>` over the dual rays.
    pub fn margin(&self, cone: &ToricCone) -> S {
        cone.dual_rays()
            .iter()
            .map(|u| dot_int(u, &self.xi))
            .reduce(S::min_of)
            .unwrap_or_else(S::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, rvec};

    fn cone(rays: &[&[i64]]) -> Result<ToricCone> {
        let rays: Vec<Vec<i64>> = rays.iter().map(|r| r.to_vec()).collect();
        dual_cone(&rays, rays[0].len())
    }

    #[test]
    fn orthant_dual_rays() {
        let c = cone(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(c.dual_rays(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn a1_dual_rays() {
        let c = cone(&[&[1, 0], &[1, 2]]).unwrap();
        assert_eq!(c.dual_rays(), &[vec![0, 1], vec![2, -1]]);
    }

    #[test]
    fn conifold_dual_and_involution() {
        let c = cone(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1], &[1, 0, 1]]).unwrap();
        assert_eq!(c.dual_rays().len(), 4);
        for u in c.dual_rays() {
            assert!(c.rays().iter().all(|v| dot_i(v, u) >= 0));
        }
        let back = c.dual().unwrap();
        let mut original = c.rays().to_vec();
        original.sort();
        assert_eq!(back.dual_rays(), original.as_slice());
    }

    #[test]
    fn rejects_lower_dimensional_and_non_pointed() {
        assert!(matches!(
            cone(&[&[1, 0]]),
            Err(Error::NotFullDimensional { .. })
        ));
        assert!(matches!(
            cone(&[&[1, 0], &[-1, 0], &[0, 1]]),
            Err(Error::NotPointed { .. })
        ));
    }

    #[test]
    fn rejects_redundant_generators() {
        assert!(matches!(
            cone(&[&[1, 0], &[1, 1], &[0, 1]]),
            Err(Error::RedundantRay { index: 1 })
        ));
        assert!(matches!(
            cone(&[&[1, 0], &[0, 1], &[1, 0]]),
            Err(Error::RedundantRay { index: 2 })
        ));
    }

    #[test]
    fn reprimitivizes_with_warning() {
        let c = cone(&[&[2, 0], &[0, 1]]).unwrap();
        assert_eq!(c.rays()[0], vec![1, 0]);
        assert_eq!(c.warnings()[0].0, "ray 0 re-primitivized to [1,0]");
    }

    #[test]
    fn size_limits() {
        let rays: Vec<Vec<i64>> = (0..9)
            .map(|i| (0..9).map(|j| i64::from(i == j)).collect())
            .collect();
        assert!(matches!(
            dual_cone(&rays, 9),
            Err(Error::ExceedsSupportedSize { .. })
        ));
    }

    #[test]
    fn gorenstein_examples() {
        let c = cone(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(gorenstein_vector(&c).unwrap().l, rvec(&[(1, 1), (1, 1)]));
        let c = cone(&[&[1, 0], &[1, 2]]).unwrap();
        assert_eq!(gorenstein_vector(&c).unwrap().l, rvec(&[(1, 1), (0, 1)]));
        let c = cone(&[&[1, 0], &[2, 1]]).unwrap();
        let l = gorenstein_vector(&c).unwrap().l;
        assert_eq!(l, rvec(&[(1, 1), (-1, 1)]));
        assert!(c
            .rays()
            .iter()
            .all(|v| dot_int(v, &l) > BigRational::zero()));
    }

    #[test]
    fn not_q_gorenstein() {
        let c = cone(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[2, 2, -1]]).unwrap();
        assert_eq!(gorenstein_vector(&c), Err(Error::NotQGorenstein));
    }

    #[test]
    fn degenerate_solution_set() {
        let rays = vec![vec![1, 0, 0], vec![1, 1, 0]];
        let rhs = vec![ratio(1, 1); 2];
        assert_eq!(
            gorenstein_from_system(&rays, 3, &rhs),
            Err(Error::DegenerateSolutionSet)
        );
    }

    #[test]
    fn reeb_membership() {
        let c = cone(&[&[1, 0], &[1, 2]]).unwrap();
        assert!(ReebVector::new(&c, rvec(&[(1, 1), (1, 1)])).is_ok());
        assert!(matches!(
            ReebVector::new(&c, rvec(&[(1, 1), (2, 1)])),
            Err(Error::NotInReebCone { .. })
        ));
        let xi = ReebVector::new(&c, rvec(&[(1, 1), (1, 2)])).unwrap();
        assert!(xi.is_normalized());
        let xi = ReebVector::new(&c, rvec(&[(3, 1), (1, 1)])).unwrap();
        assert!(!xi.is_normalized());
        let l = gorenstein_vector(&c).unwrap();
        let (n, f) = xi.normalize(&l);
        assert_eq!(f, ratio(1, 3));
        assert!(n.is_normalized());
        assert_eq!(n.log_discrepancy(&l), ratio(1, 1));
    }
}
