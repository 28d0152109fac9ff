//! Minimization of the normalized volume `a_0(ξ) = n vol(Q_ξ)` over the
//! slice `{<ξ, l> = 1}` of the Reeb cone.
//!
//! The pulling triangulation of `σ^∨` does not depend on `ξ`, so on the whole
//! Reeb cone
//!
//! ```text
//! a_0(ξ) = Σ_s |det U_s| / ((n-1)! Π_k <ξ, u_{s,k}>)
//! ```
//!
//! is a single smooth, strictly convex rational function, and Newton's method
//! in a chart of the slice needs no special handling at walls.

mod grid;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{gorenstein_vector, polytope_slice, triangulate_dual, ReebVector, ToricCone};
use crate::linalg::det_int;
use crate::scalar::{ratio_to_f64, Scalar};
use crate::stability::delta;

pub use grid::{
    grid_search_oracle, rationality_probe, GridResult, RationalCandidate, MAX_GRID_POINTS,
};

/// `a_0(ξ) = n vol(Q_ξ)`, exact for rational `ξ`.
pub fn volume_functional<S: Scalar>(cone: &ToricCone, xi: &ReebVector<S>) -> Result<S> {
    let slice = polytope_slice(cone, xi)?;
    Ok(S::from_i64(cone.dim() as i64) * slice.volume_q)
}

/// `a_0` restricted to the normalized slice, in affine coordinates
/// `ξ = origin + B y` with `B` an orthonormal basis of `l^⊥`.
#[derive(Debug, Clone)]
pub struct VolumeObjective {
    dim: usize,
    simplices: Vec<(Vec<Vec<f64>>, f64)>,
    dual_rays: Vec<Vec<f64>>,
    l: Vec<f64>,
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

impl VolumeObjective {
    pub fn new(cone: &ToricCone) -> Result<Self> {
        let n = cone.dim();
        if n < 2 {
            return Err(Error::DimensionTooSmall {
                dim: n,
                what: "volume minimization",
            });
        }
        let l: Vec<f64> = gorenstein_vector(cone)?
            .l
            .iter()
            .map(ratio_to_f64)
            .collect();
        let rays = cone.dual_rays();
        let fact: f64 = (1..n).map(|k| k as f64).product();
        let simplices = triangulate_dual(cone)
            .into_iter()
            .map(|s| {
                let gens: Vec<Vec<i64>> = s.iter().map(|&j| rays[j].clone()).collect();
                let weight = det_int(&gens)?.unsigned_abs() as f64 / fact;
                let gens = gens
                    .iter()
                    .map(|u| u.iter().map(|&x| x as f64).collect())
                    .collect();
                Ok((gens, weight))
            })
            .collect::<Result<_>>()?;

        // start at the normalized average of the rays
        let mut origin = vec![0.0; n];
        for v in cone.rays() {
            for (o, &x) in origin.iter_mut().zip(v) {
                *o += x as f64;
            }
        }
        let s: f64 = dotf(&origin, &l);
        origin.iter_mut().for_each(|o| *o /= s);

        Ok(VolumeObjective {
            dim: n,
            simplices,
            dual_rays: rays
                .iter()
                .map(|u| u.iter().map(|&x| x as f64).collect())
                .collect(),
            basis: orthonormal_complement(&l),
            l,
            origin,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gorenstein(&self) -> &[f64] {
        &self.l
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    /// Orthonormal basis of `l^⊥`, one vector per chart coordinate.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn to_xi(&self, y: &[f64]) -> Vec<f64> {
        let mut xi = self.origin.clone();
        for (b, &yk) in self.basis.iter().zip(y) {
            for (x, &bk) in xi.iter_mut().zip(b) {
                *x += yk * bk;
            }
        }
        xi
    }

    /// Chart coordinates of the projection of `ξ` onto the slice plane.
    pub fn to_chart(&self, xi: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = xi.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        self.basis.iter().map(|b| dotf(b, &d)).collect()
    }

    /// Whether `ξ` pairs positively with every dual ray.
    pub fn in_reeb_cone(&self, xi: &[f64]) -> bool {
        self.dual_rays.iter().all(|u| dotf(u, xi) > 0.0)
    }

    /// `a_0(ξ)` at an arbitrary (not necessarily normalized) `ξ`.
    pub fn value_at(&self, xi: &[f64]) -> Result<f64> {
        if !self.in_reeb_cone(xi) {
            return Err(Error::LeftReebCone);
        }
        Ok(self
            .simplices
            .iter()
            .map(|(gens, w)| w / gens.iter().map(|u| dotf(u, xi)).product::<f64>())
            .sum())
    }

    /// Value, gradient and Hessian of `a_0` with respect to `ξ`.
    pub fn derivatives_at(&self, xi: &[f64]) -> Result<(f64, Vec<f64>, Vec<Vec<f64>>)> {
        if !self.in_reeb_cone(xi) {
            return Err(Error::LeftReebCone);
        }
        let n = self.dim;
        let mut value = 0.0;
        let mut grad = vec![0.0; n];
        let mut hess = vec![vec![0.0; n]; n];
        for (gens, w) in &self.simplices {
            let a: Vec<f64> = gens.iter().map(|u| dotf(u, xi)).collect();
            let f = w / a.iter().product::<f64>();
            // ∂f = -f Σ u/a,  ∂²f = f [(Σ u/a)(Σ u/a)^T + Σ u u^T / a²]
            let mut s = vec![0.0; n];
            for (u, ak) in gens.iter().zip(&a) {
                for (si, ui) in s.iter_mut().zip(u) {
                    *si += ui / ak;
                }
            }
            value += f;
            for i in 0..n {
                grad[i] -= f * s[i];
                for j in 0..n {
                    let mut h = s[i] * s[j];
                    for (u, ak) in gens.iter().zip(&a) {
                        h += u[i] * u[j] / (ak * ak);
                    }
                    hess[i][j] += f * h;
                }
            }
        }
        Ok((value, grad, hess))
    }

    pub fn value(&self, y: &[f64]) -> Result<f64> {
        self.value_at(&self.to_xi(y))
    }

    /// Value, gradient and Hessian in chart coordinates.
    pub fn chart_derivatives(&self, y: &[f64]) -> Result<(f64, Vec<f64>, Vec<Vec<f64>>)> {
        let (v, g, h) = self.derivatives_at(&self.to_xi(y))?;
        let m = self.basis.len();
        let grad: Vec<f64> = self.basis.iter().map(|b| dotf(b, &g)).collect();
        let hb: Vec<Vec<f64>> = self
            .basis
            .iter()
            .map(|b| h.iter().map(|row| dotf(row, b)).collect())
            .collect();
        let hess = (0..m)
            .map(|i| (0..m).map(|j| dotf(&self.basis[i], &hb[j])).collect())
            .collect();
        Ok((v, grad, hess))
    }
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dotf(a, a).sqrt()
}

/// Gram-Schmidt on the standard basis after projecting out `l`, keeping the
/// `n - 1` longest residuals in coordinate order.
fn orthonormal_complement(l: &[f64]) -> Vec<Vec<f64>> {
    let n = l.len();
    let ll = dotf(l, l);
    let mut candidates: Vec<(usize, f64)> = (0..n).map(|k| (k, 1.0 - l[k] * l[k] / ll)).collect();
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut chosen: Vec<usize> = candidates[..n - 1].iter().map(|c| c.0).collect();
    chosen.sort();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    let lhat: Vec<f64> = l.iter().map(|x| x / ll.sqrt()).collect();
    for k in chosen {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        for _ in 0..2 {
            for b in std::iter::once(&lhat).chain(basis.iter()) {
                let c = dotf(&e, b);
                e.iter_mut().zip(b).for_each(|(x, bi)| *x -= c * bi);
            }
        }
        let nrm = norm(&e);
        basis.push(e.into_iter().map(|x| x / nrm).collect());
    }
    basis
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOptions {
    /// Stop when the chart gradient and step are both below `tol` (relative
    /// to the objective value).
    pub tol: f64,
    pub max_iter: usize,
    /// Starting Reeb vector; rescaled onto the slice. Defaults to the
    /// normalized average of the rays.
    pub start: Option<Vec<f64>>,
    /// When set, attach the best rational approximation of `ξ*` with
    /// denominator at most this bound.
    pub probe_denominator: Option<u64>,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            tol: 1e-10,
            max_iter: 100,
            start: None,
            probe_denominator: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeResult {
    /// The minimizer, normalized so that `<ξ, l> = 1`.
    pub xi: Vec<f64>,
    pub chart: Vec<f64>,
    /// `a_0(ξ*)`.
    pub value: f64,
    /// `vol(Q_ξ*) = a_0(ξ*) / n`.
    pub volume: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// `‖ū^P(ξ*) - l‖∞`.
    pub kss_residual: f64,
    pub delta: f64,
    /// `min_j <ξ*, u_j>` over the dual rays.
    pub margin: f64,
    pub rational_candidate: Option<RationalCandidate>,
    /// Objective value after each accepted step.
    pub history: Vec<f64>,
}

const MAX_DAMPING: f64 = 1e-4;
const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

/// Damped Newton minimization of `a_0` on the normalized Reeb slice.
pub fn minimize_volume(cone: &ToricCone, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let obj = VolumeObjective::new(cone)?;
    let mut y = match &opts.start {
        Some(s) => {
            if s.len() != obj.dim {
                return Err(Error::DimensionMismatch {
                    index: 0,
                    expected: obj.dim,
                    found: s.len(),
                });
            }
            let a = dotf(s, &obj.l);
            if !(a > 0.0) || !obj.in_reeb_cone(s) {
                return Err(Error::NotInReebCone { index: 0 });
            }
            let xi: Vec<f64> = s.iter().map(|x| x / a).collect();
            obj.to_chart(&xi)
        }
        None => vec![0.0; obj.dim - 1],
    };

    let mut history = Vec::new();
    let mut iterations = 0;
    let (mut f, mut g, mut h) = obj.chart_derivatives(&y)?;
    loop {
        let gnorm = norm(&g);
        if iterations >= opts.max_iter {
            return Err(Error::MaxIterations {
                iterations,
                gradient_norm: gnorm,
            });
        }
        let step = newton_step(&g, &h)?;
        let slope = dotf(&g, &step);
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = y.iter().zip(&step).map(|(a, b)| a + alpha * b).collect();
            if let Ok(ft) = obj.value(&trial) {
                let slack = 64.0 * f64::EPSILON * f.abs();
                if ft <= f + ARMIJO * alpha * slope + slack {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((trial, ft)) = accepted else {
            if gnorm <= opts.tol * f.max(1.0) {
                break;
            }
            return Err(Error::NonConvergent(format!(
                "line search failed at gradient norm {gnorm:e}"
            )));
        };
        iterations += 1;
        let step_norm = alpha * norm(&step);
        y = trial;
        history.push(ft);
        (f, g, h) = obj.chart_derivatives(&y)?;
        if step_norm <= opts.tol && norm(&g) <= opts.tol * f.max(1.0) {
            break;
        }
    }

    let xi = obj.to_xi(&y);
    let reeb = ReebVector::new(cone, xi.clone())?;
    let report = delta(cone, &reeb)?;
    let rational_candidate = opts
        .probe_denominator
        .map(|q| rationality_probe(&xi, q))
        .transpose()?;
    Ok(MinimizeResult {
        margin: reeb.margin(cone),
        rational_candidate,
        kss_residual: report.residual,
        delta: report.delta,
        chart: y,
        volume: f / obj.dim as f64,
        value: f,
        iterations,
        gradient_norm: norm(&g),
        xi,
        history,
    })
}

/// Solves `(H + λ I) p = -g`, raising `λ` from `1e-12` (relative to the
/// diagonal) by factors of ten until `H + λ I` is positive definite.
fn newton_step(g: &[f64], h: &[Vec<f64>]) -> Result<Vec<f64>> {
    let m = g.len();
    let scale = (0..m)
        .map(|i| h[i][i].abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    let hm = DMatrix::from_fn(m, m, |i, j| h[i][j]);
    let rhs = DVector::from_iterator(m, g.iter().map(|x| -x));
    let mut lambda = 1e-12;
    loop {
        let shifted = &hm + DMatrix::identity(m, m) * (lambda * scale);
        if let Some(chol) = shifted.cholesky() {
            return Ok(chol.solve(&rhs).iter().copied().collect());
        }
        lambda *= 10.0;
        if lambda > MAX_DAMPING {
            return Err(Error::NonConvergent(
                "Hessian is not positive definite".into(),
            ));
        }
    }
}
