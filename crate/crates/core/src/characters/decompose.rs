//! Half-open simplicial decomposition of `σ^∨ ∩ Z^n`.
//!
//! The pulling triangulation of `σ^∨` is made disjoint by choosing a generic
//! interior point `y`: a point `x` belongs to the simplicial cone `C` for which
//! `x + εy` lies in the interior of `C` for small `ε > 0`. Equivalently, the
//! facet of `C` with inward normal `w` is kept when `<w, y> > 0` and dropped
//! otherwise.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{triangulate_dual, ToricCone};
use crate::linalg::{adjugate_int, hermite_diagonal};

/// Default bound on the number of box points in a single piece.
pub const DEFAULT_MAX_BOX_POINTS: usize = 1_000_000;

/// A half-open simplicial cone `{Σ λ_k u_k : λ_k >= 0, λ_k > 0 if open[k]}`
/// and the lattice points of its fundamental parallelepiped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialPiece {
    pub generators: Vec<Vec<i64>>,
    /// `open[k]` means the facet opposite `generators[k]` is excluded.
    pub open: Vec<bool>,
    /// Integer points `Σ λ_k u_k` with `λ_k ∈ [0, 1)`, or `(0, 1]` for open
    /// facets. There are exactly `|det(u_1, ..., u_n)|` of them.
    pub box_points: Vec<Vec<i64>>,
    /// Always `+1` for the disjoint decomposition.
    pub sign: i8,
}

impl SimplicialPiece {
    /// Whether the integer point `x` lies in this half-open cone.
    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        let (adj, det) = adjugate_int(&self.generators)?;
        let sign = det.signum();
        for k in 0..x.len() {
            let lam: i128 = (0..x.len()).map(|r| adj[r][k] * sign * x[r] as i128).sum();
            if lam < 0 || (self.open[k] && lam == 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Decomposes `σ^∨` into disjoint half-open simplicial cones.
pub fn decompose_dual(cone: &ToricCone, max_box_points: usize) -> Result<Vec<SimplicialPiece>> {
    let rays = cone.dual_rays();
    let simplices: Vec<Vec<Vec<i64>>> = triangulate_dual(cone)
        .into_iter()
        .map(|s| s.iter().map(|&j| rays[j].clone()).collect())
        .collect();

    // inward facet normals w_k with <w_k, u_j> = |det| δ_jk
    let normals: Vec<Vec<Vec<i128>>> = simplices
        .iter()
        .map(|gens| {
            let (adj, det) = adjugate_int(gens)?;
            let n = gens.len();
            Ok((0..n)
                .map(|k| (0..n).map(|r| adj[r][k] * det.signum()).collect())
                .collect())
        })
        .collect::<Result<_>>()?;

    let y = generic_point(cone, &normals)?;

    simplices
        .into_par_iter()
        .zip(normals.into_par_iter())
        .map(|(gens, ws)| {
            let open: Vec<bool> = ws.iter().map(|w| dot128(w, &y) < 0).collect();
            let box_points = box_points(&gens, &open, max_box_points)?;
            Ok(SimplicialPiece {
                generators: gens,
                open,
                box_points,
                sign: 1,
            })
        })
        .collect()
}

fn dot128(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// An interior point of `σ^∨` off every facet hyperplane of every simplex.
fn generic_point(cone: &ToricCone, normals: &[Vec<Vec<i128>>]) -> Result<Vec<i128>> {
    let n = cone.dim();
    let mut base = vec![0i128; n];
    for u in cone.dual_rays() {
        for (b, &x) in base.iter_mut().zip(u) {
            *b += x as i128;
        }
    }
    let rays: Vec<Vec<i128>> = cone
        .rays()
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    for trial in 0..10_000i128 {
        let p = trial + 2;
        let scale = 1_000 * (trial + 1);
        let mut y: Vec<i128> = base.iter().map(|&b| b * scale).collect();
        let mut pk = 1i128;
        for yk in y.iter_mut() {
            *yk += pk;
            pk = pk.saturating_mul(p);
        }
        let interior = rays.iter().all(|v| dot128(v, &y) > 0);
        let generic = normals
            .iter()
            .flat_map(|ws| ws.iter())
            .all(|w| dot128(w, &y) != 0);
        if interior && generic {
            return Ok(y);
        }
    }
    Err(Error::InvalidArgument(
        "no generic interior point found for decomposition".into(),
    ))
}

fn box_points(gens: &[Vec<i64>], open: &[bool], max: usize) -> Result<Vec<Vec<i64>>> {
    let n = gens.len();
    let (adj, det) = adjugate_int(gens)?;
    let d = det.abs();
    if d as u128 > max as u128 {
        return Err(Error::ExceedsSupportedSize {
            what: "box points in a simplicial piece",
            found: usize::try_from(d).unwrap_or(usize::MAX),
            limit: max,
        });
    }
    let sign = det.signum();
    let diag = hermite_diagonal(gens)?;
    let mut out = Vec::with_capacity(d as usize);
    let mut x = vec![0i128; n];
    loop {
        // λ_k |det| = <w_k, x>, reduced into [0, |det|) or (0, |det|]
        let mut p = vec![0i128; n];
        for k in 0..n {
            let lam: i128 = (0..n).map(|r| adj[r][k] * sign * x[r]).sum();
            let mut f = lam.rem_euclid(d);
            if open[k] && f == 0 {
                f = d;
            }
            for (pi, &g) in p.iter_mut().zip(&gens[k]) {
                *pi += f * g as i128;
            }
        }
        let point: Vec<i64> = p
            .iter()
            .map(|&c| {
                debug_assert_eq!(c % d, 0);
                i64::try_from(c / d).map_err(|_| Error::Overflow("box point"))
            })
            .collect::<Result<_>>()?;
        out.push(point);

        let mut k = n;
        loop {
            if k == 0 {
                out.sort();
                return Ok(out);
            }
            k -= 1;
            if x[k] + 1 < diag[k] {
                x[k] += 1;
                for r in k + 1..n {
                    x[r] = 0;
                }
                break;
            }
        }
    }
}
