use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::det_int;
use crate::scalar::{dot_int, factorial, ivec_to, Scalar};

use super::{triangulate_dual, ReebVector, ToricCone};

/// Half-space `<normal, u> >= offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace<S> {
    pub normal: Vec<S>,
    pub offset: S,
}

/// The polytope `Q_ξ = {u ∈ σ^∨ : <ξ, u> <= 1}` and its top facet
/// `P_ξ = {u ∈ σ^∨ : <ξ, u> = 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeSlice<S> {
    /// Origin followed by the vertices of `P_ξ`.
    pub vertices_q: Vec<Vec<S>>,
    /// `u_j / <ξ, u_j>` for each dual ray `u_j`, in dual-ray order.
    pub vertices_p: Vec<Vec<S>>,
    pub hrep_q: Vec<Halfspace<S>>,
    /// Euclidean `n`-volume of `Q_ξ`.
    pub volume_q: S,
    pub bary_q: Vec<S>,
    pub bary_p: Vec<S>,
}

/// Vertices, volume and barycenters of `Q_ξ` and `P_ξ`.
///
/// `Q_ξ` is cut into simplices `conv(0, u_{j_1}/h_1, ..., u_{j_n}/h_n)` over
/// the triangulation of `σ^∨`, with `h_k = <ξ, u_{j_k}>`. Each has volume
/// `|det| / (n! Π h_k)` and barycenter equal to its vertex average. The
/// barycenter of `P_ξ` is aggregated separately from the `(n-1)`-simplices of
/// `P_ξ`, weighted by their volumes after projecting out one coordinate.
pub fn polytope_slice<S: Scalar>(cone: &ToricCone, xi: &ReebVector<S>) -> Result<PolytopeSlice<S>> {
    let n = cone.dim();
    let xi = xi.xi();
    let heights: Vec<S> = cone.dual_rays().iter().map(|u| dot_int(u, xi)).collect();
    if heights.iter().any(|h| h <= &S::zero()) {
        return Err(Error::UnboundedSlice);
    }
    let vertices_p: Vec<Vec<S>> = cone
        .dual_rays()
        .iter()
        .zip(&heights)
        .map(|(u, h)| u.iter().map(|&x| S::from_i64(x) / h.clone()).collect())
        .collect();

    let simplices = triangulate_dual(cone);
    let n_fact: S = factorial(n);
    let axis = projection_axis(xi);

    let mut volume = S::zero();
    let mut moment_q = vec![S::zero(); n];
    let mut weight_p = S::zero();
    let mut moment_p = vec![S::zero(); n];
    for simplex in &simplices {
        let gens: Vec<Vec<i64>> = simplex
            .iter()
            .map(|&j| cone.dual_rays()[j].clone())
            .collect();
        let det = S::from_i128(det_int(&gens)?.abs());
        let prod = simplex
            .iter()
            .fold(S::one(), |acc, &j| acc * heights[j].clone());
        let vol = det / (n_fact.clone() * prod);

        let mut vsum = vec![S::zero(); n];
        for &j in simplex {
            for (acc, x) in vsum.iter_mut().zip(&vertices_p[j]) {
                *acc = acc.clone() + x.clone();
            }
        }
        for (m, s) in moment_q.iter_mut().zip(&vsum) {
            *m = m.clone() + vol.clone() * s.clone() / S::from_i64(n as i64 + 1);
        }
        volume = volume + vol;

        let w = projected_volume(simplex.iter().map(|&j| &vertices_p[j]).collect(), axis);
        for (m, s) in moment_p.iter_mut().zip(&vsum) {
            *m = m.clone() + w.clone() * s.clone() / S::from_i64(n as i64);
        }
        weight_p = weight_p + w;
    }

    let bary_q = moment_q.into_iter().map(|m| m / volume.clone()).collect();
    let bary_p = moment_p.into_iter().map(|m| m / weight_p.clone()).collect();

    let mut vertices_q = vec![vec![S::zero(); n]];
    vertices_q.extend(vertices_p.iter().cloned());
    let mut hrep_q: Vec<Halfspace<S>> = cone
        .rays()
        .iter()
        .map(|v| Halfspace {
            normal: ivec_to(v),
            offset: S::zero(),
        })
        .collect();
    hrep_q.push(Halfspace {
        normal: xi.iter().map(|x| -x.clone()).collect(),
        offset: -S::one(),
    });

    Ok(PolytopeSlice {
        vertices_q,
        vertices_p,
        hrep_q,
        volume_q: volume,
        bary_q,
        bary_p,
    })
}

fn projection_axis<S: Scalar>(xi: &[S]) -> usize {
    let mut best = 0;
    for k in 1..xi.len() {
        if xi[k].abs() > xi[best].abs() {
            best = k;
        }
    }
    best
}

/// `(n-1)!`-scaled volume of the simplex `conv(w_0, ..., w_{n-1})` inside the
/// hyperplane `<ξ, u> = 1`, measured after dropping coordinate `axis`. The
/// projection scales every such simplex by the same factor.
fn projected_volume<S: Scalar>(pts: Vec<&Vec<S>>, axis: usize) -> S {
    let n = pts[0].len();
    if n == 1 {
        return S::one();
    }
    let rows: Vec<Vec<S>> = pts[1..]
        .iter()
        .map(|p| {
            (0..n)
                .filter(|&k| k != axis)
                .map(|k| p[k].clone() - pts[0][k].clone())
                .collect()
        })
        .collect();
    det_scalar(rows).abs()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn det_scalar<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let n = a.len();
    let mut det = S::one();
    for c in 0..n {
        let mut p = c;
        for i in c + 1..n {
            if a[i][c].abs() > a[p][c].abs() {
                p = i;
            }
        }
        if a[p][c].is_zero() {
            return S::zero();
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = det * a[c][c].clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() / a[c][c].clone();
            for j in c..n {
                let delta = f.clone() * a[c][j].clone();
                a[i][j] = a[i][j].clone() - delta;
            }
        }
    }
    det
}

/// Largest box that `lattice_points` will scan.
const MAX_SCAN: u128 = 50_000_000;

/// All integer points of `m Q_ξ`: integer `u` with `<v_i, u> >= 0` for every
/// ray and `<ξ, u> <= m`. Points are returned in lexicographic order.
pub fn lattice_points<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    m: u64,
) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for_each_lattice_point(cone, xi, m, |u| out.push(u.to_vec()))?;
    Ok(out)
}

/// Calls `visit` on each point of [`lattice_points`], in the same order,
/// without collecting them.
pub fn for_each_lattice_point<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    m: u64,
    mut visit: impl FnMut(&[i64]),
) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("dilation m must be positive".into()));
    }
    let xi: Vec<BigRational> = xi
        .xi()
        .iter()
        .map(|x| x.to_ratio().ok_or(Error::IrrationalReeb))
        .collect::<Result<_>>()?;
    let n = cone.dim();
    let m_r = BigRational::from_integer(BigInt::from(m));

    // Bounding box of m Q_ξ from its vertices (origin and m u_j / <ξ, u_j>).
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for u in cone.dual_rays() {
        let h = dot_int(u, &xi);
        for k in 0..n {
            let c = BigRational::from_integer(BigInt::from(u[k])) * &m_r / &h;
            let f = c
                .floor()
                .to_integer()
                .to_i64()
                .ok_or(Error::Overflow("lattice box"))?;
            let cl = c
                .ceil()
                .to_integer()
                .to_i64()
                .ok_or(Error::Overflow("lattice box"))?;
            lo[k] = lo[k].min(f);
            hi[k] = hi[k].max(cl);
        }
    }
    let size: u128 = lo
        .iter()
        .zip(&hi)
        .map(|(&a, &b)| (b - a + 1) as u128)
        .product();
    if size > MAX_SCAN {
        return Err(Error::ExceedsSupportedSize {
            what: "lattice scan box",
            found: size.min(usize::MAX as u128) as usize,
            limit: MAX_SCAN as usize,
        });
    }

    // <ξ, u> <= m as an integer test after clearing denominators
    let den = xi.iter().fold(BigInt::from(1), |acc, x| {
        num_integer::Integer::lcm(&acc, x.denom())
    });
    let xi_int: Vec<i128> = xi
        .iter()
        .map(|x| {
            (x * BigRational::from_integer(den.clone()))
                .to_integer()
                .to_i128()
        })
        .collect::<Option<_>>()
        .ok_or(Error::Overflow("lattice scan"))?;
    let bound = (den * BigInt::from(m))
        .to_i128()
        .ok_or(Error::Overflow("lattice scan"))?;

    // Constraints `c x >= d` on the last coordinate, with `c` and the partial
    // sum for `d` taken from the other coordinates.
    let last = n - 1;
    let mut rows: Vec<(i128, Vec<i128>, i128)> = cone
        .rays()
        .iter()
        .map(|v| {
            (
                v[last] as i128,
                v[..last].iter().map(|&x| -(x as i128)).collect(),
                0,
            )
        })
        .collect();
    rows.push((-xi_int[last], xi_int[..last].to_vec(), -bound));

    let mut cur = lo.clone();
    loop {
        let (mut x_lo, mut x_hi) = (lo[last] as i128, hi[last] as i128);
        for (c, partial, offset) in &rows {
            let d: i128 = offset
                + partial
                    .iter()
                    .zip(&cur)
                    .map(|(a, &b)| a * b as i128)
                    .sum::<i128>();
            match c.signum() {
                1 => x_lo = x_lo.max(num_integer::Integer::div_ceil(&d, c)),
                -1 => x_hi = x_hi.min(num_integer::Integer::div_floor(&d, c)),
                _ if d > 0 => x_hi = x_lo - 1,
                _ => {}
            }
        }
        for x in x_lo..=x_hi {
            cur[last] = x as i64;
            visit(&cur);
        }
        // odometer over the other coordinates, last of them fastest
        let mut k = last;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if cur[k] < hi[k] {
                cur[k] += 1;
                cur[k + 1..last].copy_from_slice(&lo[k + 1..last]);
                break;
            }
        }
    }
}
