//! Brute-force lattice sums of the characters at a fixed `t > 0`.
//!
//! The sum runs over the integer points of `C Q_ξ` for a cutoff `C`, one
//! column at a time along the coordinate where `|ξ_k|` is largest; each
//! column is a finite (arithmetico-)geometric series summed in closed form.
//! Nothing here touches the simplicial decomposition, so the result is an
//! independent check of the Laurent expansions.

use crate::error::{Error, Result};
use crate::geometry::{polytope_slice, ReebVector, ToricCone};
use crate::scalar::Scalar;

const MAX_COLUMNS: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    /// Estimated contribution of lattice points beyond the cutoff.
    pub tail_estimate: f64,
    /// Sum of the absolute values of the terms; equals `value` for the
    /// index character.
    pub magnitude: f64,
    pub cutoff: f64,
    pub columns: usize,
}

struct TailModel {
    n: usize,
    /// n vol(Q_ξ), density of lattice points per unit level
    density: f64,
    /// shift covering unit cubes around lattice points
    shift: f64,
    /// `max |<η, u>|` on `P_ξ`; 1 for the index character
    weight: f64,
    weighted: bool,
}

impl TailModel {
    fn new<S: Scalar>(cone: &ToricCone, xi: &ReebVector<S>, eta: Option<&[f64]>) -> Result<Self> {
        let n = cone.dim();
        let q = polytope_slice(cone, xi)?;
        let xf: Vec<f64> = xi.xi().iter().map(Scalar::to_f64).collect();
        let weight = match eta {
            None => 1.0,
            Some(eta) => q
                .vertices_p
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(eta)
                        .map(|(a, b)| a.to_f64() * b)
                        .sum::<f64>()
                        .abs()
                })
                .fold(0.0, f64::max),
        };
        Ok(TailModel {
            n,
            density: n as f64 * q.volume_q.to_f64(),
            shift: xf.iter().map(|x| x.abs()).sum(),
            weight,
            weighted: eta.is_some(),
        })
    }

    /// `density · weight · ∫_C^∞ (s + D)^e e^{-ts} ds` with `e = n - 1`, or `n`
    /// when weighted by `|<η, u>| <= weight (s + D)`.
    fn tail(&self, t: f64, cutoff: f64) -> f64 {
        let e = if self.weighted { self.n } else { self.n - 1 };
        let r0 = cutoff + self.shift;
        // ∫_{r0}^∞ r^e e^{-t(r - D)} dr = e^{-tC} Σ_j e!/(e-j)! r0^{e-j} / t^{j+1}
        let mut sum = 0.0;
        let mut falling = 1.0;
        for j in 0..=e {
            if j > 0 {
                falling *= (e + 1 - j) as f64;
            }
            sum += falling * r0.powi((e - j) as i32) / t.powi(j as i32 + 1);
        }
        self.density * self.weight * (-t * cutoff).exp() * sum
    }
}

/// Smallest cutoff (growing geometrically from `n / t`) whose estimated relative tail is
/// below `tail_tol`.
pub fn suggest_cutoff<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    eta: Option<&[S]>,
    t: f64,
    tail_tol: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    let eta_f: Option<Vec<f64>> = eta.map(|e| e.iter().map(Scalar::to_f64).collect());
    let model = TailModel::new(cone, xi, eta_f.as_deref())?;
    let total = model.tail(t, 0.0);
    let mut c = cone.dim() as f64 / t;
    while model.tail(t, c) > tail_tol * total {
        c *= 1.25;
    }
    Ok(c)
}

/// [`truncated_character_oracle`] starting from [`suggest_cutoff`] and growing
/// the cutoff by 25% until the measured relative tail is below `tail_tol`.
pub fn auto_truncated_oracle<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    eta: Option<&[S]>,
    t: f64,
    tail_tol: f64,
) -> Result<OracleValue> {
    let mut cutoff = suggest_cutoff(cone, xi, eta, t, tail_tol)?;
    loop {
        match truncated_character_oracle(cone, xi, eta, t, cutoff, tail_tol) {
            Err(Error::CutoffTooSmall { .. }) => cutoff *= 1.25,
            other => return other,
        }
    }
}

/// `Σ_{u ∈ σ^∨ ∩ Z^n, <ξ,u> <= cutoff} e^{-t<ξ,u>}` (times `<η, u>` when
/// `eta` is given), with a tail estimate. Fails with `CutoffTooSmall` when the
/// estimated tail exceeds `tail_tol` relative to the absolute sum.
pub fn truncated_character_oracle<S: Scalar>(
    cone: &ToricCone,
    xi: &ReebVector<S>,
    eta: Option<&[S]>,
    t: f64,
    cutoff: f64,
    tail_tol: f64,
) -> Result<OracleValue> {
    if !(t > 0.0) || !(cutoff > 0.0) {
        return Err(Error::InvalidArgument(
            "t and cutoff must be positive".into(),
        ));
    }
    let n = cone.dim();
    let xf: Vec<f64> = xi.xi().iter().map(Scalar::to_f64).collect();
    let eta_f: Option<Vec<f64>> = eta.map(|e| e.iter().map(Scalar::to_f64).collect());
    if let Some(e) = &eta_f {
        if e.len() != n {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: n,
                found: e.len(),
            });
        }
    }
    let axis = (0..n)
        .max_by(|&a, &b| xf[a].abs().total_cmp(&xf[b].abs()))
        .expect("dimension >= 1");
    let others: Vec<usize> = (0..n).filter(|&k| k != axis).collect();

    // bounding box of cutoff · Q_ξ in the non-axis coordinates
    let mut lo = vec![0i64; others.len()];
    let mut hi = vec![0i64; others.len()];
    for u in cone.dual_rays() {
        let h: f64 = u.iter().zip(&xf).map(|(&a, b)| a as f64 * b).sum();
        for (i, &k) in others.iter().enumerate() {
            let c = cutoff * u[k] as f64 / h;
            lo[i] = lo[i].min(c.floor() as i64);
            hi[i] = hi[i].max(c.ceil() as i64);
        }
    }
    let columns: u128 = lo
        .iter()
        .zip(&hi)
        .map(|(&a, &b)| (b - a + 1) as u128)
        .product();
    if columns > MAX_COLUMNS {
        return Err(Error::ExceedsSupportedSize {
            what: "oracle column count",
            found: usize::try_from(columns).unwrap_or(usize::MAX),
            limit: MAX_COLUMNS as usize,
        });
    }

    let xa = xf[axis];
    let ratio = (-t * xa.abs()).exp();
    let one_minus = -(-t * xa.abs()).exp_m1();
    let eta_a = eta_f.as_ref().map_or(0.0, |e| e[axis]);

    let mut value = 0.0;
    let mut abs_sum = 0.0;
    let mut x = lo.clone();
    let mut point = vec![0i64; n];
    loop {
        for (i, &k) in others.iter().enumerate() {
            point[k] = x[i];
        }
        if let Some((zlo, zhi)) = column_range(cone, &point, axis, &xf, cutoff)? {
            let count = (zhi - zlo + 1) as f64;
            let c0: f64 = others.iter().map(|&k| xf[k] * point[k] as f64).sum();
            let (z0, step) = if xa > 0.0 { (zlo, 1.0) } else { (zhi, -1.0) };
            let e0 = (-t * (c0 + xa * z0 as f64)).exp();
            let (g0, g1) = geometric_sums(ratio, one_minus, count);
            match &eta_f {
                None => {
                    value += e0 * g0;
                    abs_sum += e0 * g0;
                }
                Some(eta) => {
                    let w0: f64 = others
                        .iter()
                        .map(|&k| eta[k] * point[k] as f64)
                        .sum::<f64>()
                        + eta_a * z0 as f64;
                    value += e0 * (w0 * g0 + step * eta_a * g1);
                    abs_sum += e0 * (w0.abs() * g0 + eta_a.abs() * g1);
                }
            }
        }
        let mut i = x.len();
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                x[i + 1..].copy_from_slice(&lo[i + 1..]);
                break false;
            }
        };
        if done {
            break;
        }
    }

    let model = TailModel::new(cone, xi, eta_f.as_deref())?;
    let tail = model.tail(t, cutoff);
    let rel = if abs_sum > 0.0 { tail / abs_sum } else { tail };
    if rel > tail_tol {
        return Err(Error::CutoffTooSmall {
            cutoff,
            tail: rel,
            tol: tail_tol,
        });
    }
    Ok(OracleValue {
        value,
        tail_estimate: tail,
        magnitude: abs_sum,
        cutoff,
        columns: columns as usize,
    })
}

/// `(Σ_{j<N} r^j, Σ_{j<N} j r^j)`.
fn geometric_sums(r: f64, one_minus_r: f64, count: f64) -> (f64, f64) {
    if count <= 64.0 || one_minus_r < 1e-6 {
        let mut g0 = 0.0;
        let mut g1 = 0.0;
        let mut p = 1.0;
        let mut j = 0.0;
        while j < count {
            g0 += p;
            g1 += j * p;
            p *= r;
            j += 1.0;
        }
        return (g0, g1);
    }
    let r_n = r.powf(count);
    let g0 = (1.0 - r_n) / one_minus_r;
    let g1 =
        r * (1.0 - count * r.powf(count - 1.0) + (count - 1.0) * r_n) / (one_minus_r * one_minus_r);
    (g0, g1)
}

/// Range of the axis coordinate `z` such that `point` (with `z` substituted)
/// lies in `σ^∨` and `<ξ, point> <= cutoff`.
fn column_range(
    cone: &ToricCone,
    point: &[i64],
    axis: usize,
    xf: &[f64],
    cutoff: f64,
) -> Result<Option<(i64, i64)>> {
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for v in cone.rays() {
        // v_axis z >= -Σ_{k≠axis} v_k x_k
        let r: i128 = -(0..point.len())
            .filter(|&k| k != axis)
            .map(|k| v[k] as i128 * point[k] as i128)
            .sum::<i128>();
        let va = v[axis] as i128;
        if va > 0 {
            lo = lo.max(ceil_div(r, va) as i64);
        } else if va < 0 {
            hi = hi.min(floor_div(r, va) as i64);
        } else if r > 0 {
            return Ok(None);
        }
    }
    let q: f64 = cutoff
        - (0..point.len())
            .filter(|&k| k != axis)
            .map(|k| xf[k] * point[k] as f64)
            .sum::<f64>();
    let bound = q / xf[axis];
    if xf[axis] > 0.0 {
        hi = hi.min((bound + 1e-9).floor() as i64);
    } else {
        lo = lo.max((bound - 1e-9).ceil() as i64);
    }
    if lo == i64::MIN || hi == i64::MAX {
        return Err(Error::UnboundedSlice);
    }
    Ok((lo <= hi).then_some((lo, hi)))
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}
