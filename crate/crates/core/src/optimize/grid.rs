use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::VolumeObjective;
use crate::error::{Error, Result};
use crate::geometry::ToricCone;

/// Upper bound on the number of grid points evaluated by
/// [`grid_search_oracle`].
pub const MAX_GRID_POINTS: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub xi: Vec<f64>,
    pub chart: Vec<f64>,
    pub value: f64,
    /// Grid step along each chart axis.
    pub spacing: Vec<f64>,
    /// Number of grid points inside the Reeb cone.
    pub evaluated: usize,
}

/// Brute-force minimum of `a_0` over a uniform grid on the slice.
///
/// The grid covers the bounding box, in chart coordinates, of the slice
/// polytope `conv(v_i / <v_i, l>)` with `resolution` subdivisions per axis.
/// Points outside the open Reeb cone are skipped. Ties go to the first point
/// in lexicographic grid order, independent of thread count.
pub fn grid_search_oracle(cone: &ToricCone, resolution: usize) -> Result<GridResult> {
    if resolution == 0 {
        return Err(Error::InvalidArgument(
            "grid resolution must be positive".into(),
        ));
    }
    let obj = VolumeObjective::new(cone)?;
    let m = obj.dim() - 1;
    let corners: Vec<Vec<f64>> = cone
        .rays()
        .iter()
        .map(|v| {
            let v: Vec<f64> = v.iter().map(|&x| x as f64).collect();
            let a: f64 = v.iter().zip(obj.gorenstein()).map(|(x, y)| x * y).sum();
            obj.to_chart(&v.iter().map(|x| x / a).collect::<Vec<_>>())
        })
        .collect();
    let lo: Vec<f64> = (0..m)
        .map(|k| corners.iter().map(|c| c[k]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..m)
        .map(|k| {
            corners
                .iter()
                .map(|c| c[k])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let spacing: Vec<f64> = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| (b - a) / resolution as f64)
        .collect();

    let side = resolution + 1;
    let total = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(side));
    let total = match total {
        Some(t) if t <= MAX_GRID_POINTS => t,
        _ => {
            return Err(Error::ExceedsSupportedSize {
                what: "grid points",
                found: total.unwrap_or(usize::MAX),
                limit: MAX_GRID_POINTS,
            })
        }
    };

    let point = |mut idx: usize| -> Vec<f64> {
        let mut y = vec![0.0; m];
        for k in (0..m).rev() {
            y[k] = lo[k] + (idx % side) as f64 * spacing[k];
            idx /= side;
        }
        y
    };
    let best = (0..total)
        .into_par_iter()
        .filter_map(|idx| obj.value(&point(idx)).ok().map(|v| (v, idx, 1usize)))
        .reduce_with(|a, b| {
            let count = a.2 + b.2;
            if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                (b.0, b.1, count)
            } else {
                (a.0, a.1, count)
            }
        });
    let Some((value, idx, evaluated)) = best else {
        return Err(Error::InvalidArgument(
            "grid has no point inside the Reeb cone; increase the resolution".into(),
        ));
    };
    let chart = point(idx);
    Ok(GridResult {
        xi: obj.to_xi(&chart),
        chart,
        value,
        spacing,
        evaluated,
    })
}

/// A simultaneous rational approximation `p / q` of a real vector.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalCandidate {
    pub values: Vec<BigRational>,
    pub denominator: u64,
    /// `max_k |x_k - p_k / q|`.
    pub distance: f64,
    pub max_denominator: u64,
}

/// Best simultaneous approximation of `xi` by fractions with a common
/// denominator `q <= max_denominator`. Ties go to the smaller `q`.
pub fn rationality_probe(xi: &[f64], max_denominator: u64) -> Result<RationalCandidate> {
    if max_denominator == 0 {
        return Err(Error::InvalidArgument(
            "denominator bound must be positive".into(),
        ));
    }
    let mut best: Option<(f64, u64)> = None;
    for q in 1..=max_denominator {
        let qf = q as f64;
        let dist = xi
            .iter()
            .map(|x| ((x * qf).round() / qf - x).abs())
            .fold(0.0, f64::max);
        if best.is_none_or(|(d, _)| dist < d) {
            best = Some((dist, q));
        }
    }
    let (distance, q) = best.expect("at least one denominator");
    let values = xi
        .iter()
        .map(|x| {
            let p = (x * q as f64).round() as i64;
            BigRational::new(BigInt::from(p), BigInt::from(q))
        })
        .collect();
    Ok(RationalCandidate {
        denominator: q,
        values,
        distance,
        max_denominator,
    })
}
