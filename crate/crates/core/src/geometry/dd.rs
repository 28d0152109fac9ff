//! Double description: extreme rays of `{u : <a_i, u> >= 0}`.

use crate::error::{Error, Result};
use crate::linalg::{adjugate_int, dot_i, primitive_i128, rank_int, to_i64_vec};

/// Extreme rays of the cone cut out by `constraints` (as rows `a_i`, meaning
/// `<a_i, u> >= 0`). The constraint matrix must have rank `dim`, so the result
/// is pointed. Rays come back primitive and sorted lexicographically.
pub(crate) fn extreme_rays(constraints: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i64>>> {
    let basis = independent_rows(constraints, dim);
    if basis.len() < dim {
        return Err(Error::NotFullDimensional {
            dim,
            rank: basis.len(),
        });
    }

    // Initial simplicial cone: columns of adj(A_B), signed so that A_B r_k > 0.
    let a_b: Vec<Vec<i64>> = basis.iter().map(|&i| constraints[i].clone()).collect();
    let (adj, det) = adjugate_int(&a_b)?;
    let sign = det.signum();
    let mut rays: Vec<Vec<i64>> = (0..dim)
        .map(|k| {
            let col: Vec<i128> = (0..dim).map(|r| adj[r][k] * sign).collect();
            to_i64_vec(&primitive_i128(&col))
        })
        .collect::<Result<_>>()?;
    let mut processed: Vec<usize> = basis.clone();

    for (idx, a) in constraints.iter().enumerate() {
        if basis.contains(&idx) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| dot_i(a, r)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut next: Vec<Vec<i64>> = (0..rays.len())
            .filter(|&i| vals[i] >= 0)
            .map(|i| rays[i].clone())
            .collect();

        for &p in &plus {
            for &q in &minus {
                if !adjacent(&rays[p], &rays[q], constraints, &processed, dim) {
                    continue;
                }
                let combo: Vec<i128> = rays[p]
                    .iter()
                    .zip(&rays[q])
                    .map(|(&rp, &rq)| {
                        vals[p]
                            .checked_mul(rq as i128)
                            .and_then(|x| (-vals[q]).checked_mul(rp as i128).map(|y| x + y))
                            .ok_or(Error::Overflow("double description"))
                    })
                    .collect::<Result<_>>()?;
                next.push(to_i64_vec(&primitive_i128(&combo))?);
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(idx);
    }
    rays.sort();
    rays.dedup();
    Ok(rays)
}

fn independent_rows(rows: &[Vec<i64>], dim: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut current: Vec<Vec<i64>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        current.push(r.clone());
        if rank_int(&current) == current.len() {
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        } else {
            current.pop();
        }
    }
    chosen
}

/// Algebraic adjacency test: two extreme rays span a 2-face iff the
/// constraints tight at both have rank `dim - 2`.
fn adjacent(p: &[i64], q: &[i64], rows: &[Vec<i64>], processed: &[usize], dim: usize) -> bool {
    if dim < 2 {
        return false;
    }
    let common: Vec<Vec<i64>> = processed
        .iter()
        .filter(|&&i| dot_i(&rows[i], p) == 0 && dot_i(&rows[i], q) == 0)
        .map(|&i| rows[i].clone())
        .collect();
    common.len() >= dim - 2 && rank_int(&common) == dim - 2
}
