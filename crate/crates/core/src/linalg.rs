//! Small exact linear algebra over the integers and the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Divides out the content of `v`. The zero vector is returned unchanged.
pub fn primitive_i128(v: &[i128]) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|&x| x / g).collect()
    }
}

pub fn primitive_i64(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|&x| x / g).collect()
    }
}

pub fn to_i64_vec(v: &[i128]) -> Result<Vec<i64>> {
    v.iter()
        .map(|&x| i64::try_from(x).map_err(|_| Error::Overflow("lattice vector")))
        .collect()
}

pub fn dot_i(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn to_rational_matrix(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}

/// Row-reduces `m` in place to reduced echelon form and returns the pivot
/// columns.
fn row_reduce(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

pub fn rank_int(rows: &[Vec<i64>]) -> usize {
    rank_rational(&to_rational_matrix(rows))
}

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution {
    Unique(Vec<BigRational>),
    Inconsistent,
    Underdetermined,
}

pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational], cols: usize) -> LinearSolution {
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&cols) {
        return LinearSolution::Inconsistent;
    }
    if pivots.len() < cols {
        return LinearSolution::Underdetermined;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    LinearSolution::Unique(x)
}

/// Inverse of a square rational matrix, if it is nonsingular.
pub fn inverse_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let delta = &f * &a[c][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}

/// Determinant of an integer matrix given by rows.
pub fn det_int(rows: &[Vec<i64>]) -> Result<i128> {
    let d = det_rational(&to_rational_matrix(rows));
    d.to_integer()
        .to_i128()
        .ok_or(Error::Overflow("determinant"))
}

/// Returns `(adj, det)` with `adj * m = det * I` for an integer matrix.
pub fn adjugate_int(rows: &[Vec<i64>]) -> Result<(Vec<Vec<i128>>, i128)> {
    let m = to_rational_matrix(rows);
    let det = det_rational(&m);
    if det.is_zero() {
        return Err(Error::InvalidArgument("singular matrix".into()));
    }
    let inv = inverse_rational(&m).expect("nonzero determinant");
    let adj = inv
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let v = x * &det;
                    debug_assert!(v.is_integer());
                    v.to_integer().to_i128().ok_or(Error::Overflow("adjugate"))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let det = det
        .to_integer()
        .to_i128()
        .ok_or(Error::Overflow("determinant"))?;
    Ok((adj, det))
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Diagonal of a lower-triangular column Hermite form of the matrix whose
/// columns are `cols`. The product of the entries is `|det|`, and
/// `{x : 0 <= x_i < diag_i}` is a system of coset representatives of
/// `Z^n / span_Z(cols)`.
pub fn hermite_diagonal(cols: &[Vec<i64>]) -> Result<Vec<i128>> {
    let n = cols.len();
    // m[row][col]
    let mut m: Vec<Vec<i128>> = (0..n)
        .map(|r| (0..n).map(|c| cols[c][r] as i128).collect())
        .collect();
    let overflow = || Error::Overflow("Hermite normal form");
    for i in 0..n {
        for j in i + 1..n {
            if m[i][j] == 0 {
                continue;
            }
            let (a, b) = (m[i][i], m[i][j]);
            let (g, x, y) = ext_gcd(a, b);
            let (ag, bg) = (a / g, b / g);
            for row in m.iter_mut() {
                let ci = row[i];
                let cj = row[j];
                let new_i = x
                    .checked_mul(ci)
                    .and_then(|p| y.checked_mul(cj).and_then(|q| p.checked_add(q)))
                    .ok_or_else(overflow)?;
                let new_j = ag
                    .checked_mul(cj)
                    .and_then(|p| bg.checked_mul(ci).and_then(|q| p.checked_sub(q)))
                    .ok_or_else(overflow)?;
                row[i] = new_i;
                row[j] = new_j;
            }
        }
        if m[i][i] == 0 {
            return Err(Error::InvalidArgument("singular matrix".into()));
        }
        if m[i][i] < 0 {
            for row in m.iter_mut() {
                row[i] = -row[i];
            }
        }
    }
    Ok((0..n).map(|i| m[i][i]).collect())
}

/// A basis of the rational kernel `{x : <a, x> = 0}` of a single nonzero
/// covector, as integer vectors.
pub fn kernel_basis(a: &[BigRational]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let Some(p) = (0..n).max_by(|&i, &j| a[i].abs().cmp(&a[j].abs())) else {
        return Vec::new();
    };
    if a[p].is_zero() {
        return Vec::new();
    }
    (0..n)
        .filter(|&k| k != p)
        .map(|k| {
            let mut v = vec![BigRational::zero(); n];
            v[k] = BigRational::one();
            v[p] = -(&a[k] / &a[p]);
            v
        })
        .collect()
}
