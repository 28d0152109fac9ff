#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reebcone_core::{dual_cone, Error, ReebVector, ToricCone};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(reebcone_core::scalar::ratio_to_f64).collect()
}

/// Random element of GL(n, Z) with small entries.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = *[-1i64, 1, 2].choose(rng).unwrap();
        for k in 0..n {
            a[i][k] += c * a[j][k];
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut out: Vec<Vec<i64>> = perm.iter().map(|&p| a[p].clone()).collect();
    if rng.gen_bool(0.5) {
        for x in out[0].iter_mut() {
            *x = -*x;
        }
    }
    out
}

pub fn apply(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn apply_q(a: &[Vec<i64>], v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(&x, y)| BigRational::from_integer(BigInt::from(x)) * y)
                .sum()
        })
        .collect()
}

pub fn apply_f(a: &[Vec<i64>], v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(&x, y)| x as f64 * y).sum())
        .collect()
}

pub fn transform(cone: &ToricCone, a: &[Vec<i64>]) -> ToricCone {
    let rays: Vec<Vec<i64>> = cone.rays().iter().map(|v| apply(a, v)).collect();
    dual_cone(&rays, cone.dim()).unwrap()
}

/// Builds a cone from candidate rays, dropping non-extreme ones.
pub fn cone_from_candidates(mut rays: Vec<Vec<i64>>, dim: usize) -> Option<ToricCone> {
    rays.sort();
    rays.dedup();
    loop {
        match dual_cone(&rays, dim) {
            Ok(c) => return Some(c),
            Err(Error::RedundantRay { index }) => {
                rays.remove(index);
            }
            Err(_) => return None,
        }
    }
}

/// Random Q-Gorenstein cone of dimension 2 or 3.
///
/// Dimension 2 cones are always Q-Gorenstein. In dimension 3 the rays are
/// taken at height one over a random lattice polygon.
pub fn random_gorenstein_cone(rng: &mut ChaCha8Rng, dim: usize) -> ToricCone {
    loop {
        let base = match dim {
            2 => {
                let qq = rng.gen_range(1..=5i64);
                let p = rng.gen_range(-3..=5i64);
                if num_integer::gcd(p, qq) != 1 {
                    continue;
                }
                dual_cone(&[vec![1, 0], vec![p, qq]], 2).ok()
            }
            3 => {
                let k = rng.gen_range(3..=6);
                let cands: Vec<Vec<i64>> = (0..k)
                    .map(|_| vec![1, rng.gen_range(-2..=2), rng.gen_range(-2..=2)])
                    .collect();
                cone_from_candidates(cands, 3)
            }
            _ => unreachable!("dimensions 2 and 3 only"),
        };
        if let Some(c) = base {
            let a = random_unimodular(rng, dim);
            return transform(&c, &a);
        }
    }
}

/// Random cone of dimension 2 or 3, not necessarily Q-Gorenstein.
pub fn random_cone(rng: &mut ChaCha8Rng, dim: usize) -> ToricCone {
    if dim == 2 {
        return random_gorenstein_cone(rng, 2);
    }
    loop {
        let k = rng.gen_range(3..=6);
        let cands: Vec<Vec<i64>> = (0..k)
            .map(|_| {
                vec![
                    rng.gen_range(1..=3),
                    rng.gen_range(-2..=2),
                    rng.gen_range(-2..=2),
                ]
            })
            .map(|v| reebcone_core::linalg::primitive_i64(&v))
            .collect();
        if let Some(c) = cone_from_candidates(cands, 3) {
            return c;
        }
    }
}

/// Random rational Reeb vector `Σ c_i v_i` with `c_i ∈ {1/4, ..., 2}`.
pub fn random_reeb(rng: &mut ChaCha8Rng, cone: &ToricCone) -> ReebVector<BigRational> {
    let n = cone.dim();
    let mut xi = vec![q(0, 1); n];
    for v in cone.rays() {
        let c = q(rng.gen_range(1..=8), 4);
        for (x, &vk) in xi.iter_mut().zip(v) {
            *x += &c * BigRational::from_integer(BigInt::from(vk));
        }
    }
    ReebVector::new(cone, xi).unwrap()
}

pub fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| q(rng.gen_range(-6..=6), rng.gen_range(1..=3)))
        .collect()
}
