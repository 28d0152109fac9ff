//! Cones and Reeb vectors shared by the benchmarks.

use num_rational::BigRational;
use reebcone_core::scalar::rvec;
use reebcone_core::{dual_cone, ReebVector, ToricCone};

/// A named cone with a rational Reeb vector in its interior.
pub struct Case {
    pub name: &'static str,
    pub cone: ToricCone,
    pub xi: ReebVector<BigRational>,
    pub eta: Vec<BigRational>,
}

fn case(name: &'static str, rays: &[Vec<i64>], xi: &[(i64, i64)], eta: &[(i64, i64)]) -> Case {
    let cone = dual_cone(rays, rays[0].len()).expect("valid cone");
    let xi = ReebVector::new(&cone, rvec(xi)).expect("interior Reeb vector");
    Case {
        name,
        cone,
        xi,
        eta: rvec(eta),
    }
}

/// Three-dimensional Calabi-Yau cones of increasing size, plus a
/// four-dimensional orthant.
pub fn cases() -> Vec<Case> {
    vec![
        case(
            "conifold",
            &[vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1], vec![1, 0, 1]],
            &[(1, 1), (1, 2), (1, 2)],
            &[(0, 1), (1, 1), (-1, 1)],
        ),
        case(
            "y21",
            &[vec![1, 0, 0], vec![1, 1, 0], vec![1, 2, 2], vec![1, 0, 1]],
            &[(1, 1), (1, 1), (1, 1)],
            &[(0, 1), (1, 1), (1, 1)],
        ),
        case(
            "hexagon",
            &[
                vec![1, 0, 0],
                vec![1, 1, 0],
                vec![1, 2, 1],
                vec![1, 2, 2],
                vec![1, 1, 2],
                vec![1, 0, 1],
            ],
            &[(1, 1), (1, 1), (1, 1)],
            &[(0, 1), (1, 1), (-1, 1)],
        ),
        case(
            "orthant4",
            &[
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
            &[(1, 1), (1, 1), (1, 1), (1, 1)],
            &[(1, 1), (-1, 1), (0, 1), (0, 1)],
        ),
    ]
}
