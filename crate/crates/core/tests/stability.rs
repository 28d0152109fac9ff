mod common;

use common::*;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use reebcone_core::geometry::{dual_cone, gorenstein_vector};
use reebcone_core::scalar::{dot_int, ratio_to_f64};
use reebcone_core::stability::{definitional_ratio, ratio_profile, Monotonicity};
use reebcone_core::{
    decompose_dual, delta, futaki_product, s_m_oracle, s_value, CharacterOptions, ReebVector,
    ToricValuation,
};

fn eta_tangent(l: &[BigRational], raw: &[BigRational], xi: &[BigRational]) -> Vec<BigRational> {
    // remove the component along ξ so that <η, l> = 0
    let c = reebcone_core::scalar::dot(raw, l) / reebcone_core::scalar::dot(xi, l);
    raw.iter().zip(xi).map(|(a, b)| a - &c * b).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn delta_at_most_one_with_equality_iff_barycenter_is_l(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let c = random_gorenstein_cone(&mut r, n);
        let xi = random_reeb(&mut r, &c);
        let rep = delta(&c, &xi).unwrap();
        prop_assert!(rep.delta <= BigRational::one());
        prop_assert_eq!(rep.delta.is_one(), rep.residual.is_zero());
        prop_assert_eq!(rep.kss, rep.delta.is_one());
        prop_assert_eq!(&rep.delta_definitional, &rep.delta);
        // invariant under rescaling ξ
        let rep2 = delta(&c, &xi.scaled(&q(7, 3))).unwrap();
        prop_assert_eq!(rep2.delta, rep.delta);
    }

    #[test]
    fn rays_minimize_the_definitional_ratio(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let c = random_gorenstein_cone(&mut r, n);
        let xi = random_reeb(&mut r, &c);
        let rep = delta(&c, &xi).unwrap();
        // any boundary combination of rays does no better than the best ray
        let v: Vec<BigRational> = {
            let (a, b) = (&c.rays()[0], &c.rays()[c.rays().len() - 1]);
            a.iter().zip(b).map(|(x, y)| q(2 * x + 3 * y, 1)).collect()
        };
        let val = ToricValuation::new(&c, v).unwrap();
        prop_assert!(definitional_ratio(&c, &xi, &val).unwrap() >= rep.delta);
    }

    #[test]
    fn futaki_translation_and_scale_invariant(seed in any::<u64>(), n in 2usize..=3, k in 1i64..6) {
        let mut r = rng(seed);
        let c = random_gorenstein_cone(&mut r, n);
        let pieces = decompose_dual(&c, 1_000_000).unwrap();
        let xi = random_reeb(&mut r, &c);
        let eta = random_direction(&mut r, n);
        let opts = CharacterOptions::default();
        let f = futaki_product(&pieces, &xi, &eta, opts).unwrap().fut;
        let shifted: Vec<BigRational> = eta.iter().zip(xi.xi()).map(|(a, b)| a + q(k, 2) * b).collect();
        prop_assert_eq!(&futaki_product(&pieces, &xi, &shifted, opts).unwrap().fut, &f);
        let scaled = xi.scaled(&q(k, 3));
        prop_assert_eq!(&futaki_product(&pieces, &scaled, &eta, opts).unwrap().fut, &f);
    }

    #[test]
    fn futaki_invariant_under_unimodular_maps(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let c = random_gorenstein_cone(&mut r, n);
        let xi = random_reeb(&mut r, &c);
        let eta = random_direction(&mut r, n);
        let a = random_unimodular(&mut r, n);
        let c2 = transform(&c, &a);
        let xi2 = ReebVector::new(&c2, apply_q(&a, xi.xi())).unwrap();
        let opts = CharacterOptions::default();
        let f1 = futaki_product(&decompose_dual(&c, 1_000_000).unwrap(), &xi, &eta, opts).unwrap();
        let f2 = futaki_product(&decompose_dual(&c2, 1_000_000).unwrap(), &xi2, &apply_q(&a, &eta), opts).unwrap();
        prop_assert_eq!(f1, f2);
        prop_assert_eq!(delta(&c, &xi).unwrap().delta, delta(&c2, &xi2).unwrap().delta);
    }
}

#[test]
fn futaki_sign_matches_volume_derivative() {
    // Fut(ξ, η) is proportional to -D_η a_0 for η tangent to the slice, so it
    // vanishes at the volume minimizer and has the opposite sign elsewhere.
    let c = dual_cone(
        &[vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1], vec![1, 0, 1]],
        3,
    )
    .unwrap();
    let pieces = decompose_dual(&c, 1_000_000).unwrap();
    let l = gorenstein_vector(&c).unwrap().l;
    let opts = CharacterOptions::default();
    let at = |x: [(i64, i64); 3], e: [(i64, i64); 3]| {
        let xi: Vec<BigRational> = x.iter().map(|&(a, b)| q(a, b)).collect();
        let raw: Vec<BigRational> = e.iter().map(|&(a, b)| q(a, b)).collect();
        let eta = eta_tangent(&l, &raw, &xi);
        let xi = ReebVector::new(&c, xi).unwrap();
        futaki_product(&pieces, &xi, &eta, opts).unwrap().fut
    };
    assert!(at([(1, 1), (1, 2), (1, 2)], [(0, 1), (1, 1), (0, 1)]).is_zero());
    assert!(at([(1, 1), (1, 2), (1, 2)], [(0, 1), (1, 1), (-2, 1)]).is_zero());
    let off = at([(1, 1), (1, 3), (1, 2)], [(0, 1), (1, 1), (0, 1)]);
    assert!(off.is_positive() || off.is_negative());
    let opposite = at([(1, 1), (2, 3), (1, 2)], [(0, 1), (1, 1), (0, 1)]);
    assert!(off.clone() * opposite < BigRational::zero());
}

#[test]
fn s_m_converges_at_rate_one_over_m() {
    let c = dual_cone(&[vec![1, 0], vec![1, 2]], 2).unwrap();
    let xi = ReebVector::new(&c, vec![q(1, 1), q(1, 2)]).unwrap();
    let v = vec![q(1, 1), q(2, 1)];
    let s = s_value(&c, &xi, &ToricValuation::new(&c, v.clone()).unwrap())
        .unwrap()
        .s;
    let mut worst = 0.0f64;
    for m in 1..=30 {
        let sm = s_m_oracle(&c, &xi, &v, m).unwrap();
        worst = worst.max(ratio_to_f64(&(sm - &s)).abs() * m as f64);
    }
    assert!(worst < 2.0, "m |S_m - S| reached {worst}");
}

#[test]
fn translated_valuations_shift_s_prime() {
    let c = dual_cone(&[vec![1, 0], vec![1, 2]], 2).unwrap();
    let xi = ReebVector::new(&c, vec![q(1, 1), q(1, 2)]).unwrap();
    let l = gorenstein_vector(&c).unwrap();
    let v = ToricValuation::new(&c, vec![q(1, 1), q(0, 1)]).unwrap();
    let base = s_value(&c, &xi, &v).unwrap().s_prime;
    for t in 1..4 {
        let w = v.translate(&xi, &q(t, 1));
        assert!(w.is_interior());
        assert_eq!(
            s_value(&c, &xi, &w).unwrap().s_prime,
            &base + q(t, 1) * xi.log_discrepancy(&l)
        );
    }
}

#[test]
fn ratio_profile_monotone_toward_one() {
    let c = dual_cone(&[vec![1, 0], vec![1, 2]], 2).unwrap();
    let xi = ReebVector::new(&c, vec![q(1, 1), q(1, 2)]).unwrap();
    let v = ToricValuation::new(&c, vec![q(1, 1), q(0, 1)]).unwrap();
    let ts: Vec<BigRational> = (0..6).map(|k| q(k * k, 1)).collect();
    let p = ratio_profile(&c, &xi, &v, &ts).unwrap();
    // A(ξ) = 1 and <v, ū^P> = 2/3 < A(v) = 1, so f falls from 3/2 toward 1
    assert_eq!(p.monotonicity, Monotonicity::Decreasing);
    assert_eq!(p.values[0].1, q(3, 2));
    for pair in p.values.windows(2) {
        assert!(pair[0].1 > pair[1].1 && pair[1].1 > BigRational::one());
    }
    // S'(w) = 2 > A(w) = 1, so f rises from δ = 1/2 toward 1
    let w = ToricValuation::new(&c, vec![q(1, 1), q(2, 1)]).unwrap();
    let p = ratio_profile(&c, &xi, &w, &ts).unwrap();
    assert_eq!(p.monotonicity, Monotonicity::Increasing);
    assert_eq!(p.values[0].1, q(1, 2));
    for pair in p.values.windows(2) {
        assert!(pair[0].1 < pair[1].1 && pair[1].1 < BigRational::one());
    }
}

#[test]
fn pairings_with_rays_bound_delta() {
    let c = dual_cone(&[vec![1, 0], vec![1, 2]], 2).unwrap();
    let xi = ReebVector::new(&c, vec![q(1, 1), q(1, 2)]).unwrap();
    let rep = delta(&c, &xi).unwrap();
    for v in c.rays() {
        let p: BigRational = dot_int(v, &rep.bary_p);
        assert!(BigRational::one() / p >= rep.delta);
    }
}
