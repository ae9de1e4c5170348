mod common;

use common::{cfg, max_abs_diff, rng};
use num_complex::Complex64;
use opdef::criteria;
use opdef::linalg::{self, identity, op_norm, psd_check};
use opdef::sampling;
use opdef::CMatrix;
use proptest::prelude::*;

fn gram_psd(m: &CMatrix) -> bool {
    psd_check(m, &cfg()).unwrap().is_psd()
}

fn blocks2(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    linalg::block_assemble(&[vec![a.clone(), b.clone()], vec![b.adjoint(), c.clone()]]).unwrap()
}

proptest! {
    #[test]
    fn gamma_matches_oracle(seed: u64, d in 1usize..=3, scale in 0.0f64..2.0) {
        let mut r = rng(seed);
        let a = sampling::psd(&mut r, d, d);
        let c = sampling::psd(&mut r, d, d);
        let b = sampling::gaussian(&mut r, d, d) * Complex64::new(scale, 0.0);
        let g = criteria::gamma_factor(&a, &b, &c, &cfg()).unwrap();
        prop_assert_eq!(g.positive, gram_psd(&blocks2(&a, &b, &c)));
    }

    #[test]
    fn z2_is_pm(seed: u64, d in 1usize..=3, scale in 0.0f64..2.0) {
        let mut r = rng(seed);
        let t0 = sampling::psd(&mut r, d, d);
        let t1 = sampling::hermitian(&mut r, d) * Complex64::new(scale, 0.0);
        let z = criteria::z2_criterion(&t0, &t1, &cfg(), false).unwrap();
        let pm = criteria::pm_criterion(&t0, &t1, &cfg()).unwrap();
        prop_assert_eq!(z.positive, pm.holds);
        // +-T1 <= T0 directly
        let plus = gram_psd(&(&t0 - &t1));
        let minus = gram_psd(&(&t0 + &t1));
        prop_assert_eq!(pm.holds, plus && minus);
    }

    #[test]
    fn klein_matches_oracle(seed: u64, d in 1usize..=3, scale in 0.0f64..0.8) {
        let mut r = rng(seed);
        let ts: Vec<CMatrix> = (0..3).map(|_| sampling::hermitian(&mut r, d) * Complex64::new(scale, 0.0)).collect();
        let k = criteria::klein_criterion(&ts[0], &ts[1], &ts[2], &cfg()).unwrap();
        let gram = criteria::klein_gram(&ts[0], &ts[1], &ts[2]).unwrap();
        prop_assert_eq!(k.positive, gram_psd(&gram));
    }

    #[test]
    fn half_power_identity(seed: u64, d in 1usize..=4, norm in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let t = sampling::with_norm(&mut r, d, norm);
        let h = criteria::half_power(&t, &cfg()).unwrap();
        prop_assert!(max_abs_diff(&((&h.b * &h.d_b) * Complex64::new(2.0, 0.0)), &t) < 1e-8);
        prop_assert!(op_norm(&h.b) <= 1.0 + 1e-9);
    }

    #[test]
    fn truncation_is_monotone(seed: u64, d in 1usize..=3, norm in 0.5f64..1.5) {
        let mut r = rng(seed);
        let p = sampling::with_norm(&mut r, d, norm);
        let verdicts: Vec<bool> = (1..=5).map(|n| criteria::z_truncation(&p, n, &cfg()).unwrap().psd.is_psd()).collect();
        for w in verdicts.windows(2) {
            prop_assert!(w[0] || !w[1], "positive at a higher level after failing lower: {verdicts:?}");
        }
        prop_assert_eq!(verdicts[0], norm <= 1.0);
    }

    #[test]
    fn doubly_commuting_pairs_pass_brehmer(seed: u64) {
        let mut r = rng(seed);
        let (t1, t2) = sampling::doubly_commuting_pair(&mut r, 6);
        let dc = criteria::doubly_commuting_check(&t1, &t2, &cfg()).unwrap();
        prop_assert!(dc.doubly_commuting);
        let b = criteria::brehmer_check(&t1, &t2, &cfg(), seed).unwrap();
        prop_assert!(b.passes);
        prop_assert!(b.quadratic_form_residual < 1e-9);
    }

    #[test]
    fn zz_gram_is_hermitian(seed: u64, n in 1usize..=3) {
        let mut r = rng(seed);
        let (t1, t2) = sampling::doubly_commuting_pair(&mut r, 4);
        let g = criteria::zz_gram(&t1, &t2, n);
        prop_assert!(max_abs_diff(&g, &g.adjoint()) < 1e-12);
        let d = t1.nrows();
        prop_assert_eq!(g.nrows(), (n + 1) * (n + 1) * d);
        prop_assert!(max_abs_diff(&criteria::zz_value(&t1, &t2, 0, 0), &identity(d)) == 0.0);
    }
}

#[test]
fn closed_form_determinant_is_negative() {
    for n in 3..=12 {
        let det = criteria::counterexample_det(n).unwrap();
        assert!(det < 0.0);
        assert!((det - criteria::counterexample_numeric_det(n as u32)).abs() < 1e-6);
    }
    assert!(criteria::counterexample_det(2).is_err());
}
