mod common;

use common::*;
use edgelab_core::classify::classify;
use edgelab_core::linalg::{
    c64, gram_realization, hermitian_eig, numerical_rank, partial_transpose, singular_values,
    tensor_vec, BipartiteOperator, DenseMatrix, DEFAULT_ABS_TOL, DEFAULT_REL_TOL,
};
use edgelab_core::states::{
    edge_state, face_state, face_state_for_target, p_rho_sigma_tau, p_theta, EdgeFamilyParams,
    GramSpec,
};
use proptest::prelude::*;
use std::f64::consts::PI;

fn kind(s: &BipartiteOperator) -> (usize, usize) {
    classify(s, DEFAULT_REL_TOL, DEFAULT_ABS_TOL).unwrap().kind
}

proptest! {
    #![proptest_config(config(128, 11))]

    #[test]
    fn partial_transpose_is_an_involution(h in hermitian(9)) {
        let s = qutrits(h);
        let back = partial_transpose(&partial_transpose(&s));
        prop_assert_eq!(back.mat(), s.mat());
    }

    #[test]
    fn partial_transpose_keeps_trace_and_hermiticity(h in hermitian(9)) {
        let s = qutrits(h);
        let t = partial_transpose(&s);
        prop_assert!((t.mat().trace() - s.mat().trace()).norm() < 1e-12);
        prop_assert!(t.mat().hermitian_deviation() < 1e-15);
    }

    #[test]
    fn product_projectors_map_to_conjugate_partners(x in cvec(3), y in cvec(3)) {
        let s = qutrits(product_projector(&x, &y));
        let xbar: Vec<_> = x.iter().map(|z| z.conj()).collect();
        let expected = product_projector(&xbar, &y);
        prop_assert!(partial_transpose(&s).mat().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn rank_is_scale_invariant((h, r) in planted_any_rank(9), log_c in -3.0f64..3.0) {
        let c = 10f64.powf(log_c);
        let scaled = h.scale(c64(c, 0.0));
        prop_assert_eq!(numerical_rank(&h, DEFAULT_REL_TOL), r);
        prop_assert_eq!(numerical_rank(&scaled, DEFAULT_REL_TOL), r);
        prop_assert_eq!(kind(&qutrits(h)), kind(&qutrits(scaled)));
    }

    #[test]
    fn spectral_data_is_consistent((h, r) in planted_any_rank(9)) {
        let eig = hermitian_eig(&h).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let scale = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let positive = eig.values.iter().filter(|&&v| v > DEFAULT_REL_TOL * scale).count();
        prop_assert_eq!(positive, r);

        let lambda = DenseMatrix::diagonal(&eig.values.iter().map(|&v| c64(v, 0.0)).collect::<Vec<_>>());
        let rebuilt = eig.vectors.matmul(&lambda).matmul(&eig.vectors.adjoint());
        prop_assert!(rebuilt.max_abs_diff(&h) < 1e-11 * scale.max(1.0));

        let mut abs: Vec<f64> = eig.values.iter().map(|v| v.abs()).collect();
        abs.sort_by(|a, b| b.total_cmp(a));
        for (s, e) in singular_values(&h).iter().zip(&abs) {
            prop_assert!((s - e).abs() < 1e-11 * scale.max(1.0));
        }
    }

    #[test]
    fn gram_realization_round_trips((g, r) in (1usize..=3).prop_flat_map(|r| planted(3, r))) {
        let v = gram_realization(&g, DEFAULT_REL_TOL).unwrap();
        prop_assert_eq!(v.cols(), r);
        prop_assert!(v.matmul(&v.adjoint()).max_abs_diff(&g) < 1e-12 * g.max_abs().max(1.0));
    }

    #[test]
    fn type_is_symmetric_under_partial_transpose((h, _) in planted_any_rank(9)) {
        let s = qutrits(h);
        let (p, q) = kind(&s);
        prop_assert_eq!(kind(&partial_transpose(&s)), (q, p));
    }

    #[test]
    fn face_rank_formulas((g, unimodular) in gram_spec(), b in 0.1f64..10.0) {
        let x = face_state(b, &g).unwrap();
        let blocks: usize = unimodular.iter().map(|&u| if u { 1 } else { 2 }).sum();
        let gram_rank = numerical_rank(&g.gram(), DEFAULT_REL_TOL);
        prop_assert_eq!(gram_rank, 3);
        prop_assert_eq!(kind(&x), (2 + blocks, 3 + gram_rank));
    }

    #[test]
    fn det_formula_matches_lu(theta in -PI..PI, r in complex(), s in complex(), t in complex()) {
        let g = GramSpec::new(r, s, t, theta);
        let lu = p_rho_sigma_tau(theta, r, s, t).determinant();
        prop_assert!((lu.re - gram_det(&g)).abs() < 1e-12);
        prop_assert!(lu.im.abs() < 1e-12);
    }

    #[test]
    fn p_theta_psd_iff_inside_condition(theta in -PI..PI) {
        prop_assume!(((theta.abs() - PI / 3.0).abs()) > 1e-6);
        let psd = edgelab_core::linalg::is_psd(&p_theta(theta), DEFAULT_ABS_TOL).unwrap();
        prop_assert_eq!(psd, theta.abs() <= PI / 3.0);
        if theta.abs() < PI / 3.0 {
            prop_assert_eq!(numerical_rank(&p_theta(theta), DEFAULT_REL_TOL), 2);
        }
    }
}

proptest! {
    #![proptest_config(config(50, 12))]

    #[test]
    fn edge_family_kernel_dimensions(b in 0.1f64..10.0, theta in condition_theta()) {
        let s = edge_state(&EdgeFamilyParams::new(b, theta).unwrap());
        let c = classify(&s, DEFAULT_REL_TOL, DEFAULT_ABS_TOL).unwrap();
        prop_assert!(c.is_ppt);
        prop_assert_eq!(c.kind, (8, 6));
        prop_assert_eq!(c.kernel_dims, (1, 3));
    }

    #[test]
    fn p5_targets_have_rank_two_grams(b in 0.1f64..10.0, theta in condition_theta(), target in 5u32..=8) {
        // Not every θ admits a root with |r| < 1; those targets are refused.
        if let Ok(x) = face_state_for_target(b, theta, target) {
            let c = classify(&x, DEFAULT_REL_TOL, DEFAULT_ABS_TOL).unwrap();
            prop_assert!(c.is_ppt);
            prop_assert_eq!(c.kind, (target as usize, 5));
        }
    }
}

#[test]
fn rank_one_p_theta_at_the_boundary() {
    for theta in [PI / 3.0, -PI / 3.0] {
        assert_eq!(numerical_rank(&p_theta(theta), DEFAULT_REL_TOL), 1);
    }
}

#[test]
fn product_vector_identity() {
    let x = [c64(1.0, 2.0), c64(0.0, -1.0), c64(0.5, 0.0)];
    let y = [c64(0.0, 1.0), c64(3.0, 0.0), c64(-1.0, 1.0)];
    let v = tensor_vec(&x, &y);
    assert_eq!(v[3 * 2 + 1], x[2] * y[1]);
}
