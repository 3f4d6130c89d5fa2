mod common;

use common::*;
use edgelab_core::classify::{
    alternating_binomial_sum, check_range_criterion, classify, phi_ppt_region, rank_bounds,
    reconstruct_against, reconstruct_separable, Admissibility,
};
use edgelab_core::{product_vector_search, SearchConfig, SearchVerdict};
use edgelab_core::linalg::{
    c64, cis, kernel_basis, partial_transpose, range_basis, tensor_vec, DenseMatrix, C64,
    DEFAULT_ABS_TOL, DEFAULT_REL_TOL,
};
use edgelab_core::states::{
    choi_matrix, edge_state, separable_decomposition_vectors, state_7_6, ChoiParams,
    EdgeFamilyParams,
};
use edgelab_core::verify_edge_analytic;
use edgelab_core::EdgeVerdict;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Coefficients of `(1 − t)^k (1 + t)^ℓ`, lowest degree first.
fn poly_coefficients(k: usize, l: usize) -> Vec<i128> {
    let mut poly = vec![1i128];
    let mut times = |factor: [i128; 2]| {
        let mut next = vec![0i128; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i] += c * factor[0];
            next[i + 1] += c * factor[1];
        }
        poly = next;
    };
    for _ in 0..k {
        times([1, -1]);
    }
    for _ in 0..l {
        times([1, 1]);
    }
    poly
}

fn brute_force_bounds(m: usize, n: usize, p: usize, q: usize) -> Admissibility {
    if p <= m.max(n) || q <= m.max(n) {
        return Admissibility::BelowLowerBound;
    }
    let critical = 2 * m * n + 2 - m - n;
    let coeff = poly_coefficients(m * n - p, m * n - q)
        .get(m - 1)
        .copied()
        .unwrap_or(0);
    if p + q > critical || (p + q == critical && coeff != 0) {
        Admissibility::ForcesProductVector
    } else {
        Admissibility::Admissible
    }
}

#[test]
fn rank_bounds_match_polynomial_oracle() {
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        let mn = m * n;
        for p in 1..=mn {
            for q in 1..=mn {
                assert_eq!(
                    rank_bounds(m, n, p, q).unwrap(),
                    brute_force_bounds(m, n, p, q),
                    "({m},{n},{p},{q})"
                );
                let coeff = poly_coefficients(mn - p, mn - q).get(m - 1).copied().unwrap_or(0);
                assert_eq!(alternating_binomial_sum(m, mn - p, mn - q), coeff);
            }
        }
    }
    assert_eq!(rank_bounds(3, 3, 8, 6).unwrap(), Admissibility::Admissible);
    assert_eq!(rank_bounds(3, 3, 7, 7).unwrap(), Admissibility::ForcesProductVector);
}

#[test]
fn printed_kernel_vectors_lie_in_computed_kernels() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let b = rng.random_range(0.1..10.0);
        let theta = rng.random_range(-PI / 3.0..PI / 3.0);
        let s = edge_state(&EdgeFamilyParams::new(b, theta).unwrap());
        let ker = kernel_basis(s.mat(), DEFAULT_REL_TOL);
        let ker_tau = kernel_basis(partial_transpose(&s).mat(), DEFAULT_REL_TOL);
        let (o, z, e, bb) = (c64(1.0, 0.0), c64(0.0, 0.0), cis(theta), c64(b, 0.0));
        assert!(ker.residual(&[o, z, z, z, o, z, z, z, o]) <= 1e-10);
        for v in [
            [z, bb, z, e, z, z, z, z, z],
            [z, z, z, z, z, bb, z, e, z],
            [z, z, e, z, z, z, bb, z, z],
        ] {
            assert!(ker_tau.residual(&v) <= 1e-10);
        }
    }
}

#[test]
fn separable_point_reconstructs_and_satisfies_range_criterion() {
    for b in [1.0 / 3.0, 0.5, 1.0, 2.0, 3.0] {
        assert!(reconstruct_separable(b).unwrap() <= 1e-12);
        assert!(reconstruct_against(b, 0.2).unwrap() > 0.1);
        let s = edge_state(&EdgeFamilyParams::new(b, 0.0).unwrap());
        let report = check_range_criterion(&s, &separable_decomposition_vectors(b).unwrap());
        assert!(report.holds);
        assert_eq!(report.span_dims, (8, 6));
        let found = product_vector_search(&s, &SearchConfig { starts: 40, ..Default::default() });
        assert_eq!(found.verdict, SearchVerdict::ProductVectorFound);
    }
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()
}

#[test]
fn choi_ppt_region_on_grid() {
    let grid = linspace(0.0, 4.0, 20);
    let mut checked = 0;
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                if (a - 2.0).abs() < 1e-6 || (b * c - 1.0).abs() < 1e-6 {
                    continue;
                }
                let p = ChoiParams::new(a, b, c).unwrap();
                let cls = classify(&choi_matrix(&p), DEFAULT_REL_TOL, DEFAULT_ABS_TOL).unwrap();
                assert_eq!(cls.is_ppt, a >= 2.0 && b * c >= 1.0, "a={a} b={b} c={c}");
                assert_eq!(cls.is_ppt, phi_ppt_region(&p));
                checked += 1;
            }
        }
    }
    assert!(checked > 7000);
}

fn random_unit(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..len)
        .map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

#[test]
fn search_finds_products_in_random_separable_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let cfg = SearchConfig { starts: 60, ..Default::default() };
    for _ in 0..20 {
        let terms = rng.random_range(1..=4);
        let mut m = DenseMatrix::zeros(9, 9);
        for _ in 0..terms {
            let (x, y) = (random_unit(&mut rng, 3), random_unit(&mut rng, 3));
            let w = rng.random_range(0.2..2.0);
            m = &m + &product_projector(&x, &y).scale(c64(w, 0.0));
        }
        let s = qutrits(m);
        let result = product_vector_search(&s, &cfg);
        assert_eq!(result.verdict, SearchVerdict::ProductVectorFound, "{terms} terms");
        assert!(result.best_objective <= 1e-9);
    }
}

/// The reported objective must equal the squared range residuals measured
/// independently, so a found vector really lies in both ranges.
#[test]
fn search_reports_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let cfg = SearchConfig { starts: 30, ..Default::default() };
    let mut states = vec![
        state_7_6(1.0).unwrap(),
        state_7_6(2.0).unwrap(),
        edge_state(&EdgeFamilyParams::new(1.0, 0.0).unwrap()),
        edge_state(&EdgeFamilyParams::new(1.5, 0.4).unwrap()),
    ];
    for _ in 0..6 {
        let (x, y) = (random_unit(&mut rng, 3), random_unit(&mut rng, 3));
        let (u, v) = (random_unit(&mut rng, 3), random_unit(&mut rng, 3));
        states.push(qutrits(&product_projector(&x, &y) + &product_projector(&u, &v)));
    }
    for s in &states {
        let r = product_vector_search(s, &cfg);
        let range = range_basis(s.mat(), DEFAULT_REL_TOL);
        let tau_range = range_basis(partial_transpose(s).mat(), DEFAULT_REL_TOL);
        let xbar: Vec<C64> = r.best_x.iter().map(|z| z.conj()).collect();
        let a = range.residual(&tensor_vec(&r.best_x, &r.best_y));
        let b = tau_range.residual(&tensor_vec(&xbar, &r.best_y));
        assert!((a * a + b * b - r.best_objective).abs() < 1e-10);
        if r.verdict == SearchVerdict::ProductVectorFound {
            assert!(a.max(b) < 1e-4);
        }
    }
}

#[test]
fn analytic_and_numeric_verdicts_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let cfg = SearchConfig { starts: 40, ..Default::default() };
    for _ in 0..25 {
        let b = rng.random_range(0.1..10.0);
        let theta: f64 = rng.random_range(-PI / 3.0..PI / 3.0);
        let p = EdgeFamilyParams::new(b, theta).unwrap();
        let analytic = verify_edge_analytic(&p).unwrap();
        let numeric = product_vector_search(&edge_state(&p), &cfg);
        assert_eq!(analytic.verdict, EdgeVerdict::EdgeCertified);
        assert_eq!(numeric.verdict, SearchVerdict::NoneFoundAboveThreshold, "b={b} θ={theta}");
    }
}

#[test]
fn state_7_6_has_a_product_vector_only_at_b_one() {
    let cfg = SearchConfig { starts: 60, ..Default::default() };
    let at_one = product_vector_search(&state_7_6(1.0).unwrap(), &cfg);
    assert_eq!(at_one.verdict, SearchVerdict::ProductVectorFound);
    let at_two = product_vector_search(&state_7_6(2.0).unwrap(), &cfg);
    assert_eq!(at_two.verdict, SearchVerdict::NoneFoundAboveThreshold);
}
