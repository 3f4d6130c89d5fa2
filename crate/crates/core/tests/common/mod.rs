#![allow(dead_code)]

use edgelab_core::linalg::{c64, cis, outer, tensor_vec, DenseMatrix, C64};
use edgelab_core::{BipartiteOperator, GramSpec};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use std::f64::consts::PI;

pub fn config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn complex() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c64(re, im))
}

pub fn cvec(len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(complex(), len).prop_filter("nonzero", |v| {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3
    })
}

pub fn cmatrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(complex(), rows * cols)
        .prop_map(move |data| DenseMatrix::new(rows, cols, data).unwrap())
}

pub fn hermitian(d: usize) -> impl Strategy<Value = DenseMatrix> {
    cmatrix(d, d).prop_map(|m| &m + &m.adjoint())
}

/// `V diag(w) Vᴴ` with `V` having `rank` random columns and weights in
/// `[0.5, 2]`; random columns are independent with probability one.
pub fn planted(d: usize, rank: usize) -> impl Strategy<Value = (DenseMatrix, usize)> {
    (
        cmatrix(d, rank),
        prop::collection::vec(0.5f64..2.0, rank),
    )
        .prop_map(move |(v, w)| {
            let mut sum = DenseMatrix::zeros(d, d);
            for (j, &wj) in w.iter().enumerate() {
                sum = &sum + &outer(&v.col(j)).scale(c64(wj, 0.0));
            }
            (sum, rank)
        })
}

pub fn planted_any_rank(d: usize) -> impl Strategy<Value = (DenseMatrix, usize)> {
    (1..=d).prop_flat_map(move |r| planted(d, r))
}

pub fn qutrits(m: DenseMatrix) -> BipartiteOperator {
    BipartiteOperator::new(3, 3, m).unwrap()
}

pub fn product_projector(x: &[C64], y: &[C64]) -> DenseMatrix {
    outer(&tensor_vec(x, y))
}

pub fn condition_theta() -> impl Strategy<Value = f64> {
    (0.01f64..(PI / 3.0 - 0.01), any::<bool>()).prop_map(|(t, neg)| if neg { -t } else { t })
}

/// Off-diagonal entry: either exactly unimodular or of modulus at most 0.99.
pub fn face_entry() -> impl Strategy<Value = (C64, bool)> {
    prop_oneof![
        (-PI..PI).prop_map(|phi| (cis(phi), true)),
        (0.0f64..0.99, -PI..PI).prop_map(|(r, phi)| (cis(phi) * r, false)),
    ]
}

/// A valid face specification with the number of unimodular entries known.
pub fn gram_spec() -> impl Strategy<Value = (GramSpec, [bool; 3])> {
    (condition_theta(), face_entry(), face_entry(), face_entry())
        .prop_map(|(theta, (r, ur), (s, us), (t, ut))| (GramSpec::new(r, s, t, theta), [ur, us, ut]))
        .prop_filter("Gram PSD with margin", |(g, _)| {
            let det = gram_det(g);
            det > 1e-6 && g.validate().is_ok()
        })
}

/// `det P[ρ,σ,τ] = ω³ − ω(|ρ|²+|σ|²+|τ|²) + 2 Re(ρστ)` with `ω = 2cos θ`.
pub fn gram_det(g: &GramSpec) -> f64 {
    let w = 2.0 * g.theta.cos();
    let norms = g.xi_eta.norm_sqr() + g.eta_zeta.norm_sqr() + g.zeta_xi.norm_sqr();
    w * w * w - w * norms + 2.0 * (g.xi_eta * g.eta_zeta * g.zeta_xi).re
}
