//! Multistart search for product vectors `x⊗y ∈ R(S)` with `x̄⊗y ∈ R(Sᵀ)`.
//!
//! Since `S` and `Sᵀ` are Hermitian, range membership is the same as
//! orthogonality to the kernels, so the search minimises
//!
//! ```text
//! f(x, y) = ‖Π_{ker S}(x⊗y)‖² + ‖Π_{ker Sᵀ}(x̄⊗y)‖²
//! ```
//!
//! over unit `x ∈ C^m`, `y ∈ C^n`. Each half-step is an exact eigenproblem:
//! for fixed `x`, `f` is a Hermitian form in `y`; for fixed `y`, the second
//! term is a form in `x̄`, so `f` is handled as a real quadratic form in
//! `(Re x, Im x)` and minimised by the smallest eigenvector of a `2m×2m` real
//! symmetric matrix.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::kernel_pair;
use crate::linalg::{
    self, c64, hermitian_eig, projector, BipartiteOperator, DenseMatrix, Subspace, C64,
    DEFAULT_REL_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub starts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Stop a start once the objective decreases by less than this.
    pub convergence_tol: f64,
    /// `ProductVectorFound` iff the best objective is at most this.
    pub found_threshold: f64,
    /// Objective floor an edge verdict is expected to clear.
    pub edge_floor: f64,
    pub rel_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            starts: 200,
            max_iters: 500,
            seed: 0,
            convergence_tol: 1e-14,
            found_threshold: 1e-9,
            edge_floor: 1e-6,
            rel_tol: DEFAULT_REL_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchVerdict {
    ProductVectorFound,
    NoneFoundAboveThreshold,
}

impl SearchVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchVerdict::ProductVectorFound => "ProductVectorFound",
            SearchVerdict::NoneFoundAboveThreshold => "NoneFoundAboveThreshold",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSearchResult {
    pub best_objective: f64,
    pub best_x: Vec<C64>,
    pub best_y: Vec<C64>,
    pub starts: usize,
    pub per_start_objectives: Vec<f64>,
    pub verdict: SearchVerdict,
    pub edge_floor: f64,
}

impl EdgeSearchResult {
    /// True when no start came within the configured edge floor.
    pub fn clears_edge_floor(&self) -> bool {
        self.best_objective >= self.edge_floor
    }
}

/// The objective together with the kernel data it is built from.
pub struct SearchObjective {
    m: usize,
    n: usize,
    kernel: Subspace,
    tau_kernel: Subspace,
    proj: DenseMatrix,
    tau_proj: DenseMatrix,
}

impl SearchObjective {
    pub fn new(s: &BipartiteOperator, rel_tol: f64) -> Self {
        let (kernel, tau_kernel) = kernel_pair(s, rel_tol);
        Self {
            m: s.m(),
            n: s.n(),
            proj: projector(&kernel),
            tau_proj: projector(&tau_kernel),
            kernel,
            tau_kernel,
        }
    }

    /// `f(x, y)`, computed from kernel coordinates so it is never negative.
    pub fn value(&self, x: &[C64], y: &[C64]) -> f64 {
        let xbar: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        let a = self.kernel.coordinates(&linalg::tensor_vec(x, y));
        let b = self.tau_kernel.coordinates(&linalg::tensor_vec(&xbar, y));
        a.iter().chain(&b).map(|z| z.norm_sqr()).sum()
    }

    /// `n×n` Hermitian `H` with `f(x, y) = yᴴ H y` for fixed `x`.
    pub fn y_form(&self, x: &[C64]) -> DenseMatrix {
        let n = self.n;
        DenseMatrix::from_fn(n, n, |k, l| {
            let mut acc = c64(0.0, 0.0);
            for i in 0..self.m {
                for j in 0..self.m {
                    let (r, c) = (i * n + k, j * n + l);
                    acc += x[i].conj() * x[j] * self.proj[(r, c)] + x[i] * x[j].conj() * self.tau_proj[(r, c)];
                }
            }
            acc
        })
    }

    /// `2m×2m` real symmetric `S` with `f(x, y) = [u; v]ᵀ S [u; v]` for fixed
    /// `y`, where `x = u + iv`.
    pub fn x_form(&self, y: &[C64]) -> DMatrix<f64> {
        let (m, n) = (self.m, self.n);
        // f = xᴴ M1 x + xᵀ M2 x̄ with M_ij = Σ_kl ȳ_k Π_(ik),(jl) y_l.
        let reduce = |p: &DenseMatrix| {
            DenseMatrix::from_fn(m, m, |i, j| {
                let mut acc = c64(0.0, 0.0);
                for k in 0..n {
                    for l in 0..n {
                        acc += y[k].conj() * p[(i * n + k, j * n + l)] * y[l];
                    }
                }
                acc
            })
        };
        let m1 = reduce(&self.proj);
        let m2 = reduce(&self.tau_proj);
        // xᴴ H x = [u;v]ᵀ [[Re H, −Im H], [Im H, Re H]] [u;v]; the x̄ term uses
        // [u; −v], i.e. the same block matrix conjugated by diag(I, −I).
        DMatrix::from_fn(2 * m, 2 * m, |r, c| {
            let (ri, rb) = (r % m, r / m);
            let (ci, cb) = (c % m, c / m);
            let (a, b) = (m1[(ri, ci)], m2[(ri, ci)]);
            let block = |h: C64| match (rb, cb) {
                (0, 0) | (1, 1) => h.re,
                (0, 1) => -h.im,
                _ => h.im,
            };
            let sign = if rb == cb { 1.0 } else { -1.0 };
            block(a) + sign * block(b)
        })
    }
}

fn smallest_eigvec_complex(h: &DenseMatrix) -> Vec<C64> {
    let eig = hermitian_eig(h).expect("objective forms are Hermitian by construction");
    eig.vectors.col(0)
}

fn smallest_eigvec_real(s: DMatrix<f64>) -> Vec<f64> {
    let s = (&s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(s);
    let k = eig.eigenvalues.imin();
    eig.eigenvectors.column(k).iter().copied().collect()
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| c64(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        if let Some(u) = linalg::normalized(&v) {
            return u;
        }
    }
}

/// Strips the global phase so that the largest-modulus entry is real positive.
fn canonical_phase(v: &mut [C64]) {
    if let Some(pivot) = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            v.iter_mut().for_each(|z| *z *= phase);
        }
    }
}

struct StartOutcome {
    objective: f64,
    x: Vec<C64>,
    y: Vec<C64>,
}

fn run_start(obj: &SearchObjective, cfg: &SearchConfig, index: usize) -> StartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut x = random_unit(&mut rng, obj.m);
    let mut y = random_unit(&mut rng, obj.n);
    let mut f = obj.value(&x, &y);
    for _ in 0..cfg.max_iters {
        if f == 0.0 {
            break;
        }
        y = smallest_eigvec_complex(&obj.y_form(&x));
        let uv = smallest_eigvec_real(obj.x_form(&y));
        x = (0..obj.m).map(|i| c64(uv[i], uv[obj.m + i])).collect();
        x = linalg::normalized(&x).unwrap_or(x);
        let next = obj.value(&x, &y);
        let decrease = f - next;
        f = next;
        if decrease < cfg.convergence_tol {
            break;
        }
    }
    canonical_phase(&mut x);
    canonical_phase(&mut y);
    StartOutcome { objective: f, x, y }
}

/// Runs `cfg.starts` independent alternating minimisations. Start `i` draws
/// its initial point from the ChaCha stream `(seed, i)`, so the result does
/// not depend on how starts are scheduled across threads.
pub fn product_vector_search(s: &BipartiteOperator, cfg: &SearchConfig) -> EdgeSearchResult {
    let obj = SearchObjective::new(s, cfg.rel_tol);
    let starts = cfg.starts.max(1);
    let outcomes: Vec<StartOutcome> = (0..starts)
        .into_par_iter()
        .map(|i| run_start(&obj, cfg, i))
        .collect();
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.objective.total_cmp(&b.objective).then(ia.cmp(ib)))
        .map(|(i, _)| i)
        .expect("at least one start");
    let verdict = if outcomes[best].objective <= cfg.found_threshold {
        SearchVerdict::ProductVectorFound
    } else {
        SearchVerdict::NoneFoundAboveThreshold
    };
    EdgeSearchResult {
        best_objective: outcomes[best].objective,
        best_x: outcomes[best].x.clone(),
        best_y: outcomes[best].y.clone(),
        starts,
        per_start_objectives: outcomes.iter().map(|o| o.objective).collect(),
        verdict,
        edge_floor: cfg.edge_floor,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{outer, partial_transpose, tensor_vec};
    use crate::states::{edge_state, EdgeFamilyParams};
    use std::f64::consts::PI;

    fn quick(starts: usize) -> SearchConfig {
        SearchConfig {
            starts,
            ..SearchConfig::default()
        }
    }

    fn real_form(s: &DMatrix<f64>, x: &[C64]) -> f64 {
        let m = x.len();
        let w: Vec<f64> = (0..2 * m).map(|r| if r < m { x[r].re } else { x[r - m].im }).collect();
        let mut acc = 0.0;
        for r in 0..2 * m {
            for c in 0..2 * m {
                acc += w[r] * s[(r, c)] * w[c];
            }
        }
        acc
    }

    #[test]
    fn quadratic_forms_reproduce_objective() {
        let a = edge_state(&EdgeFamilyParams::new(1.3, 0.4).unwrap());
        let obj = SearchObjective::new(&a, DEFAULT_REL_TOL);
        let x = vec![c64(0.3, -0.2), c64(0.5, 0.1), c64(-0.4, 0.6)];
        let y = vec![c64(0.1, 0.7), c64(-0.2, 0.0), c64(0.5, 0.4)];
        let (x, y) = (linalg::normalized(&x).unwrap(), linalg::normalized(&y).unwrap());
        let f = obj.value(&x, &y);
        let hy = obj.y_form(&x);
        let fy: C64 = (0..3).flat_map(|k| (0..3).map(move |l| (k, l))).map(|(k, l)| y[k].conj() * hy[(k, l)] * y[l]).sum();
        assert!((fy.re - f).abs() < 1e-13 && fy.im.abs() < 1e-13);
        assert!((real_form(&obj.x_form(&y), &x) - f).abs() < 1e-13);
    }

    #[test]
    fn product_state_is_found_at_its_vector() {
        let x = vec![c64(0.6, 0.0), c64(0.0, 0.8)];
        let y = vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 1.0)];
        let (x, y) = (linalg::normalized(&x).unwrap(), linalg::normalized(&y).unwrap());
        let s = BipartiteOperator::new(2, 3, outer(&tensor_vec(&x, &y))).unwrap();
        let obj = SearchObjective::new(&s, DEFAULT_REL_TOL);
        assert!(obj.value(&x, &y) < 1e-28);
        let r = product_vector_search(&s, &quick(20));
        assert_eq!(r.verdict, SearchVerdict::ProductVectorFound);
        assert!(r.best_objective <= 1e-10);
    }

    #[test]
    fn full_rank_state_is_trivially_found() {
        let s = BipartiteOperator::new(3, 3, DenseMatrix::identity(9)).unwrap();
        let r = product_vector_search(&s, &quick(3));
        assert_eq!(r.best_objective, 0.0);
        assert_eq!(r.verdict, SearchVerdict::ProductVectorFound);
    }

    #[test]
    fn separable_point_of_family_is_found() {
        let a = edge_state(&EdgeFamilyParams::new(1.0, 0.0).unwrap());
        let r = product_vector_search(&a, &quick(50));
        assert_eq!(r.verdict, SearchVerdict::ProductVectorFound, "best {}", r.best_objective);
        // The returned pair is in both ranges, checked without the optimiser.
        let tau = partial_transpose(&a);
        let v = tensor_vec(&r.best_x, &r.best_y);
        let xbar: Vec<C64> = r.best_x.iter().map(|z| z.conj()).collect();
        let w = tensor_vec(&xbar, &r.best_y);
        assert!(linalg::range_basis(a.mat(), DEFAULT_REL_TOL).residual(&v) <= 1e-8);
        assert!(linalg::range_basis(tau.mat(), DEFAULT_REL_TOL).residual(&w) <= 1e-8);
    }

    #[test]
    fn edge_state_has_no_product_vector() {
        let a = edge_state(&EdgeFamilyParams::new(1.0, PI / 6.0).unwrap());
        let r = product_vector_search(&a, &quick(50));
        assert_eq!(r.verdict, SearchVerdict::NoneFoundAboveThreshold);
        assert!(r.clears_edge_floor(), "best {}", r.best_objective);
    }

    #[test]
    fn search_is_deterministic_and_consistent() {
        let a = edge_state(&EdgeFamilyParams::new(0.7, -0.5).unwrap());
        let cfg = SearchConfig { seed: 42, ..quick(16) };
        let r1 = product_vector_search(&a, &cfg);
        let r2 = product_vector_search(&a, &cfg);
        assert_eq!(r1, r2);
        let min = r1.per_start_objectives.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(r1.best_objective, min);
        assert!((linalg::vec_norm(&r1.best_x) - 1.0).abs() < 1e-12);
        assert!((linalg::vec_norm(&r1.best_y) - 1.0).abs() < 1e-12);
        assert_eq!(r1.per_start_objectives.len(), 16);
    }
}
