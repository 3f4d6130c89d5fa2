//! Verdicts on bipartite operators: PSD/PPT, the `(p, q)` type, rank-bound
//! admissibility, and range-criterion checks.

pub mod certificate;
pub mod search;

use crate::error::{Error, Result};
use crate::linalg::{
    self, kernel_basis, numerical_rank, partial_transpose, range_basis, BipartiteOperator,
    DenseMatrix, C64, DEFAULT_ABS_TOL, DEFAULT_REL_TOL,
};
use crate::states::{self, ChoiParams, EdgeFamilyParams, ProductPair};

/// Where a type `(p, q)` falls relative to the rank bounds for edge states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Admissibility {
    /// `p ≤ max{m,n}` or `q ≤ max{m,n}`: PPT coincides with separability.
    BelowLowerBound,
    /// Compatible with an edge state.
    Admissible,
    /// The range pair is forced to contain a product vector `x⊗y` with
    /// `x̄⊗y` in the partial-transpose range.
    ForcesProductVector,
}

impl Admissibility {
    pub fn as_str(&self) -> &'static str {
        match self {
            Admissibility::BelowLowerBound => "BelowLowerBound",
            Admissibility::Admissible => "Admissible",
            Admissibility::ForcesProductVector => "ForcesProductVector",
        }
    }
}

/// Tolerances a verdict was computed with.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub is_psd: bool,
    pub is_ppt: bool,
    /// `(rank S, rank Sᵀ)`.
    pub kind: (usize, usize),
    pub kernel_dims: (usize, usize),
    pub admissibility: Admissibility,
    pub tolerances: Tolerances,
}

/// Classifies a Hermitian operator by PSD/PPT status and type.
pub fn classify(s: &BipartiteOperator, rel_tol: f64, abs_tol: f64) -> Result<Classification> {
    let tau = partial_transpose(s);
    let is_psd = linalg::is_psd(s.mat(), abs_tol)?;
    let tau_psd = linalg::is_psd(tau.mat(), abs_tol)?;
    let p = numerical_rank(s.mat(), rel_tol);
    let q = numerical_rank(tau.mat(), rel_tol);
    let mn = s.m() * s.n();
    let admissibility = if p == 0 || q == 0 {
        Admissibility::BelowLowerBound
    } else {
        rank_bounds(s.m(), s.n(), p, q)?
    };
    Ok(Classification {
        is_psd,
        is_ppt: is_psd && tau_psd,
        kind: (p, q),
        kernel_dims: (mn - p, mn - q),
        admissibility,
        tolerances: Tolerances { rel_tol, abs_tol },
    })
}

/// `Σ_{r+s=m−1} (−1)^r C(k,r) C(ℓ,s)`.
pub fn alternating_binomial_sum(m: usize, k: usize, l: usize) -> i128 {
    let total = m.saturating_sub(1);
    (0..=total)
        .map(|r| {
            let term = binomial(k, r) as i128 * binomial(l, total - r) as i128;
            if r % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Admissibility of type `(p, q)` for an `m⊗n` edge state.
///
/// Lower bound: `p, q > max{m,n}`. Upper bound: a product vector is forced
/// when `p + q > 2mn − m − n + 2`, or on equality when the alternating
/// binomial sum with `k = mn − p`, `ℓ = mn − q` is nonzero.
pub fn rank_bounds(m: usize, n: usize, p: usize, q: usize) -> Result<Admissibility> {
    let mn = m * n;
    if m == 0 || n == 0 || !(1..=mn).contains(&p) || !(1..=mn).contains(&q) {
        return Err(Error::InvalidParam(format!(
            "type ({p},{q}) is out of range for {m}⊗{n}"
        )));
    }
    if p <= m.max(n) || q <= m.max(n) {
        return Ok(Admissibility::BelowLowerBound);
    }
    let critical = 2 * mn + 2 - m - n;
    let sum = p + q;
    if sum > critical || (sum == critical && alternating_binomial_sum(m, mn - p, mn - q) != 0) {
        Ok(Admissibility::ForcesProductVector)
    } else {
        Ok(Admissibility::Admissible)
    }
}

/// Outcome of [`check_range_criterion`].
#[derive(Clone, Debug, PartialEq)]
pub struct RangeCriterionReport {
    pub holds: bool,
    /// Dimensions of `span{x⊗y}` and `span{x̄⊗y}`.
    pub span_dims: (usize, usize),
    /// Largest relative distance of a pair vector from its target range.
    pub max_residual: f64,
}

/// Residual accepted for range membership in [`check_range_criterion`].
pub const RANGE_RESIDUAL_TOL: f64 = 1e-9;

/// Checks that every `x⊗y` lies in the range of `s`, every `x̄⊗y` in the
/// range of `sᵀ`, and that the two families span those ranges.
pub fn check_range_criterion(s: &BipartiteOperator, pairs: &[ProductPair]) -> RangeCriterionReport {
    let tau = partial_transpose(s);
    let range = range_basis(s.mat(), DEFAULT_REL_TOL);
    let tau_range = range_basis(tau.mat(), DEFAULT_REL_TOL);
    let dim = s.m() * s.n();

    let mut max_residual: f64 = 0.0;
    let mut all_in = true;
    let mut direct = Vec::with_capacity(pairs.len());
    let mut partner = Vec::with_capacity(pairs.len());
    for pair in pairs {
        if pair.x.len() != s.m() || pair.y.len() != s.n() {
            all_in = false;
            continue;
        }
        let (v, w) = (pair.vector(), pair.conjugate_partner());
        if linalg::vec_norm(&v) == 0.0 {
            all_in = false;
            continue;
        }
        let res = range.residual(&v).max(tau_range.residual(&w));
        max_residual = max_residual.max(res);
        all_in &= res <= RANGE_RESIDUAL_TOL;
        direct.push(v);
        partner.push(w);
    }
    let span_dim = |vs: &[Vec<C64>]| -> usize {
        if vs.is_empty() {
            return 0;
        }
        let m = DenseMatrix::from_fn(dim, vs.len(), |r, c| vs[c][r]);
        numerical_rank(&m, DEFAULT_REL_TOL)
    };
    let span_dims = (span_dim(&direct), span_dim(&partner));
    let holds = all_in && span_dims == (range.dim(), tau_range.dim());
    RangeCriterionReport {
        holds,
        span_dims,
        max_residual,
    }
}

/// `‖(1/3b) Σ z zᴴ − A(b, 0)‖_max` for the third-roots-of-unity decomposition.
pub fn reconstruct_separable(b: f64) -> Result<f64> {
    reconstruct_against(b, 0.0)
}

/// Same sum compared against `A(b, θ)`; nonzero whenever `θ ≠ 0`.
pub fn reconstruct_against(b: f64, theta: f64) -> Result<f64> {
    let sum = states::separable_sum(b)?;
    let target = states::edge_state(&EdgeFamilyParams::new(b, theta)?);
    Ok(sum.mat().max_abs_diff(target.mat()))
}

/// Closed PPT region of the Choi matrix of `Φ[a,b,c]`: `a ≥ 2` and `bc ≥ 1`.
pub fn phi_ppt_region(p: &ChoiParams) -> bool {
    p.a() >= 2.0 && p.b() * p.c() >= 1.0
}

/// Kernel of `s` and of its partial transpose, the data both the search and
/// the range checks work from.
pub(crate) fn kernel_pair(s: &BipartiteOperator, rel_tol: f64) -> (linalg::Subspace, linalg::Subspace) {
    let tau = partial_transpose(s);
    (kernel_basis(s.mat(), rel_tol), kernel_basis(tau.mat(), rel_tol))
}
