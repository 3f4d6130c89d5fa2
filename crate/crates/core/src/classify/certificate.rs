//! Analytic edge certificate for the family `A(b, θ)`.
//!
//! A product vector `x⊗y ∈ R(A)` with `x̄⊗y ∈ R(Aᵀ)` must be orthogonal to
//! the kernel vectors of `A` and `Aᵀ`, which gives
//!
//! ```text
//! x1 y1 + x2 y2 + x3 y3 = 0
//! b x̄1 y2 + e^{−iθ} x̄2 y1 = 0
//! b x̄2 y3 + e^{−iθ} x̄3 y2 = 0
//! b x̄3 y1 + e^{−iθ} x̄1 y3 = 0
//! ```
//!
//! Multiplying the last three yields `(b³ + e^{−3iθ}) Πx̄ᵢ Πyᵢ = 0`, so some
//! coordinate vanishes as long as `b³ ≠ −e^{−3iθ}`. The same equations give
//! `xᵢ = 0 ⇔ yᵢ = 0` for a nonzero product, and in each of the three cyclic
//! zero-coordinate cases `|x_a|² y_a = (e^{−iθ}/b)|x_b|² y_a`, which forces
//! `x⊗y = 0` unless `e^{−iθ}/b` is a positive real, i.e. unless `θ ≡ 0`.
//!
//! The trace records each step numerically, including a check that the
//! kernel vectors the equations are read from really span the computed
//! kernels of the constructed matrix.

use crate::error::{Error, Result};
use crate::linalg::{c64, cis, BipartiteOperator, C64, DEFAULT_REL_TOL};
use crate::states::{edge_state, EdgeFamilyParams};

use super::kernel_pair;

/// Residual allowed between the closed-form kernel vectors and the numerical
/// kernels before the certificate is declined.
pub const KERNEL_RESIDUAL_TOL: f64 = 1e-10;
/// `|b³ + e^{−3iθ}|` below this is treated as the degenerate case.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeVerdict {
    EdgeCertified,
    NotApplicable,
}

impl EdgeVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeVerdict::EdgeCertified => "EdgeCertified",
            EdgeVerdict::NotApplicable => "NotApplicable",
        }
    }
}

/// One zero-coordinate case `x_c = y_c = 0`, reducing to the pair `(a, b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCoordinateCase {
    pub vanishing: usize,
    pub pair: (usize, usize),
    /// The coefficient `e^{−iθ}/b` relating `|x_a|²` and `|x_b|²`.
    pub coefficient: C64,
    /// Distance of the coefficient's phase from the positive real axis.
    pub phase_gap: f64,
    pub collapses: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateTrace {
    pub params: EdgeFamilyParams,
    /// Residuals of the closed-form kernel vectors of `A` (one) and `Aᵀ`
    /// (three) against the computed kernels.
    pub kernel_residuals: [f64; 4],
    pub kernel_dims: (usize, usize),
    /// `|b³ + e^{−3iθ}|`; positive means some coordinate product vanishes.
    pub product_identity_gap: f64,
    /// `b > 0` and `e^{−iθ} ≠ 0`, which give `xᵢ = 0 ⇔ yᵢ = 0`.
    pub zero_pattern_step: bool,
    pub cases: Vec<ZeroCoordinateCase>,
    pub verdict: EdgeVerdict,
}

/// Closed-form kernel vectors `(1,0,0;0,1,0;0,0,1)` of `A` and
/// `(0,b,0;e^{iθ},0,0;0,0,0)` and its two cyclic shifts for `Aᵀ`.
pub fn closed_form_kernel_vectors(b: f64, theta: f64) -> ([C64; 9], [[C64; 9]; 3]) {
    let z = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let bb = c64(b, 0.0);
    let e = cis(theta);
    let ker_a = [one, z, z, z, one, z, z, z, one];
    let ker_tau = [
        [z, bb, z, e, z, z, z, z, z],
        [z, z, z, z, z, bb, z, e, z],
        [z, z, e, z, z, z, bb, z, z],
    ];
    (ker_a, ker_tau)
}

fn phase_gap(z: C64) -> f64 {
    z.arg().abs()
}

/// Replays the case analysis for `A(b, θ)`. Fails with `ConditionViolated`
/// outside `b > 0, −π/3 < θ < π/3, θ ≠ 0`.
pub fn verify_edge_analytic(p: &EdgeFamilyParams) -> Result<CertificateTrace> {
    if !p.satisfies_condition() {
        return Err(Error::ConditionViolated {
            b: p.b(),
            theta: p.theta(),
        });
    }
    let (b, theta) = (p.b(), p.theta());
    let a: BipartiteOperator = edge_state(p);
    let (kernel, tau_kernel) = kernel_pair(&a, DEFAULT_REL_TOL);
    let (ker_a, ker_tau) = closed_form_kernel_vectors(b, theta);
    let kernel_residuals = [
        kernel.residual(&ker_a),
        tau_kernel.residual(&ker_tau[0]),
        tau_kernel.residual(&ker_tau[1]),
        tau_kernel.residual(&ker_tau[2]),
    ];
    let kernel_dims = (kernel.dim(), tau_kernel.dim());

    let product_identity_gap = (c64(b * b * b, 0.0) + cis(-3.0 * theta)).norm();
    let coefficient = cis(-theta) / b;
    let zero_pattern_step = b > 0.0 && coefficient.norm() > 0.0;
    // x3 = y3 = 0 leaves (x1, x2); the other two are cyclic shifts.
    let cases: Vec<ZeroCoordinateCase> = [(2, (0, 1)), (0, (1, 2)), (1, (2, 0))]
        .into_iter()
        .map(|(vanishing, pair)| {
            let gap = phase_gap(coefficient);
            ZeroCoordinateCase {
                vanishing,
                pair,
                coefficient,
                phase_gap: gap,
                collapses: gap > 0.0,
            }
        })
        .collect();

    let kernels_match = kernel_dims == (1, 3) && kernel_residuals.iter().all(|&r| r <= KERNEL_RESIDUAL_TOL);
    let applicable = kernels_match
        && product_identity_gap > DEGENERACY_TOL
        && zero_pattern_step
        && cases.iter().all(|c| c.collapses);
    Ok(CertificateTrace {
        params: *p,
        kernel_residuals,
        kernel_dims,
        product_identity_gap,
        zero_pattern_step,
        cases,
        verdict: if applicable {
            EdgeVerdict::EdgeCertified
        } else {
            EdgeVerdict::NotApplicable
        },
    })
}
