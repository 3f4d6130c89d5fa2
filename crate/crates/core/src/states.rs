//! Constructors for the bi-qutrit matrix families.
//!
//! All constructors return the matrices exactly as laid out in block form
//! (unnormalised, trace ≠ 1). Use [`BipartiteOperator::trace_normalized`] when
//! a density matrix is wanted.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{
    self, c64, cis, gram_realization, hadamard, inner, outer, partial_transpose, tensor_vec,
    BipartiteOperator, DenseMatrix, C64, DEFAULT_ABS_TOL, DEFAULT_REL_TOL,
};

/// Slack allowed on `|(ξ|η)| ≤ 1` before a Gram spec is rejected.
const OFFDIAG_SLACK: f64 = 1e-12;

/// Parameters `(b, θ)` of the type-(8,6) family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeFamilyParams {
    b: f64,
    theta: f64,
}

impl EdgeFamilyParams {
    /// Any finite `θ` is accepted; `b` must be positive.
    pub fn new(b: f64, theta: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParam(format!("b must be positive, got {b}")));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParam(format!("θ must be finite, got {theta}")));
        }
        Ok(Self { b, theta })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The strict condition `b > 0, −π/3 < θ < π/3, θ ≠ 0` under which the
    /// state is a PPT entangled edge state.
    pub fn satisfies_condition(&self) -> bool {
        self.b > 0.0 && self.theta.abs() < PI / 3.0 && self.theta != 0.0
    }
}

/// Off-diagonal inner products `(ξ|η), (η|ζ), (ζ|ξ)` of the face family
/// together with `θ`, which fixes the common squared norm `2cos θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramSpec {
    pub xi_eta: C64,
    pub eta_zeta: C64,
    pub zeta_xi: C64,
    pub theta: f64,
}

impl GramSpec {
    pub fn new(xi_eta: C64, eta_zeta: C64, zeta_xi: C64, theta: f64) -> Self {
        Self {
            xi_eta,
            eta_zeta,
            zeta_xi,
            theta,
        }
    }

    /// The implied 3×3 Gram matrix of `(ξ, η, ζ)`.
    pub fn gram(&self) -> DenseMatrix {
        p_rho_sigma_tau(self.theta, self.xi_eta, self.eta_zeta, self.zeta_xi)
    }

    /// Checks `|offdiag| ≤ 1` and that the Gram matrix is PSD.
    pub fn validate(&self) -> Result<()> {
        for (name, z) in [
            ("xi_eta", self.xi_eta),
            ("eta_zeta", self.eta_zeta),
            ("zeta_xi", self.zeta_xi),
        ] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidParam(format!("{name} must be finite")));
            }
            if z.norm() > 1.0 + OFFDIAG_SLACK {
                return Err(Error::OffdiagTooLarge {
                    name,
                    modulus: z.norm(),
                });
            }
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidParam("θ must be finite".into()));
        }
        let eig = linalg::hermitian_eig(&self.gram())?;
        if !linalg::psd_from_spectrum(&eig.values, DEFAULT_ABS_TOL) {
            return Err(Error::GramNotPsd(eig.values[0]));
        }
        Ok(())
    }
}

/// Weights of the map `Φ[a,b,c]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChoiParams {
    a: f64,
    b: f64,
    c: f64,
}

impl ChoiParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParam(format!("{name} must be a nonnegative real, got {v}")));
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// A pair `(x, y)` standing for the product vector `x ⊗ y`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductPair {
    pub x: Vec<C64>,
    pub y: Vec<C64>,
}

impl ProductPair {
    pub fn vector(&self) -> Vec<C64> {
        tensor_vec(&self.x, &self.y)
    }

    /// `x̄ ⊗ y`, the partner vector for the partial transpose.
    pub fn conjugate_partner(&self) -> Vec<C64> {
        let xbar: Vec<C64> = self.x.iter().map(|z| z.conj()).collect();
        tensor_vec(&xbar, &self.y)
    }
}

fn two_cos(theta: f64) -> f64 {
    2.0 * theta.cos()
}

/// The 3×3 matrix `P[θ]` with diagonal `2cos θ` and off-diagonals `−e^{±iθ}`.
/// `(1,1,1)ᵀ` is always in its kernel.
pub fn p_theta(theta: f64) -> DenseMatrix {
    p_with_diagonal(theta, two_cos(theta))
}

fn p_with_diagonal(theta: f64, d: f64) -> DenseMatrix {
    let e = -cis(theta);
    let f = -cis(-theta);
    let d = c64(d, 0.0);
    DenseMatrix::from_rows(&[vec![d, e, f], vec![f, d, e], vec![e, f, d]])
}

/// `P[ρ,σ,τ]`: diagonal `2cos θ`, upper entries `ρ, σ` and lower corner `τ`.
pub fn p_rho_sigma_tau(theta: f64, rho: C64, sigma: C64, tau: C64) -> DenseMatrix {
    let d = c64(two_cos(theta), 0.0);
    DenseMatrix::from_rows(&[
        vec![d, rho, tau.conj()],
        vec![rho.conj(), d, sigma],
        vec![tau, sigma.conj(), d],
    ])
}

/// Smallest diagonal value making the `P[θ]` off-diagonal pattern PSD.
///
/// `P[θ]` is circulant, so with diagonal `d` its eigenvalues are
/// `d − 2cos(θ + 2πk/3)` for `k = 0, 1, 2`.
pub fn a_theta(theta: f64) -> f64 {
    (0..3)
        .map(|k| two_cos(theta + 2.0 * PI * k as f64 / 3.0))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn edge_layout(b: f64, theta: f64, corner_diag: f64) -> DenseMatrix {
    let d = c64(corner_diag, 0.0);
    let inv = c64(1.0 / b, 0.0);
    let bb = c64(b, 0.0);
    let mut a = DenseMatrix::diagonal(&[d, inv, bb, bb, d, inv, inv, bb, d]);
    let e = -cis(theta);
    let f = -cis(-theta);
    a[(0, 4)] = e;
    a[(0, 8)] = f;
    a[(4, 0)] = f;
    a[(4, 8)] = e;
    a[(8, 0)] = e;
    a[(8, 4)] = f;
    a
}

fn qutrit_pair(mat: DenseMatrix) -> BipartiteOperator {
    BipartiteOperator::new(3, 3, mat).expect("9x9 layout")
}

/// The type-(8,6) family `A(b, θ)`.
pub fn edge_state(p: &EdgeFamilyParams) -> BipartiteOperator {
    qutrit_pair(edge_layout(p.b, p.theta, two_cos(p.theta)))
}

/// `A(b, θ)` with the three corner diagonals `2cos θ` replaced by
/// [`a_theta`], which keeps the state PPT for every `θ`.
pub fn generalized_edge_state(p: &EdgeFamilyParams) -> BipartiteOperator {
    qutrit_pair(edge_layout(p.b, p.theta, a_theta(p.theta)))
}

/// The type-(7,6) state: corner off-diagonals `+1`, diagonal
/// `(1, 1/b, b, b, 1, 1/b, 1/b, b, 1)`.
pub fn state_7_6(b: f64) -> Result<BipartiteOperator> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidParam(format!("b must be positive, got {b}")));
    }
    let one = c64(1.0, 0.0);
    let inv = c64(1.0 / b, 0.0);
    let bb = c64(b, 0.0);
    let mut a = DenseMatrix::diagonal(&[one, inv, bb, bb, one, inv, inv, bb, one]);
    for &(i, j) in &[(0, 4), (0, 8), (4, 0), (4, 8), (8, 0), (8, 4)] {
        a[(i, j)] = one;
    }
    Ok(qutrit_pair(a))
}

/// `Φ[a,b,c](X)`: cyclically weighted diagonal, negated off-diagonals.
pub fn choi_map_apply(p: &ChoiParams, x: &DenseMatrix) -> Result<DenseMatrix> {
    if (x.rows(), x.cols()) != (3, 3) {
        return Err(Error::DimensionMismatch(format!(
            "Φ acts on 3x3 matrices, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let (a, b, c) = (p.a, p.b, p.c);
    let (x11, x22, x33) = (x[(0, 0)], x[(1, 1)], x[(2, 2)]);
    let diag = [
        x11 * a + x22 * b + x33 * c,
        x11 * c + x22 * a + x33 * b,
        x11 * b + x22 * c + x33 * a,
    ];
    Ok(DenseMatrix::from_fn(3, 3, |i, j| if i == j { diag[i] } else { -x[(i, j)] }))
}

/// Choi matrix `Σ e_ij ⊗ Φ[a,b,c](e_ij)`.
pub fn choi_matrix(p: &ChoiParams) -> BipartiteOperator {
    let mut out = DenseMatrix::zeros(9, 9);
    for i in 0..3 {
        for j in 0..3 {
            let mut e = DenseMatrix::zeros(3, 3);
            e[(i, j)] = c64(1.0, 0.0);
            let block = choi_map_apply(p, &e).expect("3x3 input");
            for k in 0..3 {
                for l in 0..3 {
                    out[(3 * i + k, 3 * j + l)] = block[(k, l)];
                }
            }
        }
    }
    qutrit_pair(out)
}

/// The third roots of unity `{1, e^{2πi/3}, e^{−2πi/3}}`.
pub fn third_roots_of_unity() -> [C64; 3] {
    [c64(1.0, 0.0), cis(2.0 * PI / 3.0), cis(-2.0 * PI / 3.0)]
}

/// The nine product vectors `z_i(ω) = x_i(ω) ⊗ y_i(ω)` whose projectors,
/// scaled by `1/(3b)`, sum to `A(b, 0)`.
pub fn separable_decomposition_vectors(b: f64) -> Result<Vec<ProductPair>> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidParam(format!("b must be positive, got {b}")));
    }
    let sb = c64(b.sqrt(), 0.0);
    let zero = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let mut pairs = Vec::with_capacity(9);
    for omega in third_roots_of_unity() {
        let w = omega.conj();
        pairs.push(ProductPair {
            x: vec![zero, one, sb * omega],
            y: vec![zero, sb, -w],
        });
        pairs.push(ProductPair {
            x: vec![sb * omega, zero, one],
            y: vec![-w, zero, sb],
        });
        pairs.push(ProductPair {
            x: vec![one, sb * omega, zero],
            y: vec![sb, -w, zero],
        });
    }
    Ok(pairs)
}

/// `(1/3b) Σ z zᴴ` over [`separable_decomposition_vectors`].
pub fn separable_sum(b: f64) -> Result<BipartiteOperator> {
    let pairs = separable_decomposition_vectors(b)?;
    let mut sum = DenseMatrix::zeros(9, 9);
    for pair in &pairs {
        sum = &sum + &outer(&pair.vector());
    }
    Ok(qutrit_pair(sum.scale(c64(1.0 / (3.0 * b), 0.0))))
}

fn face_layout(b: f64, g: &GramSpec) -> DenseMatrix {
    let mut x = edge_layout(b, g.theta, two_cos(g.theta));
    x[(1, 3)] = g.xi_eta.conj();
    x[(3, 1)] = g.xi_eta;
    x[(2, 6)] = g.zeta_xi;
    x[(6, 2)] = g.zeta_xi.conj();
    x[(5, 7)] = g.eta_zeta.conj();
    x[(7, 5)] = g.eta_zeta;
    x
}

fn check_b(b: f64) -> Result<()> {
    if b.is_finite() && b > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam(format!("b must be positive, got {b}")))
    }
}

/// The face family `X(b, θ; Gram)`: `A(b, θ)` with the Gram inner products
/// placed at `((0,1),(1,0))`, `((1,2),(2,1))` and `((2,0),(0,2))` and their
/// mirrored positions.
pub fn face_state(b: f64, g: &GramSpec) -> Result<BipartiteOperator> {
    check_b(b)?;
    g.validate()?;
    Ok(qutrit_pair(face_layout(b, g)))
}

/// Builds the same `X` as [`face_state`] by an independent route: realise
/// `ξ, η, ζ` from the Gram matrix, adjoin orthonormal `α, β, γ` orthogonal to
/// them, form `Xᵀ` as the Hadamard product of the rank-one pattern `w wᴴ`
/// with the Gram matrix of the slot vectors `(ξ,α,γ; α,η,β; γ,β,ζ)`, and
/// take the partial transpose.
pub fn face_state_via_hadamard(b: f64, g: &GramSpec) -> Result<BipartiteOperator> {
    check_b(b)?;
    g.validate()?;
    let realized = gram_realization(&g.gram(), DEFAULT_REL_TOL)?;
    let r = realized.cols();
    let dim = r + 3;
    let padded = |row: usize| -> Vec<C64> {
        (0..dim)
            .map(|c| if c < r { realized[(row, c)] } else { c64(0.0, 0.0) })
            .collect()
    };
    let unit = |k: usize| -> Vec<C64> {
        (0..dim).map(|c| c64(if c == r + k { 1.0 } else { 0.0 }, 0.0)).collect()
    };
    let (xi, eta, zeta) = (padded(0), padded(1), padded(2));
    let (alpha, beta, gamma) = (unit(0), unit(1), unit(2));
    let slots = [&xi, &alpha, &gamma, &alpha, &eta, &beta, &gamma, &beta, &zeta];
    let slot_gram = DenseMatrix::from_fn(9, 9, |j, k| inner(slots[j], slots[k]));

    let sb = b.sqrt();
    let one = c64(1.0, 0.0);
    let s = c64(1.0 / sb, 0.0);
    let t = -cis(g.theta) * sb;
    let w = [one, s, t, t, one, s, s, t, one];
    let pattern = outer(&w);

    let x_tau = qutrit_pair(hadamard(&pattern, &slot_gram)?);
    Ok(partial_transpose(&x_tau))
}

/// Off-diagonals `(ρ, σ, τ)` with `det P[ρ,σ,τ] = 0` (rank two Gram) whose
/// face state has type `(target_p, 5)`:
///
/// * 8: `(−cos θ, −cos θ, −cos θ)`
/// * 7: `(r, −r, 1)` with `r = √(2cos²θ − cos θ)`
/// * 6: `(1, 1, r)` with `r = −cos 2θ / cos θ`
/// * 5: `(−e^{iθ}, −e^{iθ}, −e^{iθ})`, i.e. `P[θ]` itself
pub fn type_p5_offdiagonals(theta: f64, target_p: u32) -> Result<(C64, C64, C64)> {
    let params = EdgeFamilyParams::new(1.0, theta)?;
    if !params.satisfies_condition() {
        return Err(Error::InvalidParam(format!(
            "θ = {theta} must satisfy −π/3 < θ < π/3, θ ≠ 0"
        )));
    }
    let cos = theta.cos();
    let check_r = |r: f64| -> Result<f64> {
        if r.is_finite() && r.abs() < 1.0 {
            Ok(r)
        } else {
            Err(Error::InvalidParam(format!("root r = {r} is outside (−1, 1)")))
        }
    };
    let real = |x: f64| c64(x, 0.0);
    match target_p {
        8 => Ok((real(-cos), real(-cos), real(-cos))),
        7 => {
            let r = check_r((2.0 * cos * cos - cos).sqrt())?;
            Ok((real(r), real(-r), real(1.0)))
        }
        6 => {
            let r = check_r(-(2.0 * theta).cos() / cos)?;
            Ok((real(1.0), real(1.0), real(r)))
        }
        5 => {
            let e = -cis(theta);
            Ok((e, e, e))
        }
        other => Err(Error::InvalidParam(format!("target p must be 5..=8, got {other}"))),
    }
}

/// Face state of type `(target_p, 5)` built from [`type_p5_offdiagonals`].
pub fn face_state_for_target(b: f64, theta: f64, target_p: u32) -> Result<BipartiteOperator> {
    let (rho, sigma, tau) = type_p5_offdiagonals(theta, target_p)?;
    face_state(b, &GramSpec::new(rho, sigma, tau, theta))
}
