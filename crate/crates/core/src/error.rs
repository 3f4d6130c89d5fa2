use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("matrix is not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("Gram matrix is not positive semi-definite (min eigenvalue {0:.3e})")]
    GramNotPsd(f64),
    #[error("Gram off-diagonal {name} has modulus {modulus} > 1")]
    OffdiagTooLarge { name: &'static str, modulus: f64 },
    #[error("parameters violate b > 0, -π/3 < θ < π/3, θ ≠ 0 (b = {b}, θ = {theta})")]
    ConditionViolated { b: f64, theta: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
