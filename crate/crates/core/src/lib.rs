//! Constructions and verdicts for bi-qutrit PPT edge states.
//!
//! The crate is split in three layers:
//!
//! * [`linalg`]: dense complex matrices, partial transpose, Hermitian
//!   eigendecomposition, SVD-based rank, kernels and ranges.
//! * [`states`]: the parameterised matrix families (the type-(8,6) family
//!   `A(b, θ)`, its generalisation, the type-(7,6) state, the Choi matrices of
//!   `Φ[a,b,c]`, and the face family `X(b, θ; Gram)`).
//! * [`classify`]: PSD/PPT verdicts, the `(p, q)` type, rank-bound
//!   admissibility, the product-vector search, and the analytic edge
//!   certificate for `A(b, θ)`.

pub mod classify;
pub mod error;
pub mod linalg;
pub mod states;

pub use classify::{
    certificate::{verify_edge_analytic, CertificateTrace, EdgeVerdict},
    check_range_criterion, classify, phi_ppt_region, rank_bounds, reconstruct_separable,
    search::{product_vector_search, EdgeSearchResult, SearchConfig, SearchVerdict},
    Admissibility, Classification, RangeCriterionReport,
};
pub use error::{Error, Result};
pub use linalg::{BipartiteOperator, DenseMatrix, Subspace, C64};
pub use states::{ChoiParams, EdgeFamilyParams, GramSpec, ProductPair};
