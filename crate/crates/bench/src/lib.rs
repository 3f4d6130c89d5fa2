//! Benchmark fixtures shared by the criterion benches.

use edgelab_core::states::edge_state;
use edgelab_core::{BipartiteOperator, EdgeFamilyParams};

/// Edge states on a fixed `(b, θ)` grid.
pub fn edge_fixtures() -> Vec<BipartiteOperator> {
    [(0.5, 0.2), (1.0, std::f64::consts::FRAC_PI_6), (3.0, -0.7)]
        .iter()
        .map(|&(b, t)| edge_state(&EdgeFamilyParams::new(b, t).expect("valid parameters")))
        .collect()
}
