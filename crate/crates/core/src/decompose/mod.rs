//! Deterministic and randomized TT-SVD, the Gaussian range finder and the
//! error bounds that accompany them.

mod deterministic;
mod randomized;
mod range;

use std::time::Duration;

pub use deterministic::{tt_svd_exact, tt_svd_truncated};
pub use randomized::{project_onto_right_frame, randomized_tt_svd, TensorRef};
pub use range::{
    compute_eta, gaussian_sketch, randomized_range, randomized_range_with_sketch,
    range_error_bound_frobenius, range_error_bound_spectral, range_residual, BlockOperator,
    OversamplingSpec, RANGE_SKETCH_TAG,
};

use crate::error::{Result, TtError};
use crate::tensor::{norm, DenseTensor, SparseTensor};
use crate::tt::{tt_evaluate, tt_norm, RankTuple, TtTensor};

/// Bookkeeping returned alongside every decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub ranks: RankTuple,
    /// `Σ_{k>r_i} σ_k²` dropped at each truncation step (deterministic sweeps only).
    pub discarded_energy: Vec<f64>,
    pub wall_time: Duration,
    /// The input was identically zero and a rank-1 zero train was returned.
    pub zero_input: bool,
}

impl DecompositionReport {
    /// `√(Σ_i discarded_i)`, an upper bound on the deterministic sweep error.
    pub fn discarded_norm(&self) -> f64 {
        self.discarded_energy.iter().sum::<f64>().sqrt()
    }
}

/// `‖x − t‖ / ‖x‖`
pub fn relative_error(x: &DenseTensor, t: &TtTensor) -> Result<f64> {
    if x.shape() != t.shape() {
        return Err(TtError::ShapeMismatch(format!("{} vs {}", x.shape(), t.shape())));
    }
    let reference = norm(x);
    if reference == 0.0 {
        return Err(TtError::ZeroNorm);
    }
    let approx = tt_evaluate(t)?;
    Ok(norm(&x.sub(&approx)?) / reference)
}

/// `‖x − t‖ / ‖x‖` for a sparse reference, without densifying either side.
///
/// Uses `‖x − t‖² = ‖x‖² − 2⟨x, t⟩ + ‖t‖²`, so results below roughly `1e-7`
/// are dominated by cancellation.
pub fn relative_error_sparse(x: &SparseTensor, t: &TtTensor) -> Result<f64> {
    if x.shape() != t.shape() {
        return Err(TtError::ShapeMismatch(format!("{} vs {}", x.shape(), t.shape())));
    }
    let reference = x.norm();
    if reference == 0.0 {
        return Err(TtError::ZeroNorm);
    }
    let cross: f64 = x.iter().map(|(index, v)| v * t.entry(index)).sum();
    let tn = tt_norm(t);
    let sq = reference * reference - 2.0 * cross + tn * tn;
    Ok(sq.max(0.0).sqrt() / reference)
}
