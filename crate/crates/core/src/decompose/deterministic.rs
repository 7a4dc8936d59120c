use std::time::Instant;

use super::DecompositionReport;
use crate::error::{Result, TtError};
use crate::linalg::{numerical_rank, svd, SvdResult};
use crate::matrix::Matrix;
use crate::tensor::{norm, DenseTensor};
use crate::tt::{check_ranks, OrthoState, RankTuple, TtTensor};

/// Deterministic TT-SVD keeping every singular value above `rel_tol · σ_1`
/// at each step.
pub fn tt_svd_exact(x: &DenseTensor, rel_tol: f64) -> Result<(TtTensor, DecompositionReport)> {
    if !(rel_tol >= 0.0 && rel_tol.is_finite()) {
        return Err(TtError::InvalidArgument(format!("relative tolerance {rel_tol}")));
    }
    sweep(x, |_, f| numerical_rank(&f.s, rel_tol))
}

/// Deterministic TT-SVD truncated to `target` at every step.
pub fn tt_svd_truncated(
    x: &DenseTensor,
    target: &RankTuple,
) -> Result<(TtTensor, DecompositionReport)> {
    if x.order() >= 2 {
        check_ranks(x.shape(), target)?;
    }
    sweep(x, |i, _| target.get(i))
}

fn sweep(
    x: &DenseTensor,
    mut choose: impl FnMut(usize, &SvdResult) -> usize,
) -> Result<(TtTensor, DecompositionReport)> {
    let start = Instant::now();
    let d = x.order();
    if d < 2 {
        return Err(TtError::Unsupported("TT-SVD needs order >= 2".into()));
    }
    if !x.is_finite() {
        return Err(TtError::NonFinite("TT-SVD input"));
    }
    let shape = x.shape();
    if norm(x) == 0.0 {
        let t = TtTensor::zeros(shape)?.with_ortho(OrthoState::LeftOrthogonal);
        let report = DecompositionReport {
            ranks: t.ranks().clone(),
            discarded_energy: vec![0.0; d - 1],
            wall_time: start.elapsed(),
            zero_input: true,
        };
        return Ok((t, report));
    }

    let total = x.data().len();
    let mut carry = x.data().to_vec();
    let mut left = 1;
    let mut blocks = Vec::with_capacity(d);
    let mut discarded = Vec::with_capacity(d - 1);
    for i in 0..d - 1 {
        let rows = left * shape.dim(i);
        let cols = carry.len() / rows;
        let f = svd(&Matrix::from_parts(rows, cols, carry))?;
        let k = choose(i, &f).clamp(1, f.rank());
        discarded.push(f.s[k..].iter().map(|v| v * v).sum());
        let f = f.truncate(k);
        carry = f.weighted_vt().into_data();
        blocks.push((left, k, f.u.into_data()));
        left = k;
        debug_assert!(carry.len() <= total);
    }
    blocks.push((left, 1, carry));

    let t = TtTensor::from_blocks(shape, blocks).with_ortho(OrthoState::LeftOrthogonal);
    let report = DecompositionReport {
        ranks: t.ranks().clone(),
        discarded_energy: discarded,
        wall_time: start.elapsed(),
        zero_input: false,
    };
    Ok((t, report))
}
