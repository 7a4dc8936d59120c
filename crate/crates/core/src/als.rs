//! Alternating least squares for `J(x) = ‖f − x‖²` over trains of fixed ranks.
//!
//! With every fixed core orthogonal the local problem for core `i` has the
//! closed-form solution "contract `f` with all other cores", which is what
//! the sweep computes.

use crate::error::{Result, TtError};
use crate::linalg::qr;
use crate::matrix::Matrix;
use crate::random::{random_tt, RngStream};
use crate::tensor::{norm, DenseTensor, Shape};
use crate::tt::{check_ranks, orthogonalize_right, OrthoState, RankTuple, TtTensor};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlsConfig {
    pub ranks: RankTuple,
    pub seed: u64,
    pub stream: u64,
    /// Number of half-sweeps; consecutive ones alternate direction.
    pub sweeps: usize,
}

impl AlsConfig {
    pub fn new(ranks: RankTuple, seed: u64) -> Self {
        Self {
            ranks,
            seed,
            stream: 0,
            sweeps: 1,
        }
    }
}

/// Gaussian train with right-orthogonal cores `2..d`.
pub fn als_initial_frame(shape: &Shape, ranks: &RankTuple, rng: &mut RngStream) -> Result<TtTensor> {
    Ok(orthogonalize_right(&random_tt(shape, ranks, rng)?))
}

/// Runs `cfg.sweeps` half-sweeps from a random start, the first one left to
/// right. Returns the final train and `J` after every core update.
pub fn als_half_sweep(f: &DenseTensor, cfg: &AlsConfig) -> Result<(TtTensor, Vec<f64>)> {
    if f.order() < 2 {
        return Err(TtError::Unsupported("ALS needs order >= 2".into()));
    }
    if cfg.sweeps == 0 {
        return Err(TtError::InvalidArgument("at least one sweep is required".into()));
    }
    check_ranks(f.shape(), &cfg.ranks)?;
    let mut rng = RngStream::new(cfg.seed, cfg.stream);
    let mut frame = als_initial_frame(f.shape(), &cfg.ranks, &mut rng)?;
    let reverse: Vec<usize> = (0..f.order()).rev().collect();
    let mut target = f.clone();
    let mut objectives = Vec::with_capacity(cfg.sweeps * f.order());
    for sweep in 0..cfg.sweeps {
        if sweep > 0 {
            frame = frame.reversed();
            target = target.permuted(&reverse)?;
        }
        let (t, obj) = als_sweep_from(&target, &frame)?;
        objectives.extend(obj);
        frame = t;
    }
    if cfg.sweeps.is_multiple_of(2) {
        frame = frame.reversed();
    }
    Ok((frame, objectives))
}

/// One left-to-right half-sweep starting from the cores `2..d` of `frame`.
///
/// The result is left-orthogonal in cores `1..d-1`.
pub fn als_sweep_from(f: &DenseTensor, frame: &TtTensor) -> Result<(TtTensor, Vec<f64>)> {
    if f.shape() != frame.shape() {
        return Err(TtError::ShapeMismatch(format!("{} vs {}", f.shape(), frame.shape())));
    }
    if !f.is_finite() {
        return Err(TtError::NonFinite("ALS target"));
    }
    if norm(f) == 0.0 {
        return Err(TtError::ZeroNorm);
    }
    let frame = if frame.ortho_state() == OrthoState::RightOrthogonal {
        frame.clone()
    } else {
        orthogonalize_right(frame)
    };
    let d = frame.order();

    // z[i]: f contracted with cores i+1..d, shaped (n_1⋯n_i) × r_i
    // right[i]: cores i+1..d chained, shaped r_i × (n_{i+1}⋯n_d)
    let mut z = vec![Matrix::zeros(1, 1); d];
    let mut right = vec![Matrix::identity(1); d];
    z[d - 1] = Matrix::from_parts(f.data().len(), 1, f.data().to_vec());
    for j in (1..d).rev() {
        let q = frame.core_right_unfolding(j);
        let prev = z[j].data().to_vec();
        let rows = prev.len() / q.cols();
        z[j - 1] = Matrix::from_parts(rows, q.cols(), prev).matmul_nt(&q);
        let (l, n, _) = frame.core_dims(j);
        let chained = frame.core_left_unfolding(j).matmul(&right[j]);
        let cols = chained.cols() * n;
        right[j - 1] = chained.reshape(l, cols)?;
    }

    let mut phi = Matrix::identity(1);
    let mut blocks = Vec::with_capacity(d);
    let mut objectives = Vec::with_capacity(d);
    for (i, (zi, ri)) in z.into_iter().zip(right).enumerate() {
        let (l, n, r) = frame.core_dims(i);
        let zi = zi.reshape(phi.rows(), n * r)?;
        let core = phi.matmul_tn(&zi);
        let rows = phi.rows() * n;
        let x = phi.matmul(&core).reshape(rows, r)?.matmul(&ri);
        objectives.push(
            f.data()
                .iter()
                .zip(x.data())
                .map(|(a, b)| (a - b) * (a - b))
                .sum(),
        );
        if i + 1 == d {
            blocks.push((l, r, core.into_data()));
            break;
        }
        let q = qr(&core.reshape(l * n, r)?)?.q;
        if q.cols() != r {
            return Err(TtError::InvalidRank(format!("rank {r} exceeds {l}·{n} at core {i}")));
        }
        phi = phi.matmul(&q.clone().reshape(l, n * r)?).reshape(rows, r)?;
        blocks.push((l, r, q.into_data()));
    }
    Ok((
        TtTensor::from_blocks(frame.shape(), blocks).with_ortho(OrthoState::LeftOrthogonal),
        objectives,
    ))
}
