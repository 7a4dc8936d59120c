//! Tensor-train representation, rank bookkeeping, orthogonalization and rounding.
//!
//! Core `i` of an order-`d` train is stored as an `n_1 × r_1` matrix for
//! `i = 0`, an `r_{d-1} × n_d` matrix for `i = d-1` and an `r_{i-1} × n_i × r_i`
//! array otherwise. Since the boundary ranks are 1, all three share the
//! row-major layout of an `(l, n, r)` block, which is what the kernels use.

use crate::error::{Result, TtError};
use crate::linalg::{qr, rq_row_orthonormal, truncated_svd};
use crate::matrix::Matrix;
use crate::tensor::{DenseTensor, Shape};

/// Inner ranks `(r_1, .., r_{d-1})` of a train.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankTuple(Vec<usize>);

impl RankTuple {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(TtError::InvalidRank("a train of order >= 2 has at least one rank".into()));
        }
        if ranks.contains(&0) {
            return Err(TtError::InvalidRank(format!("ranks must be positive: {ranks:?}")));
        }
        Ok(Self(ranks))
    }

    pub fn uniform(len: usize, r: usize) -> Result<Self> {
        Self::new(vec![r; len])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn max(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(1)
    }
}

/// Largest meaningful rank per position: `min(∏_{j≤i} n_j, ∏_{j>i} n_j)`.
pub fn rank_bounds(shape: &Shape) -> Vec<usize> {
    let d = shape.order();
    (1..d)
        .map(|i| {
            let bound = shape.span(0..i).min(shape.span(i..d));
            usize::try_from(bound).unwrap_or(usize::MAX)
        })
        .collect()
}

/// Uniform target rank `r` limited by the dimensions of each unfolding.
pub fn clip_ranks(shape: &Shape, r: usize) -> Result<RankTuple> {
    if shape.order() < 2 {
        return Err(TtError::Unsupported("trains need order >= 2".into()));
    }
    if r == 0 {
        return Err(TtError::InvalidRank("target rank must be at least 1".into()));
    }
    RankTuple::new(rank_bounds(shape).into_iter().map(|b| b.min(r)).collect())
}

/// Entrywise minimum of `ranks` and [`rank_bounds`].
pub fn clip_to_shape(shape: &Shape, ranks: &RankTuple) -> Result<RankTuple> {
    check_rank_len(shape, ranks)?;
    RankTuple::new(
        ranks
            .as_slice()
            .iter()
            .zip(rank_bounds(shape))
            .map(|(&r, b)| r.min(b))
            .collect(),
    )
}

/// Errors unless every rank is within [`rank_bounds`].
pub fn check_ranks(shape: &Shape, ranks: &RankTuple) -> Result<()> {
    check_rank_len(shape, ranks)?;
    for (i, (&r, b)) in ranks.as_slice().iter().zip(rank_bounds(shape)).enumerate() {
        if r > b {
            return Err(TtError::InvalidRank(format!(
                "rank {r} at position {} exceeds the unfolding bound {b} for {shape}",
                i + 1
            )));
        }
    }
    Ok(())
}

fn check_rank_len(shape: &Shape, ranks: &RankTuple) -> Result<()> {
    if ranks.len() + 1 != shape.order() {
        return Err(TtError::InvalidRank(format!(
            "{} ranks given for a tensor of order {}",
            ranks.len(),
            shape.order()
        )));
    }
    Ok(())
}

/// Cached orthogonality claim of a train.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthoState {
    None,
    /// Cores `0..d-1` have orthonormal columns in their `{1,2}` unfolding.
    LeftOrthogonal,
    /// Cores `1..d` have orthonormal rows in their `{1}` unfolding.
    RightOrthogonal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TtTensor {
    shape: Shape,
    cores: Vec<DenseTensor>,
    ranks: RankTuple,
    ortho: OrthoState,
}

fn core_shape(i: usize, d: usize, left: usize, n: usize, right: usize) -> Shape {
    let dims = if i == 0 {
        vec![n, right]
    } else if i == d - 1 {
        vec![left, n]
    } else {
        vec![left, n, right]
    };
    Shape::new(dims).expect("positive core dimensions")
}

impl TtTensor {
    /// Validates the rank chain of `cores` (order-2 boundary cores, order-3 inner cores).
    pub fn new(cores: Vec<DenseTensor>) -> Result<Self> {
        let d = cores.len();
        if d < 2 {
            return Err(TtError::Unsupported("trains need order >= 2".into()));
        }
        let mut dims = Vec::with_capacity(d);
        let mut ranks = Vec::with_capacity(d - 1);
        for (i, core) in cores.iter().enumerate() {
            let expected_order = if i == 0 || i == d - 1 { 2 } else { 3 };
            if core.order() != expected_order {
                return Err(TtError::ShapeMismatch(format!(
                    "core {i} has order {} but {expected_order} is required",
                    core.order()
                )));
            }
            let cd = core.shape().dims();
            let (left, n, right) = match (i == 0, i == d - 1) {
                (true, _) => (1, cd[0], cd[1]),
                (_, true) => (cd[0], cd[1], 1),
                _ => (cd[0], cd[1], cd[2]),
            };
            if i > 0 && left != ranks[i - 1] {
                return Err(TtError::ShapeMismatch(format!(
                    "core {i} has left rank {left} but core {} has right rank {}",
                    i - 1,
                    ranks[i - 1]
                )));
            }
            if i + 1 < d {
                ranks.push(right);
            }
            dims.push(n);
        }
        Ok(Self {
            shape: Shape::new(dims)?,
            cores,
            ranks: RankTuple::new(ranks)?,
            ortho: OrthoState::None,
        })
    }

    /// Builds cores from `(l, n, r)`-ordered buffers.
    pub(crate) fn from_blocks(shape: &Shape, blocks: Vec<(usize, usize, Vec<f64>)>) -> Self {
        let d = blocks.len();
        let mut ranks = Vec::with_capacity(d - 1);
        let cores = blocks
            .into_iter()
            .enumerate()
            .map(|(i, (left, right, data))| {
                if i + 1 < d {
                    ranks.push(right);
                }
                DenseTensor::new(core_shape(i, d, left, shape.dim(i), right), data)
                    .expect("block length matches core shape")
            })
            .collect();
        Self {
            shape: shape.clone(),
            cores,
            ranks: RankTuple(ranks),
            ortho: OrthoState::None,
        }
    }

    /// All-zero train of minimal ranks.
    pub fn zeros(shape: &Shape) -> Result<Self> {
        if shape.order() < 2 {
            return Err(TtError::Unsupported("trains need order >= 2".into()));
        }
        let blocks = shape.dims().iter().map(|&n| (1, 1, vec![0.0; n])).collect();
        Ok(Self::from_blocks(shape, blocks))
    }

    pub(crate) fn with_ortho(mut self, ortho: OrthoState) -> Self {
        self.ortho = ortho;
        self
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.cores.len()
    }

    pub fn ranks(&self) -> &RankTuple {
        &self.ranks
    }

    pub fn cores(&self) -> &[DenseTensor] {
        &self.cores
    }

    pub fn core(&self, i: usize) -> &DenseTensor {
        &self.cores[i]
    }

    pub fn ortho_state(&self) -> OrthoState {
        self.ortho
    }

    /// `(left rank, mode dimension, right rank)` of core `i`.
    pub fn core_dims(&self, i: usize) -> (usize, usize, usize) {
        let left = if i == 0 { 1 } else { self.ranks.get(i - 1) };
        let right = if i + 1 == self.order() { 1 } else { self.ranks.get(i) };
        (left, self.shape.dim(i), right)
    }

    /// `{1,2}` unfolding of core `i`: `(l·n) × r`.
    pub fn core_left_unfolding(&self, i: usize) -> Matrix {
        let (l, n, r) = self.core_dims(i);
        Matrix::from_parts(l * n, r, self.cores[i].data().to_vec())
    }

    /// `{1}` unfolding of core `i`: `l × (n·r)`.
    pub fn core_right_unfolding(&self, i: usize) -> Matrix {
        let (l, n, r) = self.core_dims(i);
        Matrix::from_parts(l, n * r, self.cores[i].data().to_vec())
    }

    fn blocks(&self) -> Vec<(usize, usize, Vec<f64>)> {
        (0..self.order())
            .map(|i| {
                let (l, _, r) = self.core_dims(i);
                (l, r, self.cores[i].data().to_vec())
            })
            .collect()
    }

    /// Same tensor scaled by `factor`, applied to the first core.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.cores[0] = out.cores[0].scaled(factor);
        if out.ortho == OrthoState::RightOrthogonal {
            out
        } else {
            out.with_ortho(OrthoState::None)
        }
    }

    /// Single entry `W_1[i_1,:] · W_2[:,i_2,:] ⋯ W_d[:,i_d]`.
    pub fn entry(&self, index: &[usize]) -> f64 {
        assert_eq!(index.len(), self.order(), "index order");
        let mut row = vec![1.0];
        for (i, &k) in index.iter().enumerate() {
            let (l, n, r) = self.core_dims(i);
            assert!(k < n, "index out of range");
            let data = self.cores[i].data();
            let mut next = vec![0.0; r];
            for (a, &w) in row.iter().enumerate().take(l) {
                let slice = &data[(a * n + k) * r..(a * n + k + 1) * r];
                for (o, &v) in next.iter_mut().zip(slice) {
                    *o += w * v;
                }
            }
            row = next;
        }
        row[0]
    }

    /// Train of the mode-reversed tensor `y[i_d, .., i_1] = x[i_1, .., i_d]`.
    pub fn reversed(&self) -> Self {
        let d = self.order();
        let shape = Shape::new(self.shape.dims().iter().rev().copied().collect())
            .expect("valid shape");
        let blocks = (0..d)
            .rev()
            .map(|i| {
                let (l, n, r) = self.core_dims(i);
                let src = self.cores[i].data();
                // (l, n, r) -> (r, n, l)
                let mut data = vec![0.0; l * n * r];
                for a in 0..l {
                    for k in 0..n {
                        for b in 0..r {
                            data[(b * n + k) * l + a] = src[(a * n + k) * r + b];
                        }
                    }
                }
                (r, l, data)
            })
            .collect();
        let ortho = match self.ortho {
            OrthoState::None => OrthoState::None,
            OrthoState::LeftOrthogonal => OrthoState::RightOrthogonal,
            OrthoState::RightOrthogonal => OrthoState::LeftOrthogonal,
        };
        Self::from_blocks(&shape, blocks).with_ortho(ortho)
    }

    /// Largest deviation from the left-orthogonality condition over cores `0..d-1`.
    pub fn left_orthogonality_defect(&self) -> f64 {
        (0..self.order() - 1)
            .map(|i| {
                let m = self.core_left_unfolding(i);
                m.matmul_tn(&m).max_abs_diff(&Matrix::identity(m.cols()))
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation from the right-orthogonality condition over cores `1..d`.
    pub fn right_orthogonality_defect(&self) -> f64 {
        (1..self.order())
            .map(|i| {
                let m = self.core_right_unfolding(i);
                m.matmul_nt(&m).max_abs_diff(&Matrix::identity(m.rows()))
            })
            .fold(0.0, f64::max)
    }
}

/// Densifies a train by chaining the cores left to right.
pub fn tt_evaluate(t: &TtTensor) -> Result<DenseTensor> {
    t.shape.dense_len()?;
    let mut acc = t.core_left_unfolding(0);
    for i in 1..t.order() {
        let next = t.core_right_unfolding(i);
        let (_, n, r) = t.core_dims(i);
        let rows = acc.rows() * n;
        acc = acc.matmul(&next).reshape(rows, r)?;
    }
    DenseTensor::new(t.shape.clone(), acc.into_data())
}

/// Frobenius norm computed on the right-orthogonalized train.
pub fn tt_norm(t: &TtTensor) -> f64 {
    let orth = if t.ortho == OrthoState::RightOrthogonal {
        t.clone()
    } else {
        orthogonalize_right(t)
    };
    debug_assert!(orth.right_orthogonality_defect() < 1e-8);
    orth.cores[0].data().iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Left-to-right QR sweep; the represented tensor is unchanged.
pub fn orthogonalize_left(t: &TtTensor) -> TtTensor {
    let d = t.order();
    let mut blocks = t.blocks();
    for i in 0..d - 1 {
        let (l, right) = (blocks[i].0, blocks[i].1);
        let n = t.shape.dim(i);
        let m = Matrix::from_parts(l * n, right, std::mem::take(&mut blocks[i].2));
        let f = qr(&m).expect("finite cores");
        let k = f.q.cols();
        blocks[i] = (l, k, f.q.into_data());
        let (_, next_right, next) = std::mem::take(&mut blocks[i + 1]);
        let next = Matrix::from_parts(right, t.shape.dim(i + 1) * next_right, next);
        blocks[i + 1] = (k, next_right, f.r.matmul(&next).into_data());
    }
    TtTensor::from_blocks(&t.shape, blocks).with_ortho(OrthoState::LeftOrthogonal)
}

/// Right-to-left RQ sweep; the represented tensor is unchanged.
pub fn orthogonalize_right(t: &TtTensor) -> TtTensor {
    let d = t.order();
    let mut blocks = t.blocks();
    for i in (1..d).rev() {
        let (l, right) = (blocks[i].0, blocks[i].1);
        let n = t.shape.dim(i);
        let m = Matrix::from_parts(l, n * right, std::mem::take(&mut blocks[i].2));
        let f = rq_row_orthonormal(&m).expect("finite cores");
        let k = f.q.rows();
        blocks[i] = (k, right, f.q.into_data());
        let (prev_left, _, prev) = std::mem::take(&mut blocks[i - 1]);
        let prev = Matrix::from_parts(prev_left * t.shape.dim(i - 1), l, prev);
        blocks[i - 1] = (prev_left, k, prev.matmul(&f.r).into_data());
    }
    TtTensor::from_blocks(&t.shape, blocks).with_ortho(OrthoState::RightOrthogonal)
}

/// Recompresses `t` to at most `target` ranks.
///
/// Right-orthogonalizes, then runs a left-to-right truncated-SVD sweep, which
/// is the deterministic TT-SVD applied to the represented tensor.
pub fn tt_round(t: &TtTensor, target: &RankTuple) -> Result<TtTensor> {
    check_ranks(&t.shape, target)?;
    let orth = if t.ortho == OrthoState::RightOrthogonal {
        t.clone()
    } else {
        orthogonalize_right(t)
    };
    let d = t.order();
    let mut blocks = orth.blocks();
    for i in 0..d - 1 {
        let (l, right) = (blocks[i].0, blocks[i].1);
        let n = t.shape.dim(i);
        let m = Matrix::from_parts(l * n, right, std::mem::take(&mut blocks[i].2));
        let f = truncated_svd(&m, target.get(i))?;
        let k = f.rank();
        let carry = f.weighted_vt();
        blocks[i] = (l, k, f.u.into_data());
        let (_, next_right, next) = std::mem::take(&mut blocks[i + 1]);
        let next = Matrix::from_parts(right, t.shape.dim(i + 1) * next_right, next);
        blocks[i + 1] = (k, next_right, carry.matmul(&next).into_data());
    }
    Ok(TtTensor::from_blocks(&t.shape, blocks).with_ortho(OrthoState::LeftOrthogonal))
}
