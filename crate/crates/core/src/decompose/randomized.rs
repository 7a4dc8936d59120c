use std::time::Instant;

use super::DecompositionReport;
use crate::error::{Result, TtError};
use crate::linalg::rq_row_orthonormal;
use crate::matrix::Matrix;
use crate::random::{KeyedRow, RngStream};
use crate::tensor::{DenseTensor, Shape, SparseTensor};
use crate::tt::{clip_to_shape, OrthoState, RankTuple, TtTensor};

/// Input accepted by [`randomized_tt_svd`].
#[derive(Debug, Clone, Copy)]
pub enum TensorRef<'a> {
    Dense(&'a DenseTensor),
    Sparse(&'a SparseTensor),
}

impl<'a> From<&'a DenseTensor> for TensorRef<'a> {
    fn from(x: &'a DenseTensor) -> Self {
        TensorRef::Dense(x)
    }
}

impl<'a> From<&'a SparseTensor> for TensorRef<'a> {
    fn from(x: &'a SparseTensor) -> Self {
        TensorRef::Sparse(x)
    }
}

impl TensorRef<'_> {
    pub fn shape(&self) -> &Shape {
        match self {
            TensorRef::Dense(x) => x.shape(),
            TensorRef::Sparse(x) => x.shape(),
        }
    }
}

/// Randomized TT-SVD with sketch ranks `s` (clipped to the shape).
///
/// Cores are built right to left. At step `J` (1-based, `J = d..2`) the
/// Gaussian sketch entry for row `ρ` and prefix multi-index `L` over modes
/// `1..J-1` is `rng.gaussian_at(J, ρ, L)`, so the sparse path can generate
/// exactly the entries it touches and still agree with the dense path.
/// Cores `2..d` of the result are right-orthogonal.
pub fn randomized_tt_svd<'a>(
    x: impl Into<TensorRef<'a>>,
    s: &RankTuple,
    rng: &RngStream,
) -> Result<(TtTensor, DecompositionReport)> {
    let start = Instant::now();
    let x = x.into();
    let shape = x.shape();
    if shape.order() < 2 {
        return Err(TtError::Unsupported("TT-SVD needs order >= 2".into()));
    }
    let ranks = clip_to_shape(shape, s)?;
    let (t, zero_input) = match x {
        TensorRef::Dense(x) => {
            if !x.is_finite() {
                return Err(TtError::NonFinite("randomized TT-SVD input"));
            }
            if x.data().iter().all(|&v| v == 0.0) {
                (TtTensor::zeros(shape)?, true)
            } else {
                (dense_path(x, &ranks, rng)?, false)
            }
        }
        TensorRef::Sparse(x) if x.nnz() == 0 => (TtTensor::zeros(shape)?, true),
        TensorRef::Sparse(x) => (sparse_path(x, &ranks, rng)?, false),
    };
    let t = t.with_ortho(OrthoState::RightOrthogonal);
    let report = DecompositionReport {
        ranks: t.ranks().clone(),
        discarded_energy: Vec::new(),
        wall_time: start.elapsed(),
        zero_input,
    };
    Ok((t, report))
}

fn keyed_rows(rng: &RngStream, step: usize, count: usize) -> Vec<KeyedRow> {
    (0..count).map(|rho| rng.keyed_row(step as u64, rho as u64)).collect()
}

fn dense_path(x: &DenseTensor, ranks: &RankTuple, rng: &RngStream) -> Result<TtTensor> {
    let shape = x.shape();
    let d = shape.order();
    let dims = shape.dims();
    let mut blocks = vec![(0, 0, Vec::new()); d];
    // b holds the current right-contracted tensor as P × (n_j · right)
    let mut b = x.data().to_vec();
    let mut right = 1;
    for j in (1..d).rev() {
        let inner = dims[j] * right;
        let prefix = b.len() / inner;
        let bm = Matrix::from_parts(prefix, inner, b);
        let keyed = keyed_rows(rng, j + 1, ranks.get(j - 1));
        let g = Matrix::from_fn(keyed.len(), prefix, |rho, l| keyed[rho].gaussian(l as u128));
        let q = rq_row_orthonormal(&g.matmul(&bm))?.q;
        b = bm.matmul_nt(&q).into_data();
        let k = q.rows();
        blocks[j] = (k, right, q.into_data());
        right = k;
    }
    blocks[0] = (1, right, b);
    Ok(TtTensor::from_blocks(shape, blocks))
}

/// Rows of a right-contracted sparse tensor: `keys[t]` is the linear index
/// over the leading modes and `values[t·width..]` its dense trailing fibre.
struct SparseRows {
    keys: Vec<u128>,
    width: usize,
    values: Vec<f64>,
}

fn sparse_path(x: &SparseTensor, ranks: &RankTuple, rng: &RngStream) -> Result<TtTensor> {
    let shape = x.shape();
    let d = shape.order();
    let dims = shape.dims();
    let mut rows = SparseRows {
        keys: (0..x.nnz()).map(|k| shape.linear_index(x.index(k))).collect(),
        width: 1,
        values: x.iter().map(|(_, v)| v).collect(),
    };
    let mut blocks = vec![(0, 0, Vec::new()); d];
    for j in (1..d).rev() {
        let n = dims[j] as u128;
        let width = rows.width;
        let inner = dims[j] * width;
        // keys are sorted, so rows sharing a prefix are contiguous
        let mut groups = Vec::new();
        let mut t = 0;
        while t < rows.keys.len() {
            let prefix = rows.keys[t] / n;
            let begin = t;
            while t < rows.keys.len() && rows.keys[t] / n == prefix {
                t += 1;
            }
            groups.push((prefix, begin, t));
        }

        let keyed = keyed_rows(rng, j + 1, ranks.get(j - 1));
        let k = keyed.len();
        let mut a = Matrix::zeros(k, inner);
        let mut gcol = vec![0.0; k];
        for &(prefix, begin, end) in &groups {
            for (g, row) in gcol.iter_mut().zip(&keyed) {
                *g = row.gaussian(prefix);
            }
            for t in begin..end {
                let offset = (rows.keys[t] % n) as usize * width;
                let v = &rows.values[t * width..(t + 1) * width];
                for (rho, &g) in gcol.iter().enumerate() {
                    for (sigma, &val) in v.iter().enumerate() {
                        let c = a.get(rho, offset + sigma);
                        a.set(rho, offset + sigma, c + g * val);
                    }
                }
            }
        }
        let q = rq_row_orthonormal(&a)?.q;
        let k = q.rows();

        let mut keys = Vec::with_capacity(groups.len());
        let mut values = Vec::with_capacity(groups.len() * k);
        for &(prefix, begin, end) in &groups {
            let mut out = vec![0.0; k];
            for t in begin..end {
                let offset = (rows.keys[t] % n) as usize * width;
                let v = &rows.values[t * width..(t + 1) * width];
                for (rho, o) in out.iter_mut().enumerate() {
                    let qrow = &q.row(rho)[offset..offset + width];
                    *o += v.iter().zip(qrow).map(|(a, b)| a * b).sum::<f64>();
                }
            }
            keys.push(prefix);
            values.extend(out);
        }
        blocks[j] = (k, width, q.into_data());
        rows = SparseRows {
            keys,
            width: k,
            values,
        };
    }

    let mut first = vec![0.0; dims[0] * rows.width];
    for (t, &key) in rows.keys.iter().enumerate() {
        let i = key as usize;
        first[i * rows.width..(i + 1) * rows.width]
            .copy_from_slice(&rows.values[t * rows.width..(t + 1) * rows.width]);
    }
    blocks[0] = (1, rows.width, first);
    Ok(TtTensor::from_blocks(shape, blocks))
}

/// Replaces the first core of `t` by the contraction of `x` with cores `2..d`.
///
/// When cores `2..d` are right-orthogonal this is the orthogonal projection of
/// `x` onto the span they define.
pub fn project_onto_right_frame(x: &DenseTensor, t: &TtTensor) -> Result<TtTensor> {
    if x.shape() != t.shape() {
        return Err(TtError::ShapeMismatch(format!("{} vs {}", x.shape(), t.shape())));
    }
    let d = t.order();
    let mut b = x.data().to_vec();
    let mut blocks = Vec::with_capacity(d);
    for j in (1..d).rev() {
        let q = t.core_right_unfolding(j);
        let prefix = b.len() / q.cols();
        b = Matrix::from_parts(prefix, q.cols(), b).matmul_nt(&q).into_data();
        let (l, _, r) = t.core_dims(j);
        blocks.push((l, r, t.core(j).data().to_vec()));
    }
    blocks.push((1, t.core_dims(0).2, b));
    blocks.reverse();
    Ok(TtTensor::from_blocks(t.shape(), blocks).with_ortho(t.ortho_state()))
}
