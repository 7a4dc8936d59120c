//! Dense and coordinate-format tensors, unfoldings and mode contractions.
//!
//! All tensors use the last-index-fastest linearization: the entry at
//! `(i_1, .., i_d)` lives at `Σ_k i_k ∏_{j>k} n_j`. Modes are 0-based in the
//! API; the text file formats use 1-based indices.

use std::fmt;

use crate::error::{Result, TtError};
use crate::matrix::{Matrix, Provenance};

/// Largest element count a dense tensor may hold.
pub const MAX_DENSE_ELEMENTS: u128 = 1 << 40;

/// Mode dimensions `(n_1, .., n_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    dims: Vec<usize>,
}

impl Shape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(TtError::InvalidShape("order must be at least 1".into()));
        }
        if let Some(pos) = dims.iter().position(|&n| n == 0) {
            return Err(TtError::InvalidShape(format!("mode {pos} has dimension 0")));
        }
        Ok(Self { dims })
    }

    /// `d` modes of equal dimension `n`.
    pub fn uniform(order: usize, n: usize) -> Result<Self> {
        Self::new(vec![n; order])
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn dim(&self, mode: usize) -> usize {
        self.dims[mode]
    }

    /// Total element count, or `None` if it does not fit in 128 bits.
    pub fn element_count(&self) -> Option<u128> {
        self.dims
            .iter()
            .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
    }

    /// Element count of a dense materialization; errors above [`MAX_DENSE_ELEMENTS`].
    pub fn dense_len(&self) -> Result<usize> {
        match self.element_count() {
            Some(count) if count <= MAX_DENSE_ELEMENTS => Ok(count as usize),
            Some(count) => Err(TtError::TooLarge {
                elements: count,
                limit: MAX_DENSE_ELEMENTS,
            }),
            None => Err(TtError::TooLarge {
                elements: u128::MAX,
                limit: MAX_DENSE_ELEMENTS,
            }),
        }
    }

    /// Product of the dimensions of modes `range`, saturating at `u128::MAX`.
    pub fn span(&self, range: std::ops::Range<usize>) -> u128 {
        self.dims[range]
            .iter()
            .fold(1u128, |acc, &n| acc.saturating_mul(n as u128))
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        strides(&self.dims)
    }

    /// Linear position of a multi-index, in 128-bit arithmetic.
    pub fn linear_index(&self, index: &[usize]) -> u128 {
        debug_assert_eq!(index.len(), self.order());
        index
            .iter()
            .zip(&self.dims)
            .fold(0u128, |acc, (&i, &n)| acc * n as u128 + i as u128)
    }

    pub fn multi_index(&self, mut linear: u128) -> Vec<usize> {
        let mut index = vec![0; self.order()];
        for (slot, &n) in index.iter_mut().zip(&self.dims).rev() {
            *slot = (linear % n as u128) as usize;
            linear /= n as u128;
        }
        index
    }

    pub fn contains(&self, index: &[usize]) -> bool {
        index.len() == self.order() && index.iter().zip(&self.dims).all(|(&i, &n)| i < n)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
        write!(f, "({})", dims.join("x"))
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    strides
}

/// Nonempty ascending set of distinct 0-based modes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeSet {
    modes: Vec<usize>,
}

impl ModeSet {
    /// Validates `modes` against a tensor of order `order`; input order is irrelevant.
    pub fn new(mut modes: Vec<usize>, order: usize) -> Result<Self> {
        let original = modes.clone();
        modes.sort_unstable();
        let distinct = modes.windows(2).all(|w| w[0] != w[1]);
        if modes.is_empty() || !distinct || modes.last().is_some_and(|&m| m >= order) {
            return Err(TtError::InvalidModeSet {
                modes: original,
                order,
            });
        }
        Ok(Self { modes })
    }

    /// Modes `0..k`.
    pub fn leading(k: usize, order: usize) -> Result<Self> {
        Self::new((0..k).collect(), order)
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.modes.binary_search(&mode).is_ok()
    }

    /// Modes of `0..order` not in the set, ascending.
    pub fn complement(&self, order: usize) -> Vec<usize> {
        (0..order).filter(|m| !self.contains(*m)).collect()
    }

    fn is_leading(&self) -> bool {
        self.modes.iter().enumerate().all(|(k, &m)| k == m)
    }
}

/// Order-`d` array of reals in last-index-fastest order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: Shape,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(shape: Shape, data: Vec<f64>) -> Result<Self> {
        let len = shape.dense_len()?;
        if data.len() != len {
            return Err(TtError::ShapeMismatch(format!(
                "shape {shape} needs {len} values, got {}",
                data.len()
            )));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: Shape) -> Result<Self> {
        let len = shape.dense_len()?;
        Ok(Self {
            shape,
            data: vec![0.0; len],
        })
    }

    pub fn from_fn(shape: Shape, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = shape.dense_len()?;
        let mut data = Vec::with_capacity(len);
        let mut index = vec![0; shape.order()];
        for _ in 0..len {
            data.push(f(&index));
            increment(&mut index, shape.dims());
        }
        Ok(Self { shape, data })
    }

    /// Order-1 tensor holding a single value; the result of a full contraction.
    pub fn scalar(value: f64) -> Self {
        Self {
            shape: Shape { dims: vec![1] },
            data: vec![value],
        }
    }

    pub fn vector(values: Vec<f64>) -> Result<Self> {
        Self::new(Shape::new(vec![values.len()])?, values)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        assert!(self.shape.contains(index), "index {index:?} outside {}", self.shape);
        self.data[self.shape.linear_index(index) as usize]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// `a·self + b·other`
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        check_same_shape(self, other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self {
            shape: self.shape.clone(),
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    /// Reorders modes so that output mode `k` is input mode `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let d = self.order();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&p| p >= d || std::mem::replace(&mut seen[p], true)) {
            return Err(TtError::InvalidArgument(format!(
                "{perm:?} is not a permutation of {d} modes"
            )));
        }
        let dims: Vec<usize> = perm.iter().map(|&p| self.shape.dim(p)).collect();
        let data = permute_data(&self.data, self.shape.dims(), perm);
        Ok(Self {
            shape: Shape { dims },
            data,
        })
    }
}

fn check_same_shape(x: &DenseTensor, y: &DenseTensor) -> Result<()> {
    if x.shape != y.shape {
        return Err(TtError::ShapeMismatch(format!("{} vs {}", x.shape, y.shape)));
    }
    Ok(())
}

/// Odometer step in last-index-fastest order.
#[inline]
pub(crate) fn increment(index: &mut [usize], dims: &[usize]) {
    for k in (0..index.len()).rev() {
        index[k] += 1;
        if index[k] < dims[k] {
            return;
        }
        index[k] = 0;
    }
}

/// Output mode `k` of the result is input mode `perm[k]`.
fn permute_data(data: &[f64], dims: &[usize], perm: &[usize]) -> Vec<f64> {
    if perm.iter().enumerate().all(|(k, &p)| k == p) {
        return data.to_vec();
    }
    let in_strides = strides(dims);
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let gathered: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();
    let d = out_dims.len();
    let inner_dim = out_dims[d - 1];
    let inner_stride = gathered[d - 1];
    let mut out = Vec::with_capacity(data.len());
    let mut index = vec![0; d];
    let mut offset = 0usize;
    while out.len() < data.len() {
        for i in 0..inner_dim {
            out.push(data[offset + i * inner_stride]);
        }
        // advance all but the innermost mode
        let mut k = d - 1;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            index[k] += 1;
            offset += gathered[k];
            if index[k] < out_dims[k] {
                break;
            }
            offset -= gathered[k] * out_dims[k];
            index[k] = 0;
        }
    }
    out
}

/// Unfolds `x` into a matrix whose rows run over the modes in `alpha` and whose
/// columns run over the remaining modes, each group in original mode order.
pub fn matricize(x: &DenseTensor, alpha: &ModeSet) -> Result<Matrix> {
    let d = x.order();
    if alpha.modes().iter().any(|&m| m >= d) {
        return Err(TtError::InvalidModeSet {
            modes: alpha.modes().to_vec(),
            order: d,
        });
    }
    let rest = alpha.complement(d);
    let rows: usize = alpha.modes().iter().map(|&m| x.shape.dim(m)).product();
    let cols: usize = rest.iter().map(|&m| x.shape.dim(m)).product();
    let data = if alpha.is_leading() {
        x.data.clone()
    } else {
        let perm: Vec<usize> = alpha.modes().iter().chain(&rest).copied().collect();
        permute_data(&x.data, x.shape.dims(), &perm)
    };
    Ok(Matrix::from_parts(rows, cols, data).with_provenance(Provenance {
        shape: x.shape.clone(),
        row_modes: alpha.clone(),
    }))
}

/// Inverse of [`matricize`].
pub fn dematricize(m: &Matrix, target: &Shape, alpha: &ModeSet) -> Result<DenseTensor> {
    let d = target.order();
    if alpha.modes().iter().any(|&k| k >= d) {
        return Err(TtError::InvalidModeSet {
            modes: alpha.modes().to_vec(),
            order: d,
        });
    }
    let rest = alpha.complement(d);
    let rows: usize = alpha.modes().iter().map(|&k| target.dim(k)).product();
    let cols: usize = rest.iter().map(|&k| target.dim(k)).product();
    if (m.rows(), m.cols()) != (rows, cols) {
        return Err(TtError::ShapeMismatch(format!(
            "{}x{} matrix cannot fold into {target} split by {:?}",
            m.rows(),
            m.cols(),
            alpha.modes()
        )));
    }
    let grouped: Vec<usize> = alpha.modes().iter().chain(&rest).copied().collect();
    let grouped_dims: Vec<usize> = grouped.iter().map(|&k| target.dim(k)).collect();
    // position of each original mode inside the grouped order
    let mut inverse = vec![0; d];
    for (pos, &k) in grouped.iter().enumerate() {
        inverse[k] = pos;
    }
    let data = permute_data(m.data(), &grouped_dims, &inverse);
    DenseTensor::new(target.clone(), data)
}

fn check_mode_list(modes: &[usize], order: usize) -> Result<()> {
    let mut seen = vec![false; order];
    for &m in modes {
        if m >= order || std::mem::replace(&mut seen[m], true) {
            return Err(TtError::InvalidModeSet {
                modes: modes.to_vec(),
                order,
            });
        }
    }
    Ok(())
}

/// Contracts mode `x_modes[k]` of `x` with mode `y_modes[k]` of `y` for every `k`.
///
/// The result carries the free modes of `x` followed by the free modes of `y`,
/// each in original order. Contracting every mode yields [`DenseTensor::scalar`].
pub fn contract(
    x: &DenseTensor,
    x_modes: &[usize],
    y: &DenseTensor,
    y_modes: &[usize],
) -> Result<DenseTensor> {
    if x_modes.len() != y_modes.len() {
        return Err(TtError::ContractionShape(format!(
            "{} modes of x paired with {} modes of y",
            x_modes.len(),
            y_modes.len()
        )));
    }
    check_mode_list(x_modes, x.order())?;
    check_mode_list(y_modes, y.order())?;
    for (&a, &b) in x_modes.iter().zip(y_modes) {
        if x.shape.dim(a) != y.shape.dim(b) {
            return Err(TtError::ContractionShape(format!(
                "mode {a} of x has dimension {} but mode {b} of y has {}",
                x.shape.dim(a),
                y.shape.dim(b)
            )));
        }
    }
    let x_free: Vec<usize> = (0..x.order()).filter(|m| !x_modes.contains(m)).collect();
    let y_free: Vec<usize> = (0..y.order()).filter(|m| !y_modes.contains(m)).collect();
    let x_perm: Vec<usize> = x_free.iter().chain(x_modes).copied().collect();
    let y_perm: Vec<usize> = y_modes.iter().chain(&y_free).copied().collect();

    let inner: usize = x_modes.iter().map(|&m| x.shape.dim(m)).product();
    let rows: usize = x_free.iter().map(|&m| x.shape.dim(m)).product();
    let cols: usize = y_free.iter().map(|&m| y.shape.dim(m)).product();
    let a = Matrix::from_parts(rows, inner, permute_data(&x.data, x.shape.dims(), &x_perm));
    let b = Matrix::from_parts(inner, cols, permute_data(&y.data, y.shape.dims(), &y_perm));
    let product = a.matmul(&b);

    let dims: Vec<usize> = x_free
        .iter()
        .map(|&m| x.shape.dim(m))
        .chain(y_free.iter().map(|&m| y.shape.dim(m)))
        .collect();
    if dims.is_empty() {
        return Ok(DenseTensor::scalar(product.data()[0]));
    }
    DenseTensor::new(Shape::new(dims)?, product.into_data())
}

/// Euclidean inner product over all entries.
pub fn inner(x: &DenseTensor, y: &DenseTensor) -> Result<f64> {
    check_same_shape(x, y)?;
    Ok(x.data.iter().zip(&y.data).map(|(a, b)| a * b).sum())
}

pub fn norm(x: &DenseTensor) -> f64 {
    x.data.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Coordinate-format tensor with entries sorted by linear index.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTensor {
    shape: Shape,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseTensor {
    /// Builds a sparse tensor. Explicit zeros are dropped; duplicates and
    /// out-of-range indices are rejected.
    pub fn new(shape: Shape, entries: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        if shape.element_count().is_none() {
            return Err(TtError::InvalidShape(format!(
                "{shape} has more than 2^128 elements"
            )));
        }
        let mut keyed = Vec::with_capacity(entries.len());
        for (index, value) in entries {
            if !shape.contains(&index) {
                return Err(TtError::InvalidArgument(format!(
                    "index {index:?} outside {shape}"
                )));
            }
            if !value.is_finite() {
                return Err(TtError::NonFinite("sparse entry"));
            }
            if value != 0.0 {
                keyed.push((shape.linear_index(&index), index, value));
            }
        }
        keyed.sort_by_key(|e| e.0);
        if let Some(w) = keyed.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(TtError::InvalidArgument(format!(
                "duplicate entry at {:?}",
                w[0].1
            )));
        }
        let mut indices = Vec::with_capacity(keyed.len() * shape.order());
        let mut values = Vec::with_capacity(keyed.len());
        for (_, index, value) in keyed {
            indices.extend(index);
            values.push(value);
        }
        Ok(Self {
            shape,
            indices,
            values,
        })
    }

    pub fn empty(shape: Shape) -> Result<Self> {
        Self::new(shape, Vec::new())
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn index(&self, k: usize) -> &[usize] {
        let d = self.shape.order();
        &self.indices[k * d..(k + 1) * d]
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// Entries in ascending linear order.
    pub fn iter(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        (0..self.nnz()).map(move |k| (self.index(k), self.values[k]))
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

pub fn sparse_to_dense(x: &SparseTensor) -> Result<DenseTensor> {
    let mut dense = DenseTensor::zeros(x.shape.clone())?;
    let strides = x.shape.strides();
    for (index, value) in x.iter() {
        let offset: usize = index.iter().zip(&strides).map(|(i, s)| i * s).sum();
        dense.data[offset] = value;
    }
    Ok(dense)
}
