//! Counter-based random streams and the random tensor families used in the
//! benchmarks.
//!
//! Every Gaussian draw is a pure function of `(seed, stream, tag, row, col)`,
//! so any subset of a large random block can be materialized on demand and
//! still agree bit-for-bit with the full block.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::error::{Result, TtError};
use crate::linalg::svd;
use crate::matrix::Matrix;
use crate::tensor::{norm, DenseTensor, Shape, SparseTensor};
use crate::tt::{check_ranks, tt_evaluate, RankTuple, TtTensor};

const SEQUENTIAL_TAG: u64 = u64::MAX;
const SUBSTREAM_SALT: u64 = 0x5bd1_e995_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn absorb(h: u64, v: u64) -> u64 {
    mix64(h ^ v.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(0x632b_e59b_d9b4_e019))
}

#[inline]
fn unit_open(bits: u64) -> f64 {
    // (0, 1]
    ((bits >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
fn unit_half_open(bits: u64) -> f64 {
    // [0, 1)
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Box–Muller from one hashed key.
#[inline]
fn gaussian_from_key(key: u64) -> f64 {
    let u1 = unit_open(mix64(key ^ 0x1));
    let u2 = unit_half_open(mix64(key ^ 0x2));
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Seedable, splittable stream of pseudo-random numbers.
///
/// Not meant to be shared between threads; derive one [`substream`](Self::substream)
/// per worker instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    root: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self {
            seed,
            stream,
            root: absorb(absorb(0x243f_6a88_85a3_08d3, seed), stream),
            counter: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Independent child stream; a pure function of this stream's identity and `index`.
    pub fn substream(&self, index: u64) -> Self {
        Self::new(self.seed, absorb(absorb(self.stream, SUBSTREAM_SALT), index))
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = mix64(absorb(self.root ^ SEQUENTIAL_TAG, self.counter));
        self.counter += 1;
        v
    }

    /// Uniform in `[0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        unit_half_open(self.next_u64())
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn next_gaussian(&mut self) -> f64 {
        let g = self.gaussian_at(SEQUENTIAL_TAG, self.counter, 0);
        self.counter += 1;
        g
    }

    /// Standard normal draw addressed by `(tag, row, col)`; does not advance the stream.
    #[inline]
    pub fn gaussian_at(&self, tag: u64, row: u64, col: u128) -> f64 {
        self.keyed_row(tag, row).gaussian(col)
    }

    /// Pre-hashed `(tag, row)` prefix for drawing many columns of one row.
    pub fn keyed_row(&self, tag: u64, row: u64) -> KeyedRow {
        KeyedRow(absorb(absorb(self.root, tag), row))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KeyedRow(u64);

impl KeyedRow {
    #[inline]
    pub fn gaussian(self, col: u128) -> f64 {
        let key = absorb(absorb(self.0, (col >> 64) as u64), col as u64);
        gaussian_from_key(key)
    }
}

/// i.i.d. standard normal entries in linear order.
pub fn gaussian_dense(shape: &Shape, rng: &mut RngStream) -> Result<DenseTensor> {
    let len = shape.dense_len()?;
    let data = (0..len).map(|_| rng.next_gaussian()).collect();
    DenseTensor::new(shape.clone(), data)
}

/// `nnz` standard normal values at independently, uniformly drawn positions.
/// Colliding positions keep the value drawn last.
pub fn gaussian_sparse(shape: &Shape, nnz: usize, rng: &mut RngStream) -> Result<SparseTensor> {
    let count = shape
        .element_count()
        .ok_or_else(|| TtError::InvalidShape(format!("{shape} has more than 2^128 elements")))?;
    if nnz as u128 > count {
        return Err(TtError::InvalidArgument(format!(
            "{nnz} entries requested but {shape} only has {count}"
        )));
    }
    let mut placed: BTreeMap<u128, (Vec<usize>, f64)> = BTreeMap::new();
    for _ in 0..nnz {
        let index: Vec<usize> = shape.dims().iter().map(|&n| rng.below(n)).collect();
        let value = rng.next_gaussian();
        placed.insert(shape.linear_index(&index), (index, value));
    }
    SparseTensor::new(shape.clone(), placed.into_values().collect())
}

/// Train with i.i.d. standard normal cores.
pub fn random_tt(shape: &Shape, ranks: &RankTuple, rng: &mut RngStream) -> Result<TtTensor> {
    check_ranks(shape, ranks)?;
    let d = shape.order();
    let blocks = (0..d)
        .map(|i| {
            let l = if i == 0 { 1 } else { ranks.get(i - 1) };
            let r = if i + 1 == d { 1 } else { ranks.get(i) };
            let data = (0..l * shape.dim(i) * r).map(|_| rng.next_gaussian()).collect();
            (l, r, data)
        })
        .collect();
    Ok(TtTensor::from_blocks(shape, blocks))
}

/// Parameters of the prescribed singular-value decay `σ_k = k^{-exponent}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySpec {
    pub exponent: f64,
    /// Singular values beyond this index are set to zero.
    pub cutoff: usize,
    /// Number of left-to-right passes over adjacent core pairs.
    pub sweeps: usize,
}

impl Default for DecaySpec {
    fn default() -> Self {
        Self {
            exponent: 2.0,
            cutoff: 250,
            sweeps: 1,
        }
    }
}

impl DecaySpec {
    /// `(1, 2^-e, 3^-e, ..)` up to `len` entries, zero past the cutoff.
    pub fn profile(&self, len: usize) -> Vec<f64> {
        (1..=len)
            .map(|k| {
                if k <= self.cutoff {
                    (k as f64).powf(-self.exponent)
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Random train whose unfoldings approximately follow the [`DecaySpec`] profile.
///
/// Starting from Gaussian cores, each sweep merges cores `i` and `i+1`, takes
/// the SVD of the `(l·n_i) × (n_{i+1}·r)` unfolding of the pair, replaces the
/// singular values by the decay profile and splits the pair again as `U` and
/// `diag(profile)·Vt`.
pub fn random_tt_decay(
    shape: &Shape,
    ranks: &RankTuple,
    decay: &DecaySpec,
    rng: &mut RngStream,
) -> Result<TtTensor> {
    if !(decay.exponent > 0.0 && decay.exponent.is_finite()) {
        return Err(TtError::InvalidArgument(format!(
            "decay exponent must be positive, got {}",
            decay.exponent
        )));
    }
    if decay.cutoff == 0 || decay.sweeps == 0 {
        return Err(TtError::InvalidArgument("cutoff and sweep count must be positive".into()));
    }
    let start = random_tt(shape, ranks, rng)?;
    let d = shape.order();
    let mut blocks: Vec<(usize, usize, Vec<f64>)> = (0..d)
        .map(|i| {
            let (l, _, r) = start.core_dims(i);
            (l, r, start.core(i).data().to_vec())
        })
        .collect();
    for _ in 0..decay.sweeps {
        for i in 0..d - 1 {
            let (l, mid, left_data) = std::mem::take(&mut blocks[i]);
            let (_, r, right_data) = std::mem::take(&mut blocks[i + 1]);
            let (n_i, n_next) = (shape.dim(i), shape.dim(i + 1));
            let left = Matrix::from_parts(l * n_i, mid, left_data);
            let right = Matrix::from_parts(mid, n_next * r, right_data);
            let f = svd(&left.matmul(&right))?;
            let k = mid.min(f.rank());
            let mut vt = f.vt.leading_rows(k);
            vt.scale_rows(&decay.profile(k));
            blocks[i] = (l, k, f.u.leading_cols(k).into_data());
            blocks[i + 1] = (k, r, vt.into_data());
        }
    }
    Ok(TtTensor::from_blocks(shape, blocks))
}

/// Normalized random low-rank tensor plus scaled Gaussian noise:
/// `x = x_exact/‖x_exact‖ + tau·n/‖n‖`. Also returns the exact train.
pub fn noisy_low_rank(
    shape: &Shape,
    exact_ranks: &RankTuple,
    tau: f64,
    rng: &mut RngStream,
) -> Result<(DenseTensor, TtTensor)> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(TtError::InvalidArgument(format!("noise level must be >= 0, got {tau}")));
    }
    shape.dense_len()?;
    let exact = random_tt(shape, exact_ranks, rng)?;
    let signal = tt_evaluate(&exact)?;
    let noise = gaussian_dense(shape, rng)?;
    let x = signal.combine(1.0 / norm(&signal), &noise, tau / norm(&noise))?;
    Ok((x, exact))
}
