use std::f64::consts::E;

use crate::error::{Result, TtError};
use crate::linalg::qr;
use crate::matrix::Matrix;
use crate::random::RngStream;

/// Tag under which [`randomized_range`] draws its sketch.
pub const RANGE_SKETCH_TAG: u64 = 0;

/// Target rank `r` plus oversampling `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OversamplingSpec {
    pub r: usize,
    pub p: usize,
}

impl OversamplingSpec {
    pub fn new(r: usize, p: usize) -> Result<Self> {
        if r == 0 {
            return Err(TtError::InvalidRank("target rank must be at least 1".into()));
        }
        Ok(Self { r, p })
    }

    /// Sketch width `r + p`.
    pub fn s(&self) -> usize {
        self.r + self.p
    }
}

/// A linear map that can be applied to a block of column vectors.
pub trait BlockOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `A · block` where `block` has `ncols()` rows.
    fn apply_block(&self, block: &Matrix) -> Matrix;
}

impl BlockOperator for Matrix {
    fn nrows(&self) -> usize {
        self.rows()
    }

    fn ncols(&self) -> usize {
        self.cols()
    }

    fn apply_block(&self, block: &Matrix) -> Matrix {
        self.matmul(block)
    }
}

/// `rows × cols` standard Gaussian matrix with `G[i, ρ] = gaussian_at(tag, ρ, i)`.
pub fn gaussian_sketch(rng: &RngStream, tag: u64, rows: usize, cols: usize) -> Matrix {
    let keyed: Vec<_> = (0..cols).map(|rho| rng.keyed_row(tag, rho as u64)).collect();
    Matrix::from_fn(rows, cols, |i, rho| keyed[rho].gaussian(i as u128))
}

/// Orthonormal basis `Q` for the range of `A·G`, `G` an `n₂ × (r+p)` Gaussian sketch.
pub fn randomized_range<A: BlockOperator + ?Sized>(
    a: &A,
    spec: OversamplingSpec,
    rng: &RngStream,
) -> Result<Matrix> {
    let s = spec.s();
    if s > a.ncols() {
        return Err(TtError::InvalidArgument(format!(
            "sketch width {s} exceeds operator width {}",
            a.ncols()
        )));
    }
    let g = gaussian_sketch(rng, RANGE_SKETCH_TAG, a.ncols(), s);
    randomized_range_with_sketch(a, &g)
}

/// Same as [`randomized_range`] with a caller-supplied sketch.
pub fn randomized_range_with_sketch<A: BlockOperator + ?Sized>(
    a: &A,
    g: &Matrix,
) -> Result<Matrix> {
    if g.rows() != a.ncols() {
        return Err(TtError::ShapeMismatch(format!(
            "sketch has {} rows, operator has {} columns",
            g.rows(),
            a.ncols()
        )));
    }
    Ok(qr(&a.apply_block(g))?.q)
}

/// `‖A − Q Qᵀ A‖_F`
pub fn range_residual(a: &Matrix, q: &Matrix) -> f64 {
    let coeffs = q.matmul_tn(a);
    a.sub(&q.matmul(&coeffs)).frobenius_norm()
}

/// `η = 1 + t√(12r/p) + u·t·e√(r+p)/(p+1)`, defined for `p ≥ 4`.
pub fn compute_eta(r: usize, p: usize, t: f64, u: f64) -> Result<f64> {
    if r == 0 {
        return Err(TtError::Domain("r must be at least 1".into()));
    }
    if p < 4 {
        return Err(TtError::Domain(format!("oversampling p = {p} < 4")));
    }
    if !(t >= 1.0 && u >= 1.0) {
        return Err(TtError::Domain(format!("t = {t} and u = {u} must be >= 1")));
    }
    let (r, p) = (r as f64, p as f64);
    Ok(1.0 + t * (12.0 * r / p).sqrt() + u * t * E * (r + p).sqrt() / (p + 1.0))
}

/// Frobenius-form range bound
/// `(1 + t√(12r/p))·(Σ_{k>r} σ_k²)^{1/2} + u·t·e√(r+p)/(p+1)·σ_{r+1}`.
///
/// It holds with probability at least `1 − 5t^{−p} − 2e^{−u²/2}`.
pub fn range_error_bound_frobenius(s: &[f64], r: usize, p: usize, t: f64, u: f64) -> Result<f64> {
    if p < 4 || r == 0 {
        return Err(TtError::Domain(format!("need r >= 1 and p >= 4, got r = {r}, p = {p}")));
    }
    let tail = s.iter().skip(r).map(|v| v * v).sum::<f64>().sqrt();
    let next = s.get(r).copied().unwrap_or(0.0);
    let (rf, pf) = (r as f64, p as f64);
    Ok((1.0 + t * (12.0 * rf / pf).sqrt()) * tail + u * t * E * (rf + pf).sqrt() / (pf + 1.0) * next)
}

/// Spectral-form range bound `(1 + 11√((r+p)·min(m, n)))·σ_{r+1}`, valid with
/// probability `1 − 6p^{−p}`. Informational only.
pub fn range_error_bound_spectral(s: &[f64], r: usize, p: usize, rows: usize, cols: usize) -> f64 {
    let next = s.get(r).copied().unwrap_or(0.0);
    (1.0 + 11.0 * (((r + p) * rows.min(cols)) as f64).sqrt()) * next
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_direct_evaluation() {
        let expected = 1.0 + 24f64.sqrt() + E * 15f64.sqrt() / 6.0;
        let eta = compute_eta(10, 5, 1.0, 1.0).unwrap();
        assert!((eta - expected).abs() < 1e-12);
        assert!((eta - 7.6535).abs() < 1e-3);
    }

    #[test]
    fn eta_high_precision_case() {
        // 1 + 2·√36 + 3·2·e·√16/5 = 13 + 24e/5
        let expected = 13.0 + 24.0 * E / 5.0;
        let eta = compute_eta(12, 4, 2.0, 3.0).unwrap();
        assert!((eta - expected).abs() < 1e-12);
        assert!((eta - 26.047_752_776_603_4).abs() < 1e-9);
    }

    #[test]
    fn eta_is_affine_in_t() {
        let f = |t| compute_eta(7, 6, t, 2.0).unwrap();
        let slope = f(2.0) - f(1.0);
        assert!((f(10.0) - (f(1.0) + 9.0 * slope)).abs() < 1e-10);
    }

    #[test]
    fn eta_domain() {
        assert!(matches!(compute_eta(3, 3, 1.0, 1.0), Err(TtError::Domain(_))));
        assert!(compute_eta(3, 4, 0.5, 1.0).is_err());
    }

    #[test]
    fn exact_rank_one_is_captured() {
        let a = Matrix::from_fn(6, 5, |i, j| (i as f64 + 1.0) * (2.0 - j as f64));
        let q = randomized_range(&a, OversamplingSpec::new(1, 2).unwrap(), &RngStream::new(4, 0))
            .unwrap();
        assert!(range_residual(&a, &q) <= 1e-12 * a.frobenius_norm());
        assert!(q.matmul_tn(&q).max_abs_diff(&Matrix::identity(3)) < 1e-12);
    }

    #[test]
    fn sketch_wider_than_operator_is_rejected() {
        let a = Matrix::identity(3);
        let spec = OversamplingSpec::new(2, 2).unwrap();
        assert!(randomized_range(&a, spec, &RngStream::new(0, 0)).is_err());
    }
}
