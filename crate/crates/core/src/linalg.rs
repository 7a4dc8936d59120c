//! SVD, QR and RQ factorizations backed by faer's dense kernels.

use crate::error::{Result, TtError};
use crate::matrix::Matrix;

/// Thin SVD `A = U·diag(S)·Vt`, singular values non-increasing.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub vt: Matrix,
}

impl SvdResult {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    pub fn reconstruct(&self) -> Matrix {
        let mut svt = self.vt.clone();
        svt.scale_rows(&self.s);
        self.u.matmul(&svt)
    }

    /// `diag(S)·Vt`
    pub fn weighted_vt(&self) -> Matrix {
        let mut svt = self.vt.clone();
        svt.scale_rows(&self.s);
        svt
    }

    /// Keeps the leading `k` singular triples.
    pub fn truncate(self, k: usize) -> Self {
        let k = k.min(self.s.len());
        Self {
            u: self.u.leading_cols(k),
            s: self.s[..k].to_vec(),
            vt: self.vt.leading_rows(k),
        }
    }
}

/// Thin QR `A = Q·R` with orthonormal columns in `Q`.
#[derive(Debug, Clone)]
pub struct QrResult {
    pub q: Matrix,
    pub r: Matrix,
}

/// `A = R·Q` with orthonormal rows in `Q`.
#[derive(Debug, Clone)]
pub struct RqResult {
    pub r: Matrix,
    pub q: Matrix,
}

fn check_finite(a: &Matrix) -> Result<()> {
    if a.is_finite() {
        Ok(())
    } else {
        Err(TtError::NonFinite("matrix input"))
    }
}

/// Flips singular pairs so the largest-magnitude entry of every `U` column is
/// nonnegative (first occurrence wins ties).
fn fix_signs(u: &mut Matrix, vt: &mut Matrix) {
    for k in 0..u.cols() {
        let mut best = 0.0f64;
        let mut sign = 1.0;
        for i in 0..u.rows() {
            let v = u.get(i, k);
            if v.abs() > best {
                best = v.abs();
                sign = v.signum();
            }
        }
        if sign < 0.0 {
            for i in 0..u.rows() {
                u.set(i, k, -u.get(i, k));
            }
            for j in 0..vt.cols() {
                vt.set(k, j, -vt.get(k, j));
            }
        }
    }
}

/// Full thin SVD with `k = min(m, n)` triples.
pub fn svd(a: &Matrix) -> Result<SvdResult> {
    check_finite(a)?;
    let f = a
        .to_faer()
        .thin_svd()
        .map_err(|_| TtError::NoConvergence("singular value decomposition"))?;
    let s_diag = f.S().column_vector();
    let mut order: Vec<usize> = (0..s_diag.nrows()).collect();
    order.sort_by(|&i, &j| s_diag[j].total_cmp(&s_diag[i]));
    let s = order.iter().map(|&k| s_diag[k].max(0.0)).collect();
    let (u, v) = (f.U(), f.V());
    let mut u = Matrix::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]);
    let mut vt = Matrix::from_fn(order.len(), v.nrows(), |i, j| v[(j, order[i])]);
    fix_signs(&mut u, &mut vt);
    Ok(SvdResult { u, s, vt })
}

/// Leading `min(r, m, n)` singular triples.
pub fn truncated_svd(a: &Matrix, r: usize) -> Result<SvdResult> {
    if r == 0 {
        return Err(TtError::InvalidRank("truncation rank must be at least 1".into()));
    }
    Ok(svd(a)?.truncate(r))
}

/// Thin Householder QR; `Q` has `min(m, n)` columns.
pub fn qr(a: &Matrix) -> Result<QrResult> {
    check_finite(a)?;
    let f = a.to_faer().qr();
    Ok(QrResult {
        q: Matrix::from_faer(f.compute_thin_Q().as_ref()),
        r: Matrix::from_faer(f.thin_R()),
    })
}

/// `A = R·Q` with row-orthonormal `Q`, computed from the QR of `Aᵀ`.
pub fn rq_row_orthonormal(a: &Matrix) -> Result<RqResult> {
    let f = qr(&a.transpose())?;
    // (Aᵀ = Q R)  =>  A = Rᵀ Qᵀ
    Ok(RqResult {
        r: f.r.transpose(),
        q: f.q.transpose(),
    })
}

/// Number of singular values strictly above `rel_tol · σ_1`.
pub fn numerical_rank(s: &[f64], rel_tol: f64) -> usize {
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().take_while(|&&v| v > rel_tol * top).count(),
        _ => 0,
    }
}

/// `max(m, n) · ε`, the customary floor for rank decisions.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}
