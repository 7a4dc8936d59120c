//! Brute-force oracles for the documented examples, each checked through the
//! public API only.

use ttsketch_core::als::{als_half_sweep, AlsConfig};
use ttsketch_core::decompose::{
    compute_eta, gaussian_sketch, randomized_range, randomized_range_with_sketch,
    randomized_tt_svd, range_error_bound_frobenius, range_residual, relative_error, tt_svd_exact,
    tt_svd_truncated,
};
use ttsketch_core::linalg::{default_rank_tol, numerical_rank, qr, rq_row_orthonormal, svd, truncated_svd};
use ttsketch_core::random::{
    gaussian_dense, gaussian_sparse, random_tt, random_tt_decay, DecaySpec, RngStream,
};
use ttsketch_core::tensor::{contract, dematricize, inner, matricize, norm, sparse_to_dense, ModeSet};
use ttsketch_core::tt::{
    clip_ranks, orthogonalize_left, orthogonalize_right, tt_evaluate, tt_norm, tt_round, RankTuple,
};
use ttsketch_core::{DenseTensor, Matrix, Shape, SparseTensor, TtTensor};

pub type Check = std::result::Result<(), String>;
pub type NamedCheck = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn shape(dims: &[usize]) -> Shape {
    Shape::new(dims.to_vec()).unwrap()
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut RngStream) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.next_gaussian())
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Every `(name, check)` pair of the suite.
pub fn all() -> Vec<NamedCheck> {
    vec![
        ("matricize index map", matricize_index_map),
        ("dematricize round trip", dematricize_round_trip),
        ("contraction nested loops", contraction_nested_loops),
        ("inner flatten and dot", inner_flatten_and_dot),
        ("norm of 1..8", norm_of_one_to_eight),
        ("sparse placement", sparse_placement),
        ("svd against gram eigenvalues", svd_against_gram_eigenvalues),
        ("truncated svd tail", truncated_svd_tail),
        ("qr reconstruction", qr_reconstruction),
        ("rq reconstruction", rq_reconstruction),
        ("rank of constructed rank-2 matrix", numerical_rank_two),
        ("tt evaluation quadruple sum", tt_evaluate_quadruple_sum),
        ("rank bounds", rank_bounds_example),
        ("tt norm densified", tt_norm_densified),
        ("left orthogonalization", left_orthogonalization),
        ("right orthogonalization", right_orthogonalization),
        ("rounding against dense truncation", rounding_against_dense),
        ("gaussian moments", gaussian_moments),
        ("stream independence", stream_independence),
        ("sparse occupancy chi-square", sparse_occupancy),
        ("random tt unfolding ranks", random_tt_unfolding_ranks),
        ("decay profile", decay_profile),
        ("exact tt-svd round trip", exact_tt_svd_round_trip),
        ("range bound at unit parameters", range_bound_unit_parameters),
        ("matrix case equals range finder", matrix_case_equals_range_finder),
        ("sparse equals dense at order 20", sparse_equals_dense_order_twenty),
        ("eta values", eta_values),
        ("relative error construction", relative_error_construction),
        ("als exact input objective", als_exact_input),
        ("als monotonicity", als_monotonicity),
    ]
}

fn matricize_index_map() -> Check {
    let x = DenseTensor::from_fn(shape(&[2, 3, 2]), |m| (100 * m[0] + 10 * m[1] + m[2]) as f64).unwrap();
    let m = matricize(&x, &ModeSet::new(vec![0, 1], 3).unwrap()).unwrap();
    ensure!(m.rows() == 6 && m.cols() == 2, "got {}x{}", m.rows(), m.cols());
    for i in 0..2 {
        for j in 0..3 {
            for k in 0..2 {
                let v = m.get(i * 3 + j, k);
                ensure!(v == (100 * i + 10 * j + k) as f64, "entry ({i},{j},{k}) = {v}");
            }
        }
    }
    Ok(())
}

fn dematricize_round_trip() -> Check {
    let s = shape(&[2, 3, 2]);
    let x = DenseTensor::from_fn(s.clone(), |m| (100 * m[0] + 10 * m[1] + m[2]) as f64).unwrap();
    let alpha = ModeSet::new(vec![0, 2], 3).unwrap();
    let m = matricize(&x, &alpha).unwrap();
    let back = dematricize(&m, &s, &alpha).unwrap();
    ensure!(back == x, "round trip changed the tensor");
    Ok(())
}

fn contraction_nested_loops() -> Check {
    let mut rng = RngStream::new(101, 0);
    let x = gaussian_dense(&shape(&[2, 3, 2]), &mut rng).unwrap();
    let y = gaussian_dense(&shape(&[3, 2, 2]), &mut rng).unwrap();
    let z = contract(&x, &[1, 2], &y, &[0, 2]).unwrap();
    ensure!(z.shape().dims() == [2, 2], "shape {:?}", z.shape().dims());
    for a in 0..2 {
        for b in 0..2 {
            let mut sum = 0.0;
            for j in 0..3 {
                for k in 0..2 {
                    sum += x.get(&[a, j, k]) * y.get(&[j, b, k]);
                }
            }
            ensure!((z.get(&[a, b]) - sum).abs() <= 1e-13, "({a},{b}) {} vs {sum}", z.get(&[a, b]));
        }
    }
    Ok(())
}

fn inner_flatten_and_dot() -> Check {
    let mut rng = RngStream::new(102, 0);
    let s = shape(&[3, 3, 3]);
    let x = gaussian_dense(&s, &mut rng).unwrap();
    let y = gaussian_dense(&s, &mut rng).unwrap();
    let mut dot = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                dot += x.get(&[i, j, k]) * y.get(&[i, j, k]);
            }
        }
    }
    let v = inner(&x, &y).unwrap();
    ensure!((v - dot).abs() <= 1e-13 * dot.abs().max(1.0), "{v} vs {dot}");
    Ok(())
}

fn norm_of_one_to_eight() -> Check {
    let x = DenseTensor::new(shape(&[2, 2, 2]), (1..=8).map(f64::from).collect()).unwrap();
    let v = norm(&x);
    ensure!((v - 204f64.sqrt()).abs() <= 1e-13, "{v}");
    Ok(())
}

fn sparse_placement() -> Check {
    let s = shape(&[4, 4, 4]);
    let mut rng = RngStream::new(103, 0);
    let mut entries = Vec::new();
    let mut used = std::collections::HashSet::new();
    while entries.len() < 10 {
        let index = vec![rng.below(4), rng.below(4), rng.below(4)];
        if used.insert(index.clone()) {
            entries.push((index, rng.next_gaussian()));
        }
    }
    let x = SparseTensor::new(s.clone(), entries.clone()).unwrap();
    let dense = sparse_to_dense(&x).unwrap();
    let mut oracle = vec![0.0; 64];
    for (index, value) in &entries {
        oracle[index[0] * 16 + index[1] * 4 + index[2]] = *value;
    }
    ensure!(dense.data() == oracle.as_slice(), "placement differs");
    Ok(())
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(a: &Matrix) -> Vec<f64> {
    let n = a.rows();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eig
}

fn svd_against_gram_eigenvalues() -> Check {
    let a = gaussian_matrix(5, 3, &mut RngStream::new(104, 0));
    let f = svd(&a).unwrap();
    let residual = a.sub(&f.reconstruct()).frobenius_norm();
    ensure!(residual <= 1e-12, "residual {residual}");
    let eig = jacobi_eigenvalues(&a.matmul_tn(&a));
    for (s, e) in f.s.iter().zip(&eig) {
        ensure!((s - e.max(0.0).sqrt()).abs() <= 1e-10, "σ {s} vs √λ {}", e.sqrt());
    }
    Ok(())
}

fn truncated_svd_tail() -> Check {
    let a = gaussian_matrix(6, 4, &mut RngStream::new(105, 0));
    let full = svd(&a).unwrap();
    let t = truncated_svd(&a, 2).unwrap();
    let residual = a.sub(&t.reconstruct()).frobenius_norm();
    let tail = (full.s[2].powi(2) + full.s[3].powi(2)).sqrt();
    ensure!((residual - tail).abs() <= 1e-12, "{residual} vs {tail}");
    Ok(())
}

fn qr_reconstruction() -> Check {
    let a = gaussian_matrix(8, 3, &mut RngStream::new(106, 0));
    let f = qr(&a).unwrap();
    let gram = f.q.matmul_tn(&f.q).max_abs_diff(&Matrix::identity(3));
    let rec = f.q.matmul(&f.r).max_abs_diff(&a);
    ensure!(gram <= 1e-12 && rec <= 1e-12, "QᵀQ defect {gram}, QR defect {rec}");
    Ok(())
}

fn rq_reconstruction() -> Check {
    let a = gaussian_matrix(3, 10, &mut RngStream::new(107, 0));
    let f = rq_row_orthonormal(&a).unwrap();
    let gram = f.q.matmul_nt(&f.q).max_abs_diff(&Matrix::identity(3));
    let rec = f.r.matmul(&f.q).max_abs_diff(&a);
    ensure!(gram <= 1e-12 && rec <= 1e-12, "QQᵀ defect {gram}, RQ defect {rec}");
    Ok(())
}

fn numerical_rank_two() -> Check {
    let mut rng = RngStream::new(108, 0);
    let u = gaussian_matrix(5, 2, &mut rng);
    let v = gaussian_matrix(2, 5, &mut rng);
    let a = u.matmul(&v);
    let s = svd(&a).unwrap().s;
    let k = numerical_rank(&s, default_rank_tol(5, 5));
    ensure!(k == 2, "rank {k} from {s:?}");
    Ok(())
}

fn tt_evaluate_quadruple_sum() -> Check {
    let s = shape(&[3, 3, 3, 3]);
    let t = random_tt(&s, &RankTuple::uniform(3, 2).unwrap(), &mut RngStream::new(109, 0)).unwrap();
    let x = tt_evaluate(&t).unwrap();
    let c = |i: usize, l: usize, m: usize, r: usize| t.core(i).get(&[l, m, r]);
    for m0 in 0..3 {
        for m1 in 0..3 {
            for m2 in 0..3 {
                for m3 in 0..3 {
                    let mut sum = 0.0;
                    for j1 in 0..2 {
                        for j2 in 0..2 {
                            for j3 in 0..2 {
                                sum += t.core(0).get(&[m0, j1]) * c(1, j1, m1, j2) * c(2, j2, m2, j3) * t.core(3).get(&[j3, m3]);
                            }
                        }
                    }
                    let v = x.get(&[m0, m1, m2, m3]);
                    ensure!((v - sum).abs() <= 1e-12, "{v} vs {sum}");
                }
            }
        }
    }
    Ok(())
}

fn rank_bounds_example() -> Check {
    let r = clip_ranks(&shape(&[2, 2, 2, 2, 2]), 3).unwrap();
    ensure!(r.as_slice() == [2, 3, 3, 2], "{:?}", r.as_slice());
    Ok(())
}

fn tt_norm_densified() -> Check {
    let s = shape(&[3, 4, 2, 3]);
    let t = random_tt(&s, &RankTuple::new(vec![2, 3, 2]).unwrap(), &mut RngStream::new(110, 0)).unwrap();
    let dense = norm(&tt_evaluate(&t).unwrap());
    let v = tt_norm(&t);
    ensure!((v - dense).abs() <= 1e-12 * dense, "{v} vs {dense}");
    Ok(())
}

fn left_orthogonalization() -> Check {
    let s = shape(&[3, 4, 2, 3]);
    let t = random_tt(&s, &RankTuple::new(vec![2, 3, 2]).unwrap(), &mut RngStream::new(111, 0)).unwrap();
    let o = orthogonalize_left(&t);
    let (a, b) = (tt_evaluate(&t).unwrap(), tt_evaluate(&o).unwrap());
    ensure!(max_abs(a.data(), b.data()) <= 1e-12 * norm(&a), "evaluation changed");
    for i in 0..3 {
        let u = o.core_left_unfolding(i);
        let defect = u.matmul_tn(&u).max_abs_diff(&Matrix::identity(u.cols()));
        ensure!(defect <= 1e-12, "core {i} defect {defect}");
    }
    Ok(())
}

fn right_orthogonalization() -> Check {
    let s = shape(&[3, 4, 2, 3]);
    let t = random_tt(&s, &RankTuple::new(vec![2, 3, 2]).unwrap(), &mut RngStream::new(112, 0)).unwrap();
    let o = orthogonalize_right(&t);
    let (a, b) = (tt_evaluate(&t).unwrap(), tt_evaluate(&o).unwrap());
    ensure!(max_abs(a.data(), b.data()) <= 1e-12 * norm(&a), "evaluation changed");
    for i in 1..4 {
        let u = o.core_right_unfolding(i);
        let defect = u.matmul_nt(&u).max_abs_diff(&Matrix::identity(u.rows()));
        ensure!(defect <= 1e-12, "core {i} defect {defect}");
    }
    Ok(())
}

fn rounding_against_dense() -> Check {
    let s = Shape::uniform(4, 4).unwrap();
    let t = random_tt(&s, &clip_ranks(&s, 6).unwrap(), &mut RngStream::new(113, 0)).unwrap();
    let target = clip_ranks(&s, 3).unwrap();
    let x = tt_evaluate(&t).unwrap();
    let rounded = tt_round(&t, &target).unwrap();
    let (oracle, _) = tt_svd_truncated(&x, &target).unwrap();
    let e1 = norm(&x.sub(&tt_evaluate(&rounded).unwrap()).unwrap());
    let e2 = norm(&x.sub(&tt_evaluate(&oracle).unwrap()).unwrap());
    ensure!((e1 - e2).abs() <= 1e-10 * e2, "{e1} vs {e2}");
    Ok(())
}

fn gaussian_moments() -> Check {
    let mut rng = RngStream::new(114, 0);
    let v: Vec<f64> = (0..10_000).map(|_| rng.next_gaussian()).collect();
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
    ensure!(mean.abs() < 0.05 && (0.94..1.06).contains(&var), "mean {mean}, variance {var}");
    Ok(())
}

fn stream_independence() -> Check {
    let mut a = RngStream::new(115, 1);
    let mut b = RngStream::new(115, 2);
    let x: Vec<f64> = (0..10_000).map(|_| a.next_gaussian()).collect();
    let y: Vec<f64> = (0..10_000).map(|_| b.next_gaussian()).collect();
    let mx = x.iter().sum::<f64>() / 1e4;
    let my = y.iter().sum::<f64>() / 1e4;
    let cov: f64 = x.iter().zip(&y).map(|(p, q)| (p - mx) * (q - my)).sum();
    let vx: f64 = x.iter().map(|p| (p - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|q| (q - my).powi(2)).sum();
    let corr = cov / (vx * vy).sqrt();
    ensure!(corr.abs() < 0.05, "correlation {corr}");
    Ok(())
}

fn sparse_occupancy() -> Check {
    let s = shape(&[8, 8, 8]);
    let mut rng = RngStream::new(116, 0);
    let mut counts = vec![0u64; 512];
    for _ in 0..200 {
        let x = gaussian_sparse(&s, 50, &mut rng).unwrap();
        for k in 0..x.nnz() {
            let i = x.index(k);
            counts[i[0] * 64 + i[1] * 8 + i[2]] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / 512.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // Wilson-Hilferty upper 1% point of χ² with 511 degrees of freedom
    let df = 511.0f64;
    let h = 2.0 / (9.0 * df);
    let critical = df * (1.0 - h + 2.326_347_874 * h.sqrt()).powi(3);
    ensure!(chi2 <= critical, "χ² = {chi2} > {critical}");
    Ok(())
}

fn random_tt_unfolding_ranks() -> Check {
    let s = Shape::uniform(4, 4).unwrap();
    let x = tt_evaluate(&random_tt(&s, &clip_ranks(&s, 2).unwrap(), &mut RngStream::new(117, 0)).unwrap()).unwrap();
    for k in 1..4 {
        let m = matricize(&x, &ModeSet::leading(k, 4).unwrap()).unwrap();
        let sv = svd(&m).unwrap().s;
        let rank = numerical_rank(&sv, default_rank_tol(m.rows(), m.cols()));
        ensure!(rank == 2, "unfolding {k} has rank {rank}");
    }
    Ok(())
}

fn decay_profile() -> Check {
    let s = Shape::uniform(6, 4).unwrap();
    let decay = DecaySpec { exponent: 2.0, ..DecaySpec::default() };
    let t = random_tt_decay(&s, &clip_ranks(&s, 10).unwrap(), &decay, &mut RngStream::new(118, 0)).unwrap();
    let x = tt_evaluate(&t).unwrap();
    let m = matricize(&x, &ModeSet::leading(5, 6).unwrap()).unwrap();
    let sv = svd(&m).unwrap().s;
    for k in 1..=sv.len().min(5) {
        let ratio = sv[k - 1] / sv[0];
        let target = (k as f64).powi(-2);
        ensure!(ratio <= 3.0 * target && ratio >= target / 3.0, "σ_{k}/σ_1 = {ratio} vs {target}");
    }
    Ok(())
}

fn exact_tt_svd_round_trip() -> Check {
    let s = Shape::uniform(5, 3).unwrap();
    let ranks = clip_ranks(&s, 2).unwrap();
    let x = tt_evaluate(&random_tt(&s, &ranks, &mut RngStream::new(119, 0)).unwrap()).unwrap();
    let (t, _) = tt_svd_exact(&x, 1e-10).unwrap();
    ensure!(t.ranks() == &ranks, "ranks {:?}", t.ranks().as_slice());
    let e = relative_error(&x, &t).unwrap();
    ensure!(e <= 1e-11, "error {e}");
    Ok(())
}

fn range_bound_unit_parameters() -> Check {
    let sigma: Vec<f64> = (0..16).map(|k| 0.5f64.powi(k)).collect();
    let a = Matrix::diag(&sigma);
    let bound = range_error_bound_frobenius(&sigma, 4, 4, 1.0, 1.0).unwrap();
    let spec = ttsketch_core::OversamplingSpec::new(4, 4).unwrap();
    let hits = (0..100)
        .filter(|&trial| {
            let q = randomized_range(&a, spec, &RngStream::new(120, trial)).unwrap();
            range_residual(&a, &q) <= bound
        })
        .count();
    ensure!(hits >= 90, "{hits} of 100");
    Ok(())
}

fn matrix_case_equals_range_finder() -> Check {
    let s = shape(&[9, 7]);
    let x = random_tt_decay(&s, &RankTuple::new(vec![7]).unwrap(), &DecaySpec::default(), &mut RngStream::new(121, 0))
        .unwrap();
    let x = tt_evaluate(&x).unwrap();
    let rng = RngStream::new(121, 1);
    let (t, _) = randomized_tt_svd(&x, &RankTuple::new(vec![3]).unwrap(), &rng).unwrap();
    let err = norm(&x.sub(&tt_evaluate(&t).unwrap()).unwrap());
    let xt = Matrix::new(9, 7, x.data().to_vec()).unwrap().transpose();
    let q = randomized_range_with_sketch(&xt, &gaussian_sketch(&rng, 2, 9, 3)).unwrap();
    let residual = range_residual(&xt, &q);
    ensure!((err - residual).abs() <= 1e-12 * norm(&x), "{err} vs {residual}");
    Ok(())
}

fn sparse_equals_dense_order_twenty() -> Check {
    let s = Shape::uniform(20, 2).unwrap();
    let x = gaussian_sparse(&s, 500, &mut RngStream::new(122, 0)).unwrap();
    let dense = sparse_to_dense(&x).unwrap();
    let ranks = clip_ranks(&s, 20).unwrap();
    let rng = RngStream::new(122, 1);
    let (a, _) = randomized_tt_svd(&x, &ranks, &rng).unwrap();
    let (b, _) = randomized_tt_svd(&dense, &ranks, &rng).unwrap();
    compare_trains(&a, &b, 1e-10)
}

pub fn compare_trains(a: &TtTensor, b: &TtTensor, tol: f64) -> Check {
    ensure!(a.ranks() == b.ranks(), "ranks {:?} vs {:?}", a.ranks().as_slice(), b.ranks().as_slice());
    for (i, (ca, cb)) in a.cores().iter().zip(b.cores()).enumerate() {
        let diff = max_abs(ca.data(), cb.data());
        ensure!(diff <= tol, "core {i} differs by {diff}");
    }
    Ok(())
}

fn eta_values() -> Check {
    let a = compute_eta(10, 5, 1.0, 1.0).unwrap();
    ensure!((a - 7.6535).abs() <= 1e-3, "eta(10,5,1,1) = {a}");
    // 1 + 2·√36 + 3·2·e·√16/5 = 13 + 24e/5
    let b = compute_eta(12, 4, 2.0, 3.0).unwrap();
    ensure!((b - 26.047_752_776_603_4).abs() <= 1e-12, "eta(12,4,2,3) = {b}");
    Ok(())
}

fn relative_error_construction() -> Check {
    let s = Shape::uniform(3, 2).unwrap();
    let mut rng = RngStream::new(123, 0);
    let t = random_tt(&s, &clip_ranks(&s, 2).unwrap(), &mut rng).unwrap();
    let y = tt_evaluate(&t).unwrap();
    let yn = norm(&y);
    let e = gaussian_dense(&s, &mut rng).unwrap();
    let e = e.combine(1.0, &y, -inner(&e, &y).unwrap() / (yn * yn)).unwrap();
    let e = e.scaled(0.3 / norm(&e));
    let t = t.scaled((4.0f64 - 0.09).sqrt() / yn);
    let x = tt_evaluate(&t).unwrap().combine(1.0, &e, 1.0).unwrap();
    let v = relative_error(&x, &t).unwrap();
    ensure!((v - 0.15).abs() <= 1e-12, "{v}");
    Ok(())
}

fn als_exact_input() -> Check {
    let mut rng = RngStream::new(124, 0);
    for trial in 0..20 {
        let d = 3 + rng.below(3);
        let s = Shape::uniform(d, 2 + rng.below(3)).unwrap();
        let ranks = clip_ranks(&s, 1 + rng.below(3)).unwrap();
        let f = tt_evaluate(&random_tt(&s, &ranks, &mut rng).unwrap()).unwrap();
        let (_, obj) = als_half_sweep(&f, &AlsConfig::new(ranks, 1000 + trial)).unwrap();
        let j = *obj.last().unwrap();
        ensure!(j <= 1e-20 * norm(&f).powi(2), "trial {trial}: J = {j}");
    }
    Ok(())
}

fn als_monotonicity() -> Check {
    let mut rng = RngStream::new(125, 0);
    for trial in 0..50 {
        let d = 2 + rng.below(4);
        let s = Shape::uniform(d, 2 + rng.below(3)).unwrap();
        let f = gaussian_dense(&s, &mut rng).unwrap();
        let ranks = clip_ranks(&s, 1 + rng.below(4)).unwrap();
        let (_, obj) = als_half_sweep(&f, &AlsConfig::new(ranks, 2000 + trial)).unwrap();
        ensure!(obj.windows(2).all(|w| w[1] <= w[0] + 1e-12), "trial {trial}: {obj:?}");
    }
    Ok(())
}
