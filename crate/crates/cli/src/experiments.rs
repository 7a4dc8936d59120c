//! Runners for the individual experiments.
//!
//! Every sample owns a stream derived from `(seed, sample)`. Its child 0
//! generates the target and child `1 + k` drives the randomized algorithm at
//! grid point `k`, so results do not depend on execution order and targets
//! that do not depend on the grid value are shared across grid points.

use std::time::Instant;

use rayon::prelude::*;
use ttsketch_core::als::{als_half_sweep, AlsConfig};
use ttsketch_core::decompose::{
    randomized_tt_svd, relative_error, relative_error_sparse, tt_svd_truncated,
};
use ttsketch_core::random::{gaussian_sparse, noisy_low_rank, random_tt_decay, RngStream};
use ttsketch_core::tensor::sparse_to_dense;
use ttsketch_core::tt::{clip_ranks, tt_evaluate, tt_round, TtTensor};
use ttsketch_core::{DenseTensor, Shape};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::Result;
use crate::record::SampleRecord;
use crate::stats::median;

/// Dense element count up to which the runtime experiment also times the
/// deterministic TT-SVD.
pub const RUNTIME_DENSE_LIMIT: u128 = 1 << 20;

/// Runs the configured experiment; records are ordered by sample, then grid point.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::Noise => run_noise(cfg),
        Experiment::Oversampling | Experiment::OversamplingDecay => run_oversampling(cfg),
        Experiment::Order | Experiment::OrderDecay => run_order(cfg),
        Experiment::Runtime => run_runtime(cfg),
        Experiment::Als => run_als(cfg),
    }
}

fn sample_stream(cfg: &ExperimentConfig, sample: usize) -> RngStream {
    RngStream::new(cfg.seed, 0).substream(sample as u64)
}

fn target_stream(cfg: &ExperimentConfig, sample: usize) -> RngStream {
    sample_stream(cfg, sample).substream(0)
}

fn algorithm_stream(cfg: &ExperimentConfig, sample: usize, grid_index: usize) -> RngStream {
    sample_stream(cfg, sample).substream(1 + grid_index as u64)
}

/// Runs `f` once per sample in parallel and flattens the per-sample records.
fn per_sample(
    cfg: &ExperimentConfig,
    f: impl Fn(usize) -> Result<Vec<SampleRecord>> + Sync,
) -> Result<Vec<SampleRecord>> {
    let chunks: Vec<Vec<SampleRecord>> = (0..cfg.samples)
        .into_par_iter()
        .map(&f)
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Result of `f` and its wall time in milliseconds: one untimed warm-up run and
/// the median of `repeats` timed runs, or a single timed run if `repeats == 0`.
pub fn timed<T>(repeats: usize, mut f: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let mut once = || -> Result<(T, f64)> {
        let start = Instant::now();
        let out = f()?;
        Ok((out, start.elapsed().as_secs_f64() * 1e3))
    };
    if repeats == 0 {
        return once();
    }
    once()?;
    let mut times = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let (out, ms) = once()?;
        times.push(ms);
        last = Some(out);
    }
    Ok((last.expect("at least one repeat"), median(&times).expect("nonempty")))
}

/// Deterministic TT-SVD at rank `r`.
pub fn deterministic_approximation(x: &DenseTensor, r: usize) -> Result<TtTensor> {
    let ranks = clip_ranks(x.shape(), r)?;
    Ok(tt_svd_truncated(x, &ranks)?.0)
}

/// Randomized TT-SVD at rank `r + p`, rounded to rank `r`.
pub fn randomized_approximation<'a>(
    x: impl Into<ttsketch_core::TensorRef<'a>>,
    r: usize,
    p: usize,
    rng: &RngStream,
) -> Result<TtTensor> {
    let x = x.into();
    let shape = x.shape().clone();
    let (sketched, _) = randomized_tt_svd(x, &clip_ranks(&shape, r + p)?, rng)?;
    Ok(tt_round(&sketched, &clip_ranks(&shape, r)?)?)
}

/// One ALS half-sweep at rank `r + p` from a random start, rounded to rank `r`.
pub fn als_approximation(x: &DenseTensor, r: usize, p: usize, rng: &RngStream) -> Result<TtTensor> {
    let mut cfg = AlsConfig::new(clip_ranks(x.shape(), r + p)?, rng.seed());
    cfg.stream = rng.stream();
    let (t, _) = als_half_sweep(x, &cfg)?;
    Ok(tt_round(&t, &clip_ranks(x.shape(), r)?)?)
}

struct Comparison {
    eps_det: f64,
    eps_rnd: f64,
    t_det_ms: f64,
    t_rnd_ms: f64,
}

impl Comparison {
    fn record(&self, experiment: &str, sample: usize, cfg: &ExperimentConfig, param: f64) -> SampleRecord {
        SampleRecord {
            experiment: experiment.to_string(),
            sample,
            seed: cfg.seed,
            param,
            eps_det: Some(self.eps_det),
            eps_rnd: Some(self.eps_rnd),
            ratio: SampleRecord::ratio_of(Some(self.eps_det), Some(self.eps_rnd)),
            t_rnd_ms: Some(self.t_rnd_ms),
            t_det_ms: Some(self.t_det_ms),
        }
    }
}

fn deterministic_error(x: &DenseTensor, r: usize, repeats: usize) -> Result<(f64, f64)> {
    let (t, ms) = timed(repeats, || deterministic_approximation(x, r))?;
    Ok((relative_error(x, &t)?, ms))
}

fn compare(x: &DenseTensor, r: usize, p: usize, rng: &RngStream, repeats: usize) -> Result<Comparison> {
    let (eps_det, t_det_ms) = deterministic_error(x, r, repeats)?;
    let (t, t_rnd_ms) = timed(repeats, || randomized_approximation(x, r, p, rng))?;
    Ok(Comparison {
        eps_det,
        eps_rnd: relative_error(x, &t)?,
        t_det_ms,
        t_rnd_ms,
    })
}

fn noisy_target(cfg: &ExperimentConfig, shape: &Shape, tau: f64, rng: &mut RngStream) -> Result<DenseTensor> {
    Ok(noisy_low_rank(shape, &clip_ranks(shape, cfg.rstar)?, tau, rng)?.0)
}

fn decay_target(cfg: &ExperimentConfig, shape: &Shape, rng: &mut RngStream) -> Result<DenseTensor> {
    let t = random_tt_decay(shape, &clip_ranks(shape, cfg.decay_rank)?, &cfg.decay, rng)?;
    Ok(tt_evaluate(&t)?)
}

fn grid_usize(v: f64) -> usize {
    v as usize
}

/// Noisy low-rank targets over a grid of noise levels.
pub fn run_noise(cfg: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    let shape = Shape::uniform(cfg.d, cfg.n)?;
    let grid = cfg.grid();
    per_sample(cfg, |sample| {
        grid.iter()
            .enumerate()
            .map(|(k, &tau)| {
                let x = noisy_target(cfg, &shape, tau, &mut target_stream(cfg, sample))?;
                let c = compare(&x, cfg.r, cfg.p, &algorithm_stream(cfg, sample, k), cfg.repeats)?;
                Ok(c.record(cfg.experiment.id(), sample, cfg, tau))
            })
            .collect()
    })
}

/// Fixed target per sample (noisy or decaying spectrum) over a grid of oversampling values.
pub fn run_oversampling(cfg: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    let shape = Shape::uniform(cfg.d, cfg.n)?;
    let grid = cfg.grid();
    per_sample(cfg, |sample| {
        let mut rng = target_stream(cfg, sample);
        let x = match cfg.experiment {
            Experiment::OversamplingDecay => decay_target(cfg, &shape, &mut rng)?,
            _ => noisy_target(cfg, &shape, cfg.tau, &mut rng)?,
        };
        let (eps_det, t_det_ms) = deterministic_error(&x, cfg.r, cfg.repeats)?;
        grid.iter()
            .enumerate()
            .map(|(k, &p)| {
                let rng = algorithm_stream(cfg, sample, k);
                let (t, t_rnd_ms) =
                    timed(cfg.repeats, || randomized_approximation(&x, cfg.r, grid_usize(p), &rng))?;
                let c = Comparison {
                    eps_det,
                    eps_rnd: relative_error(&x, &t)?,
                    t_det_ms,
                    t_rnd_ms,
                };
                Ok(c.record(cfg.experiment.id(), sample, cfg, p))
            })
            .collect()
    })
}

/// Targets of growing order.
pub fn run_order(cfg: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    let grid = cfg.grid();
    per_sample(cfg, |sample| {
        grid.iter()
            .enumerate()
            .map(|(k, &d)| {
                let shape = Shape::uniform(grid_usize(d), cfg.n)?;
                let mut rng = target_stream(cfg, sample).substream(k as u64);
                let x = match cfg.experiment {
                    Experiment::OrderDecay => decay_target(cfg, &shape, &mut rng)?,
                    _ => noisy_target(cfg, &shape, cfg.tau, &mut rng)?,
                };
                let c = compare(&x, cfg.r, cfg.p, &algorithm_stream(cfg, sample, k), cfg.repeats)?;
                Ok(c.record(cfg.experiment.id(), sample, cfg, d))
            })
            .collect()
    })
}

/// Sparse Gaussian targets of growing order; wall times of the randomized
/// path, plus the deterministic path where the dense tensor is small enough.
///
/// Runs sequentially so timings are not disturbed by other samples.
pub fn run_runtime(cfg: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    let grid = cfg.grid();
    let mut out = Vec::with_capacity(cfg.samples * grid.len());
    for sample in 0..cfg.samples {
        for (k, &d) in grid.iter().enumerate() {
            let shape = Shape::uniform(grid_usize(d), cfg.n)?;
            let mut rng = target_stream(cfg, sample).substream(k as u64);
            let nnz = match shape.element_count() {
                Some(count) => cfg.nnz.min(usize::try_from(count).unwrap_or(usize::MAX)),
                None => cfg.nnz,
            };
            let x = gaussian_sparse(&shape, nnz, &mut rng)?;
            let alg = algorithm_stream(cfg, sample, k);
            let (t, t_rnd_ms) = timed(cfg.repeats, || randomized_approximation(&x, cfg.r, cfg.p, &alg))?;
            let eps_rnd = relative_error_sparse(&x, &t)?;
            let (eps_det, t_det_ms) = match shape.element_count() {
                Some(count) if count <= RUNTIME_DENSE_LIMIT => {
                    let dense = sparse_to_dense(&x)?;
                    let (e, ms) = deterministic_error(&dense, cfg.r, cfg.repeats)?;
                    (Some(e), Some(ms))
                }
                _ => (None, None),
            };
            out.push(SampleRecord {
                experiment: cfg.experiment.id().to_string(),
                sample,
                seed: cfg.seed,
                param: d,
                eps_det,
                eps_rnd: Some(eps_rnd),
                ratio: SampleRecord::ratio_of(eps_det, Some(eps_rnd)),
                t_rnd_ms: Some(t_rnd_ms),
                t_det_ms,
            });
        }
    }
    Ok(out)
}

/// Decaying-spectrum targets over a grid of oversampling values. Emits an
/// `als` record (ALS half-sweep error in the `eps_rnd` column) and an
/// `als-randomized` record (randomized TT-SVD on the same target) per point.
pub fn run_als(cfg: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    let shape = Shape::uniform(cfg.d, cfg.n)?;
    let grid = cfg.grid();
    per_sample(cfg, |sample| {
        let x = decay_target(cfg, &shape, &mut target_stream(cfg, sample))?;
        let (eps_det, t_det_ms) = deterministic_error(&x, cfg.r, cfg.repeats)?;
        let mut records = Vec::with_capacity(2 * grid.len());
        for (k, &p) in grid.iter().enumerate() {
            let rng = algorithm_stream(cfg, sample, k);
            let p_int = grid_usize(p);
            let (t, t_als_ms) = timed(cfg.repeats, || als_approximation(&x, cfg.r, p_int, &rng))?;
            let als = Comparison {
                eps_det,
                eps_rnd: relative_error(&x, &t)?,
                t_det_ms,
                t_rnd_ms: t_als_ms,
            };
            records.push(als.record("als", sample, cfg, p));
            let (t, t_rnd_ms) = timed(cfg.repeats, || randomized_approximation(&x, cfg.r, p_int, &rng))?;
            let rnd = Comparison {
                eps_det,
                eps_rnd: relative_error(&x, &t)?,
                t_det_ms,
                t_rnd_ms,
            };
            records.push(rnd.record("als-randomized", sample, cfg, p));
        }
        Ok(records)
    })
}
