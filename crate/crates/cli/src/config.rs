use clap::ValueEnum;
use ttsketch_core::random::DecaySpec;

use crate::error::{CliError, Result};

/// Samples per grid point at desk scale.
pub const DESK_SAMPLES: usize = 32;
/// Samples per grid point with `--full-scale`.
pub const FULL_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// Nearly low-rank targets, varying the noise level.
    Noise,
    /// Nearly low-rank targets, varying the oversampling.
    Oversampling,
    /// Decaying-spectrum targets, varying the oversampling.
    OversamplingDecay,
    /// Nearly low-rank targets, varying the order.
    Order,
    /// Decaying-spectrum targets, varying the order.
    OrderDecay,
    /// Sparse targets, varying the order; records wall times.
    Runtime,
    /// ALS half-sweep against the randomized TT-SVD on decaying spectra.
    Als,
}

impl Experiment {
    pub fn id(self) -> &'static str {
        match self {
            Experiment::Noise => "noise",
            Experiment::Oversampling => "oversampling",
            Experiment::OversamplingDecay => "oversampling-decay",
            Experiment::Order => "order",
            Experiment::OrderDecay => "order-decay",
            Experiment::Runtime => "runtime",
            Experiment::Als => "als",
        }
    }

    /// The grid parameter: `tau`, `p` or `d`.
    pub fn varied(self) -> &'static str {
        match self {
            Experiment::Noise => "tau",
            Experiment::Oversampling | Experiment::OversamplingDecay | Experiment::Als => "p",
            Experiment::Order | Experiment::OrderDecay | Experiment::Runtime => "d",
        }
    }

    pub fn default_grid(self) -> Vec<f64> {
        match self {
            Experiment::Noise => (0..=10).map(|k| k as f64 / 100.0).collect(),
            Experiment::Oversampling | Experiment::OversamplingDecay | Experiment::Als => {
                vec![0.0, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 17.0, 25.0]
            }
            Experiment::Order | Experiment::OrderDecay => (4..=13).map(f64::from).collect(),
            Experiment::Runtime => vec![10.0, 20.0, 40.0, 60.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub d: usize,
    pub n: usize,
    /// Exact rank of the low-rank part of noisy targets.
    pub rstar: usize,
    /// Final rank of every approximation.
    pub r: usize,
    pub p: usize,
    pub tau: f64,
    pub samples: usize,
    pub seed: u64,
    pub decay: DecaySpec,
    /// Rank of the random train the decay construction starts from.
    pub decay_rank: usize,
    /// Nonzeros of sparse runtime targets.
    pub nnz: usize,
    /// Values of the varied parameter; `None` selects the default grid.
    pub grid: Option<Vec<f64>>,
    /// Timed repetitions per record after one discarded warm-up; `0` times a
    /// single run with no warm-up.
    pub repeats: usize,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        let (n, r, p) = match experiment {
            Experiment::Runtime => (2, 10, 10),
            _ => (4, 10, 5),
        };
        Self {
            experiment,
            d: 10,
            n,
            rstar: 10,
            r,
            p,
            tau: 0.05,
            samples: DESK_SAMPLES,
            seed: 0,
            decay: DecaySpec::default(),
            decay_rank: DecaySpec::default().cutoff,
            nnz: 500,
            grid: None,
            repeats: if experiment == Experiment::Runtime { 3 } else { 0 },
        }
    }

    pub fn full_scale(mut self) -> Self {
        self.samples = FULL_SAMPLES;
        self
    }

    pub fn grid(&self) -> Vec<f64> {
        self.grid.clone().unwrap_or_else(|| self.experiment.default_grid())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.n == 0 || self.r == 0 || self.rstar == 0 || self.samples == 0 {
            return bad("n, r, rstar and samples must be positive".into());
        }
        if self.decay_rank == 0 {
            return bad("decay rank must be positive".into());
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return bad(format!("tau must be nonnegative, got {}", self.tau));
        }
        let grid = self.grid();
        if grid.is_empty() {
            return bad("empty parameter grid".into());
        }
        for &v in &grid {
            let integral = v >= 0.0 && v.fract() == 0.0;
            match self.experiment.varied() {
                "tau" if !(v >= 0.0 && v.is_finite()) => return bad(format!("tau value {v}")),
                "p" if !integral => return bad(format!("oversampling value {v}")),
                "d" if !integral || v < 2.0 => return bad(format!("order value {v}")),
                _ => {}
            }
        }
        if self.experiment.varied() != "d" && self.d < 2 {
            return bad(format!("order must be at least 2, got {}", self.d));
        }
        Ok(())
    }
}
