use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ttsketch::experiments::{deterministic_approximation, randomized_approximation};
use ttsketch::record::write_csv;
use ttsketch::stats::summarize;
use ttsketch::{CliError, Experiment, ExperimentConfig, Result};
use ttsketch_core::io::{read_tensor, write_tt, AnyTensor};
use ttsketch_core::random::RngStream;
use ttsketch_core::tt::tt_evaluate;
use ttsketch_core::TtError;

#[derive(Parser)]
#[command(name = "ttsketch", version, about = "Randomized and deterministic TT-SVD experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write one CSV row per sample and grid point.
    Run(RunArgs),
    /// Decompose a tensor read from a file and write the train.
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct RunArgs {
    experiment: Experiment,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rstar: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    nnz: Option<usize>,
    #[arg(long)]
    decay_exp: Option<f64>,
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long)]
    decay_rank: Option<usize>,
    #[arg(long)]
    decay_sweeps: Option<usize>,
    /// Comma-separated values of the varied parameter.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Output CSV; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    full_scale: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Det,
    Rand,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Rand)]
    method: Method,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 5)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(self.experiment);
        if self.full_scale {
            cfg = cfg.full_scale();
        }
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { cfg.$field = v; })* };
        }
        set!(d, n, rstar, r, p, tau, samples, nnz, decay_rank, repeats);
        cfg.seed = self.seed;
        if let Some(v) = self.decay_exp {
            cfg.decay.exponent = v;
        }
        if let Some(v) = self.cutoff {
            cfg.decay.cutoff = v;
        }
        if let Some(v) = self.decay_sweeps {
            cfg.decay.sweeps = v;
        }
        cfg.grid = self.grid.clone();
        cfg
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fmt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |v| format!("{v:.4e}"))
}

fn run(args: RunArgs) -> Result<()> {
    let cfg = args.config();
    let records = ttsketch::run(&cfg)?;
    let mut w = output(&args.out)?;
    write_csv(&mut w, &records)?;
    w.flush()?;
    let mut ids: Vec<&str> = Vec::new();
    for r in &records {
        if !ids.contains(&r.experiment.as_str()) {
            ids.push(&r.experiment);
        }
    }
    for id in ids {
        eprintln!("{id}: {} eps_det eps_rnd ratio t_rnd_ms t_det_ms", cfg.experiment.varied());
        for s in summarize(&records, id) {
            eprintln!(
                "  {} {} {} {} {} {}",
                s.param,
                fmt(s.mean_eps_det),
                fmt(s.mean_eps_rnd),
                fmt(s.mean_ratio),
                fmt(s.mean_t_rnd_ms),
                fmt(s.mean_t_det_ms)
            );
        }
    }
    Ok(())
}

fn decompose(args: DecomposeArgs) -> Result<()> {
    let x = read_tensor(File::open(&args.input)?)?;
    let dense = match &x {
        AnyTensor::Dense(x) => Some(x.clone()),
        AnyTensor::Sparse(_) => None,
        AnyTensor::Tt(t) => Some(tt_evaluate(t)?),
    };
    let rng = RngStream::new(args.seed, 0);
    let t = match (args.method, &x, &dense) {
        (Method::Det, _, Some(d)) => deterministic_approximation(d, args.r)?,
        (Method::Det, _, None) => {
            return Err(CliError::Core(TtError::Unsupported(
                "deterministic TT-SVD needs a dense input".into(),
            )))
        }
        (Method::Rand, AnyTensor::Sparse(s), _) => randomized_approximation(s, args.r, args.p, &rng)?,
        (Method::Rand, _, Some(d)) => randomized_approximation(d, args.r, args.p, &rng)?,
        (Method::Rand, _, None) => unreachable!("non-sparse inputs are densified"),
    };
    let mut w = output(&args.out)?;
    write_tt(&mut w, &t)?;
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Decompose(args) => decompose(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
