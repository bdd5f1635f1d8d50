use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use skelfac_cli::experiments::{
    self, ArcsConfig, DistanceConfig, PlatesConfig, SquaresConfig, TimingConfig, ToyConfig,
    WeightsConfig,
};
use skelfac_cli::records::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    /// Ranks and errors on two well-separated unit squares (2D).
    Squares2d,
    /// Ranks and errors on two perpendicular plates (3D).
    Plates3d,
    /// Accuracy at equal rank vs ACA and random CUR over a distance sweep.
    Distance,
    /// Greedy cross approximation failing on weakly coupled arcs.
    Arcs,
    /// Pivot selection with and without inverse-density weights.
    Weights,
    /// Kernel-evaluation counts and wall time vs the naive dense path.
    Timing,
    /// Cross-interpolation diagnostics on the 1D kernel 1/(4 + x - y).
    Toy,
}

impl Experiment {
    fn name(self) -> &'static str {
        match self {
            Experiment::Squares2d => "squares2d",
            Experiment::Plates3d => "plates3d",
            Experiment::Distance => "distance",
            Experiment::Arcs => "arcs",
            Experiment::Weights => "weights",
            Experiment::Timing => "timing",
            Experiment::Toy => "toy",
        }
    }
}

/// Low-rank kernel factorization benchmarks; each run writes one CSV file.
#[derive(Debug, Parser)]
#[command(name = "skelfac", version, about)]
struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: Experiment,

    /// Tolerance(s); repeat for a sweep. Defaults depend on the experiment.
    #[arg(long = "tol")]
    tols: Vec<f64>,

    /// Kernel name (inv_r, inv_r2, inv_r3, log_r, exp_neg_r, exp_neg_r2,
    /// toy_1d). Defaults depend on the experiment.
    #[arg(long)]
    kernel: Option<String>,

    /// Base seed for randomized experiments.
    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Output CSV path (default: <experiment>.csv).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Select pivots with the strong rank-revealing refinement.
    #[arg(long = "strong-rrqr", default_value_t = false)]
    strong_rrqr: bool,

    /// Grid-accuracy exponent: grids interpolate to eps^E.
    #[arg(long = "delta-exp", default_value_t = 0.75)]
    delta_exp: f64,
}

fn run(args: &Args) -> Result<Table, skelfac_core::Error> {
    match args.experiment {
        Experiment::Squares2d => {
            let mut cfg = SquaresConfig::default();
            if !args.tols.is_empty() {
                cfg.tols = args.tols.clone();
            }
            if let Some(k) = &args.kernel {
                cfg.kernel = k.clone();
            }
            cfg.strong = args.strong_rrqr;
            cfg.delta_exp = args.delta_exp;
            experiments::run_squares2d(&cfg)
        }
        Experiment::Plates3d => {
            let mut cfg = PlatesConfig::default();
            if !args.tols.is_empty() {
                cfg.tols = args.tols.clone();
            }
            if let Some(k) = &args.kernel {
                cfg.kernel = k.clone();
            }
            cfg.strong = args.strong_rrqr;
            cfg.delta_exp = args.delta_exp;
            experiments::run_plates3d(&cfg)
        }
        Experiment::Distance => {
            let mut cfg = DistanceConfig {
                seed: args.seed,
                ..DistanceConfig::default()
            };
            if let Some(&eps) = args.tols.first() {
                cfg.eps = eps;
            }
            if let Some(k) = &args.kernel {
                cfg.kernel = k.clone();
            }
            let table = experiments::run_distance_comparison(&cfg)?;
            for s in experiments::summarize_distance(&table) {
                println!(
                    "distance {:>5}: r1 {:>3} | median err si {:.3e} aca {:.3e} cur {:.3e} | iqr si {:.3e} cur {:.3e} | cur failures {}",
                    s.distance, s.r1, s.median_si, s.median_aca, s.median_cur, s.iqr_si, s.iqr_cur, s.cur_failures
                );
            }
            Ok(table)
        }
        Experiment::Arcs => {
            let mut cfg = ArcsConfig {
                strong: args.strong_rrqr,
                ..ArcsConfig::default()
            };
            if let Some(k) = &args.kernel {
                cfg.kernel = k.clone();
            }
            experiments::run_arc_aca_failure(&cfg)
        }
        Experiment::Weights => experiments::run_weights_demo(&WeightsConfig::default()),
        Experiment::Timing => {
            let mut cfg = TimingConfig::default();
            if !args.tols.is_empty() {
                cfg.tols = args.tols.clone();
            }
            if let Some(k) = &args.kernel {
                cfg.kernel = k.clone();
            }
            experiments::run_timing(&cfg)
        }
        Experiment::Toy => {
            let mut cfg = ToyConfig::default();
            if let Some(&eps) = args.tols.first() {
                cfg.eps = eps;
            }
            experiments::run_toy_diagnostics(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", args.experiment.name())));
    match run(&args) {
        Ok(table) => {
            if let Err(e) = table.write_csv(&out) {
                eprintln!("error: cannot write {}: {e}", out.display());
                return ExitCode::FAILURE;
            }
            println!("{}: {} rows -> {}", args.experiment.name(), table.len(), out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
