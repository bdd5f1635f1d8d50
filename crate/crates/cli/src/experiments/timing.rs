//! Complexity measurements: kernel-evaluation counts (the machine-independent
//! metric) and wall-clock seconds for the skeletonized path against the naive
//! assemble-then-RRQR path, swept over mesh size, tolerance and separation.

use std::time::Instant;

use skelfac_core::geometry::{uniform_grid, AxisBox};
use skelfac_core::kernels::{assemble, CountingKernel, NamedKernel};
use skelfac_core::linalg::cpqr;
use skelfac_core::skeleton::{skeletonize, SkelOptions, DENSE_GUARD_ENTRIES};
use skelfac_core::Result;

use crate::experiments::squares_boxes;
use crate::records::{Table, Value};

#[derive(Debug, Clone)]
pub struct TimingConfig {
    /// Mesh sizes for the n sweep (rounded to the nearest square).
    pub ns: Vec<usize>,
    /// Tolerances for the tolerance sweep at fixed n.
    pub tols: Vec<f64>,
    /// Edge gaps for the separation sweep at fixed n and tolerance.
    pub separations: Vec<f64>,
    /// Tolerance used in the n and separation sweeps.
    pub tol_fixed: f64,
    /// Mesh size for the tolerance and separation sweeps.
    pub n_fixed: usize,
    pub kernel: String,
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self {
            ns: vec![1000, 4000, 16_000, 64_000],
            tols: vec![1e-2, 1e-4, 1e-6, 1e-8],
            separations: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            tol_fixed: 1e-8,
            n_fixed: 100_000,
            kernel: "inv_r".to_string(),
        }
    }
}

pub const TIMING_COLUMNS: [&str; 11] = [
    "mode",
    "n",
    "tol",
    "separation",
    "xbar",
    "ybar",
    "r1",
    "evals_si",
    "time_si_s",
    "evals_naive",
    "time_naive_s",
];

fn mesh_side(n: usize) -> usize {
    ((n as f64).sqrt().round() as usize).max(2)
}

struct SiMeasurement {
    xbar: usize,
    ybar: usize,
    r1: usize,
    evals: u64,
    seconds: f64,
}

/// Build the factorization and materialize the factors on `side^2` meshes,
/// metering evaluations.
fn measure_si(
    kernel: &NamedKernel,
    bx: &AxisBox,
    by: &AxisBox,
    side: usize,
    tol: f64,
) -> Result<SiMeasurement> {
    let x = uniform_grid(bx, &[side, side])?;
    let y = uniform_grid(by, &[side, side])?;
    let counting = CountingKernel::new(kernel);
    let t0 = Instant::now();
    let f = skeletonize(&counting, bx, by, tol, &SkelOptions::default())?;
    let _factors = f.factors(&x, &y)?;
    let seconds = t0.elapsed().as_secs_f64();
    Ok(SiMeasurement {
        xbar: f.grid_x().len(),
        ybar: f.grid_y().len(),
        r1: f.r1(),
        evals: counting.count(),
        seconds,
    })
}

pub fn run_timing(cfg: &TimingConfig) -> Result<Table> {
    let kernel = NamedKernel::by_name(&cfg.kernel, 2)?;
    let (bx, by) = squares_boxes();
    let mut table = Table::new(&TIMING_COLUMNS);

    // n sweep at fixed tolerance; the naive dense path runs only below the
    // assembly guard and is marked NA beyond it
    for &n in &cfg.ns {
        let side = mesh_side(n);
        let n_act = side * side;
        let si = measure_si(&kernel, &bx, &by, side, cfg.tol_fixed)?;

        let (evals_naive, time_naive) = if (n_act as u128) * (n_act as u128)
            <= DENSE_GUARD_ENTRIES
        {
            let x = uniform_grid(&bx, &[side, side])?;
            let y = uniform_grid(&by, &[side, side])?;
            let counting = CountingKernel::new(&kernel);
            let t0 = Instant::now();
            let k = assemble(&counting, &x, &y)?;
            let _qr = cpqr(&k, cfg.tol_fixed);
            (
                Value::Int(counting.count() as i64),
                Value::Float(t0.elapsed().as_secs_f64()),
            )
        } else {
            (Value::Na, Value::Na)
        };

        table.push(vec![
            "n_sweep".into(),
            n_act.into(),
            cfg.tol_fixed.into(),
            Value::Na,
            si.xbar.into(),
            si.ybar.into(),
            si.r1.into(),
            si.evals.into(),
            si.seconds.into(),
            evals_naive,
            time_naive,
        ]);
    }

    // tolerance sweep at fixed n
    let side = mesh_side(cfg.n_fixed);
    for &tol in &cfg.tols {
        let si = measure_si(&kernel, &bx, &by, side, tol)?;
        table.push(vec![
            "tol_sweep".into(),
            (side * side).into(),
            tol.into(),
            Value::Na,
            si.xbar.into(),
            si.ybar.into(),
            si.r1.into(),
            si.evals.into(),
            si.seconds.into(),
            Value::Na,
            Value::Na,
        ]);
    }

    // separation sweep at fixed n and tolerance: the gap controls the rank
    for &sep in &cfg.separations {
        let by_sep = AxisBox::new(vec![1.0 + sep, 1.0 + sep], vec![2.0 + sep, 2.0 + sep])?;
        let si = measure_si(&kernel, &bx, &by_sep, side, cfg.tol_fixed)?;
        table.push(vec![
            "sep_sweep".into(),
            (side * side).into(),
            cfg.tol_fixed.into(),
            sep.into(),
            si.xbar.into(),
            si.ybar.into(),
            si.r1.into(),
            si.evals.into(),
            si.seconds.into(),
            Value::Na,
            Value::Na,
        ]);
    }

    Ok(table)
}
