//! Pivot-quality comparison at equal rank: skeletonized interpolation versus
//! adaptive cross approximation and random CUR, on two unit squares with a
//! varying gap between their closest edges, over seeded mesh-subsample
//! trials.

use skelfac_core::baselines::{aca, random_cur};
use skelfac_core::chebyshev::{grid_sizes_for_delta, tensor_grid};
use skelfac_core::geometry::{random_points, AxisBox};
use skelfac_core::kernels::{assemble, Kernel, NamedKernel};
use skelfac_core::skeleton::{skeletonize_on_grids, SkelFactorization, SkelOptions};
use skelfac_core::{Error, Result};

use crate::experiments::derive_seed;
use crate::records::{iqr, median, Table, Value};

#[derive(Debug, Clone)]
pub struct DistanceConfig {
    /// Gaps between the squares' closest edges, in units of the side length.
    pub distances: Vec<f64>,
    pub trials: usize,
    pub eps: f64,
    pub seed: u64,
    pub kernel: String,
    /// Points subsampled per square and trial from the 100 x 100 mesh.
    pub sample: usize,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        Self {
            distances: vec![0.35, 0.5, 1.0, 2.0, 4.0],
            trials: 25,
            eps: 1e-8,
            seed: 7,
            kernel: "inv_r".to_string(),
            sample: 500,
        }
    }
}

pub const DISTANCE_COLUMNS: [&str; 6] = ["distance", "trial", "r1", "err_si", "err_aca", "err_cur"];

/// Smallest grids whose factorization actually reaches `eps` on a validation
/// mesh of the same kind the trials use. The midpoint-fiber sizing
/// underestimates when the boxes nearly touch (the worst corner fibers are
/// much rougher than the midpoint ones), so the counts escalate until the
/// measured error meets the tolerance, keeping the skeleton size r1 as small
/// as the target allows.
fn skeletonize_to_target<'k>(
    kernel: &'k dyn Kernel,
    bx: &AxisBox,
    by: &AxisBox,
    eps: f64,
    sample: usize,
    seed: u64,
    opts: &SkelOptions,
) -> Result<SkelFactorization<'k>> {
    let vx = random_points(bx, sample, derive_seed(seed, u64::MAX, 0))?;
    let vy = random_points(by, sample, derive_seed(seed, u64::MAX, 1))?;
    let (mut cx, mut cy) =
        grid_sizes_for_delta(kernel, bx, by, eps.powf(opts.delta_exponent), opts.max_nodes_per_dim)?;
    let mut best = None;
    for _ in 0..48 {
        let f = skeletonize_on_grids(
            kernel,
            tensor_grid(bx, &cx)?,
            tensor_grid(by, &cy)?,
            eps,
            opts,
        )?;
        let err = f.error(&vx, &vy)?;
        best = Some(f);
        if err <= eps {
            break;
        }
        for c in cx.iter_mut().chain(cy.iter_mut()) {
            *c += 1;
        }
    }
    Ok(best.expect("at least one factorization attempt"))
}

pub fn run_distance_comparison(cfg: &DistanceConfig) -> Result<Table> {
    let kernel = NamedKernel::by_name(&cfg.kernel, 2)?;
    let opts = SkelOptions::default();
    let mut table = Table::new(&DISTANCE_COLUMNS);

    for (di, &d) in cfg.distances.iter().enumerate() {
        let bx = AxisBox::cube(&[0.0, 0.0], 1.0)?;
        let by = AxisBox::new(vec![1.0 + d, 0.0], vec![2.0 + d, 1.0])?;
        // the pivot sets depend only on the boxes, not on the sampled meshes
        let f = skeletonize_to_target(&kernel, &bx, &by, cfg.eps, cfg.sample, cfg.seed, &opts)?;
        let r1 = f.r1();

        for trial in 0..cfg.trials {
            let x = random_points(&bx, cfg.sample, derive_seed(cfg.seed, di as u64, 3 * trial as u64))?;
            let y = random_points(
                &by,
                cfg.sample,
                derive_seed(cfg.seed, di as u64, 3 * trial as u64 + 1),
            )?;

            let err_si = f.error(&x, &y)?;
            let dense = assemble(&kernel, &x, &y)?;
            let err_aca = aca(&dense, r1, 0.0)?.pair.rel_error(&dense);
            // singular random-CUR trials are kept as failures, not dropped
            let err_cur = match random_cur(
                &kernel,
                &x,
                &y,
                r1,
                derive_seed(cfg.seed, di as u64, 3 * trial as u64 + 2),
            ) {
                Ok(pair) => Value::Float(pair.rel_error(&dense)),
                Err(Error::CurMiddleSingular { .. }) => Value::Na,
                Err(e) => return Err(e),
            };

            table.push(vec![
                d.into(),
                trial.into(),
                r1.into(),
                err_si.into(),
                err_aca.into(),
                err_cur,
            ]);
        }
    }
    Ok(table)
}

/// 25/50/75% summaries per distance; CUR failures count as infinite errors.
#[derive(Debug, Clone)]
pub struct DistanceSummary {
    pub distance: f64,
    pub r1: usize,
    pub median_si: f64,
    pub median_aca: f64,
    pub median_cur: f64,
    pub iqr_si: f64,
    pub iqr_cur: f64,
    pub cur_failures: usize,
}

pub fn summarize_distance(table: &Table) -> Vec<DistanceSummary> {
    let mut distances: Vec<f64> = Vec::new();
    for r in 0..table.len() {
        let d = table.get(r, "distance").as_f64().unwrap();
        if !distances.contains(&d) {
            distances.push(d);
        }
    }
    distances
        .into_iter()
        .map(|d| {
            let rows: Vec<usize> = (0..table.len())
                .filter(|&r| table.get(r, "distance").as_f64() == Some(d))
                .collect();
            let pick = |col: &str| -> Vec<f64> {
                rows.iter()
                    .map(|&r| table.get(r, col).as_f64().unwrap_or(f64::INFINITY))
                    .collect()
            };
            let si = pick("err_si");
            let aca = pick("err_aca");
            let cur = pick("err_cur");
            DistanceSummary {
                distance: d,
                r1: table.get(rows[0], "r1").as_i64().unwrap() as usize,
                median_si: median(&si),
                median_aca: median(&aca),
                median_cur: median(&cur),
                iqr_si: iqr(&si),
                iqr_cur: iqr(&cur),
                cur_failures: rows
                    .iter()
                    .filter(|&&r| table.get(r, "err_cur").is_na())
                    .count(),
            }
        })
        .collect()
}
