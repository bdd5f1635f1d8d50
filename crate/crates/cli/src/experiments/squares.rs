//! 2D squares rank/accuracy sweep: skeleton ranks and errors against the SVD
//! and RRQR reference ranks on two well-separated unit squares.

use skelfac_core::baselines::{rrqr_rank, svd_rank_from_values};
use skelfac_core::geometry::uniform_grid;
use skelfac_core::kernels::{assemble, NamedKernel};
use skelfac_core::linalg::singular_values;
use skelfac_core::skeleton::{skeletonize, SkelOptions};
use skelfac_core::Result;

use crate::experiments::squares_boxes;
use crate::records::Table;

#[derive(Debug, Clone)]
pub struct SquaresConfig {
    pub tols: Vec<f64>,
    pub mesh_per_side: usize,
    pub kernel: String,
    pub strong: bool,
    pub delta_exp: f64,
}

impl Default for SquaresConfig {
    fn default() -> Self {
        Self {
            tols: vec![1e-3, 1e-6, 1e-9, 1e-12],
            mesh_per_side: 50,
            kernel: "inv_r".to_string(),
            strong: false,
            delta_exp: 0.75,
        }
    }
}

pub const SQUARES_COLUMNS: [&str; 6] = ["tol", "r0", "r1", "r_rrqr", "r_svd", "err"];

pub fn run_squares2d(cfg: &SquaresConfig) -> Result<Table> {
    let kernel = NamedKernel::by_name(&cfg.kernel, 2)?;
    let (bx, by) = squares_boxes();
    let x = uniform_grid(&bx, &[cfg.mesh_per_side, cfg.mesh_per_side])?;
    let y = uniform_grid(&by, &[cfg.mesh_per_side, cfg.mesh_per_side])?;

    // one dense matrix and spectrum serve every tolerance
    let dense = assemble(&kernel, &x, &y)?;
    let sigma = singular_values(&dense);

    let opts = SkelOptions {
        strong_rrqr: cfg.strong,
        delta_exponent: cfg.delta_exp,
        ..SkelOptions::default()
    };

    let mut tols = cfg.tols.clone();
    tols.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let mut table = Table::new(&SQUARES_COLUMNS);
    for &tol in &tols {
        let f = skeletonize(&kernel, &bx, &by, tol, &opts)?;
        let err = f.error(&x, &y)?;
        let r_rrqr = rrqr_rank(&dense, tol);
        let r_svd = svd_rank_from_values(&sigma, tol);
        table.push(vec![
            tol.into(),
            f.r0().into(),
            f.r1().into(),
            r_rrqr.into(),
            r_svd.into(),
            err.into(),
        ]);
    }
    Ok(table)
}
