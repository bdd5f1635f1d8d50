//! 3D perpendicular-plates sweep: same ranks-and-error study as the squares,
//! on two 1 x 1.5 rectangular plates embedded in 3D.
//!
//! Plate X sits in the plane `x1 = -1` spanning `x2 in [0, 1]`,
//! `x3 in [0, 1.5]`; plate Y sits in `x3 = -1` spanning `x1 in [0, 1.5]`,
//! `x2 in [0, 1]`. Each plate is handled in its own 2D parameter box through
//! an affine embedding, so the whole pipeline runs in plate coordinates.

use skelfac_core::baselines::{rrqr_rank, svd_rank_from_values};
use skelfac_core::geometry::{uniform_grid, AxisBox};
use skelfac_core::kernels::{assemble, AffineEmbedding, EmbeddedKernel, NamedKernel};
use skelfac_core::linalg::singular_values;
use skelfac_core::skeleton::{skeletonize, SkelOptions};
use skelfac_core::Result;

use crate::records::Table;

#[derive(Debug, Clone)]
pub struct PlatesConfig {
    pub tols: Vec<f64>,
    /// Mesh points along the short (length-1) plate side; the long side gets
    /// half again as many to keep the mesh uniform.
    pub mesh_short_side: usize,
    pub kernel: String,
    pub strong: bool,
    pub delta_exp: f64,
}

impl Default for PlatesConfig {
    fn default() -> Self {
        Self {
            tols: vec![1e-3, 1e-6, 1e-9, 1e-12],
            mesh_short_side: 30,
            kernel: "inv_r".to_string(),
            strong: false,
            delta_exp: 0.75,
        }
    }
}

/// Parameter boxes and embeddings of the two plates.
pub fn plate_setup() -> Result<(AxisBox, AxisBox, AffineEmbedding, AffineEmbedding)> {
    let box_x = AxisBox::new(vec![0.0, 0.0], vec![1.0, 1.5])?;
    let box_y = AxisBox::new(vec![0.0, 0.0], vec![1.5, 1.0])?;
    let embed_x = AffineEmbedding::new(
        vec![-1.0, 0.0, 0.0],
        vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
    )?;
    let embed_y = AffineEmbedding::new(
        vec![0.0, 0.0, -1.0],
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
    )?;
    Ok((box_x, box_y, embed_x, embed_y))
}

pub const PLATES_COLUMNS: [&str; 6] = ["tol", "r0", "r1", "r_rrqr", "r_svd", "err"];

pub fn run_plates3d(cfg: &PlatesConfig) -> Result<Table> {
    let ambient = NamedKernel::by_name(&cfg.kernel, 3)?;
    let (box_x, box_y, embed_x, embed_y) = plate_setup()?;
    let kernel = EmbeddedKernel::new(&ambient, embed_x, embed_y)?;

    let short = cfg.mesh_short_side;
    let long = short + short / 2;
    let x = uniform_grid(&box_x, &[short, long])?;
    let y = uniform_grid(&box_y, &[long, short])?;

    let dense = assemble(&kernel, &x, &y)?;
    let sigma = singular_values(&dense);

    let opts = SkelOptions {
        strong_rrqr: cfg.strong,
        delta_exponent: cfg.delta_exp,
        ..SkelOptions::default()
    };

    let mut tols = cfg.tols.clone();
    tols.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let mut table = Table::new(&PLATES_COLUMNS);
    for &tol in &tols {
        let f = skeletonize(&kernel, &box_x, &box_y, tol, &opts)?;
        let err = f.error(&x, &y)?;
        table.push(vec![
            tol.into(),
            f.r0().into(),
            f.r1().into(),
            rrqr_rank(&dense, tol).into(),
            svd_rank_from_values(&sigma, tol).into(),
            err.into(),
        ]);
    }
    Ok(table)
}
