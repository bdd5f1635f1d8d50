//! Weights ablation on the segments-with-spheres geometry: select pivots
//! from the node matrix with and without inverse-density weights, then
//! measure the cross-approximation error on dense equispaced probe meshes
//! covering the segments only.
//!
//! Each side holds `n` segment points and `25 n` sphere points packed into a
//! ball of diameter `1/n`, so the square-rooted inverse point density is 1 on
//! the segments and proportional to `n^{-1/2}` in the spheres.

use skelfac_core::geometry::{segments_with_spheres, PointSet};
use skelfac_core::kernels::{assemble, Kernel, NamedKernel};
use skelfac_core::linalg::{cpqr_budget, lu_factor, DenseMatrix};
use skelfac_core::Result;

use crate::records::{Table, Value};

#[derive(Debug, Clone)]
pub struct WeightsConfig {
    /// Segment point count per side (`26 n` points per side in total).
    pub n: usize,
    /// Skeleton sizes to sweep.
    pub ranks: Vec<usize>,
    /// Equispaced probe points per segment for the error estimate.
    pub probes: usize,
}

impl Default for WeightsConfig {
    fn default() -> Self {
        Self {
            n: 200,
            ranks: vec![25, 50, 100, 150, 200, 250],
            probes: 10_000,
        }
    }
}

pub const WEIGHTS_COLUMNS: [&str; 3] = ["rank", "err_with_weights", "err_without_weights"];

/// Square-rooted selection weights for one side: 1 on the segment,
/// `n^{-1/2}` in the sphere.
fn side_weights(side: &PointSet, n: usize) -> Vec<f64> {
    let sphere_w = 1.0 / (n as f64).sqrt();
    (0..side.len())
        .map(|i| if i < n { 1.0 } else { sphere_w })
        .collect()
}

/// Equispaced probe points along one segment (sign picks the side).
fn segment_probes(n: usize, count: usize, sign: f64) -> PointSet {
    let eps = 1.0 / n as f64;
    let inner = 1.5 * eps;
    let mut out = PointSet::empty(3);
    for i in 0..count {
        let t = inner + i as f64 / (count - 1) as f64;
        out.push(&[sign * t, 0.0, 0.0]);
    }
    out
}

/// Row and column pivot orders of a (possibly weighted) node matrix, greedy
/// up to `max_rank`.
fn pivot_orders(k: &DenseMatrix, max_rank: usize) -> (Vec<usize>, Vec<usize>) {
    let cols = cpqr_budget(k, 0.0, Some(max_rank)).pivots().to_vec();
    let kt = k.transpose();
    let rows = cpqr_budget(&kt, 0.0, Some(max_rank)).pivots().to_vec();
    (rows, cols)
}

/// Per-rank relative Frobenius errors of
/// `K(Xp, Yhat_r) M_r^{-1} K(Xhat_r, Yp)` over the probe meshes. The
/// residual is streamed row by row and squared directly; forming the error
/// through the Gram trace identity cancels catastrophically once the error
/// drops below the square root of machine precision.
fn probe_errors(
    kernel: &dyn Kernel,
    xs: &PointSet,
    ys: &PointSet,
    rows: &[usize],
    cols: &[usize],
    xp: &PointSet,
    yp: &PointSet,
    ranks: &[usize],
) -> Result<Vec<Value>> {
    let rmax = rows.len().min(cols.len());
    let xhat = xs.subset(rows);
    let yhat = ys.subset(cols);
    let u_max = assemble(kernel, xp, &yhat)?; // |Xp| x rmax
    let b_max = assemble(kernel, &xhat, yp)?; // rmax x |Yp|

    let mut out = Vec::with_capacity(ranks.len());
    for &r in ranks {
        let r = r.min(rmax);
        let mid = DenseMatrix::from_fn(r, r, |i, j| kernel.eval(xhat.point(i), yhat.point(j)));
        let Ok(lu) = lu_factor(&mid) else {
            out.push(Value::Na);
            continue;
        };
        // A = U_r M^{-1}, solved through the LU factors
        let u_r_t = u_max.select_columns(&(0..r).collect::<Vec<_>>()).transpose();
        let a = lu.solve_transposed(&u_r_t)?.transpose(); // |Xp| x r

        let mut num = 0.0;
        let mut den = 0.0;
        let mut approx_row = vec![0.0; yp.len()];
        for (i, xi) in xp.iter().enumerate() {
            approx_row.fill(0.0);
            let ai = a.row(i);
            for (t, &at) in ai.iter().enumerate() {
                let bt = b_max.row(t);
                for (p, &b) in approx_row.iter_mut().zip(bt) {
                    *p += at * b;
                }
            }
            for (j, yj) in yp.iter().enumerate() {
                let truth = kernel.eval(xi, yj);
                let d = truth - approx_row[j];
                num += d * d;
                den += truth * truth;
            }
        }
        out.push(Value::Float((num / den).sqrt()));
    }
    Ok(out)
}

pub fn run_weights_demo(cfg: &WeightsConfig) -> Result<Table> {
    let kernel = NamedKernel::by_name("inv_r", 3)?;
    let (xs, ys) = segments_with_spheres(cfg.n)?;
    let sx = side_weights(&xs, cfg.n);
    let sy = side_weights(&ys, cfg.n);
    let max_rank = cfg.ranks.iter().copied().max().unwrap_or(0);

    let k = assemble(&kernel, &xs, &ys)?;

    // weighted selection: scale a copy of the node matrix on both sides
    let (rows_w, cols_w) = {
        let mut kw = k.clone();
        for i in 0..kw.rows() {
            let si = sx[i];
            let row = kw.row_mut(i);
            for (v, &sj) in row.iter_mut().zip(&sy) {
                *v *= si * sj;
            }
        }
        pivot_orders(&kw, max_rank)
    };
    let (rows_u, cols_u) = pivot_orders(&k, max_rank);
    drop(k);

    let xp = segment_probes(cfg.n, cfg.probes, -1.0);
    let yp = segment_probes(cfg.n, cfg.probes, 1.0);

    let err_w = probe_errors(&kernel, &xs, &ys, &rows_w, &cols_w, &xp, &yp, &cfg.ranks)?;
    let err_u = probe_errors(&kernel, &xs, &ys, &rows_u, &cols_u, &xp, &yp, &cfg.ranks)?;

    let mut table = Table::new(&WEIGHTS_COLUMNS);
    for ((&r, w), u) in cfg.ranks.iter().zip(err_w).zip(err_u) {
        table.push(vec![r.into(), w, u]);
    }
    Ok(table)
}
