//! Diagnostics on the 1D kernel `1/(4 + x - y)` over `[-1, 1]^2`: the
//! cross-interpolation Lagrange functions against classical polynomial
//! Lagrange through the same nodes, and the per-singular-function
//! interpolation errors against `eps / sigma_i`.
//!
//! Emits one table with a `series` column: `lagrange` rows hold the probe
//! curves (x, s_hat, s_poly for the 4th node in ascending order), `singfun`
//! rows hold per-singular-function data (i, sigma_i, eps_over_sigma,
//! err_u_i). Singular functions come from a dense SVD of a fine-grid node
//! matrix with quadrature normalization.

use skelfac_core::chebyshev::{tensor_grid, Lagrange1d};
use skelfac_core::geometry::AxisBox;
use skelfac_core::kernels::{Kernel, NamedKernel};
use skelfac_core::linalg::{dot, svd_thin};
use skelfac_core::skeleton::{skeletonize, weighted_node_matrix, SkelFactorization, SkelOptions};
use skelfac_core::Result;

use crate::records::{Table, Value};

#[derive(Debug, Clone)]
pub struct ToyConfig {
    pub eps: f64,
    /// Fine-grid size for the singular-function reference.
    pub fine_nodes: usize,
    /// Probe points on `[-1, 1]` for both curve emission and error suprema.
    pub probes: usize,
}

impl Default for ToyConfig {
    fn default() -> Self {
        Self {
            eps: 1e-10,
            fine_nodes: 250,
            probes: 1001,
        }
    }
}

pub const TOY_COLUMNS: [&str; 8] = [
    "series",
    "i",
    "x",
    "sigma_i",
    "eps_over_sigma",
    "err_u_i",
    "s_hat",
    "s_poly",
];

/// Discrete left singular functions of the kernel, evaluable anywhere:
/// `u_i(x) = (1/sigma_i) sum_l sqrt(w_l) K(x, y_l) V[l][i]`.
pub struct SingularFunctions {
    pub sigma: Vec<f64>,
    nodes: Vec<f64>,
    sqrt_w: Vec<f64>,
    /// `vt[(i, l)]` = l-th component of the i-th right singular vector.
    vt: skelfac_core::DenseMatrix,
}

impl SingularFunctions {
    pub fn compute(kernel: &dyn Kernel, boxd: &AxisBox, fine_nodes: usize) -> Result<Self> {
        let fine = tensor_grid(boxd, &[fine_nodes])?;
        let kw = weighted_node_matrix(kernel, &fine, &fine)?;
        let svd = svd_thin(&kw);
        let nodes: Vec<f64> = fine.flat_points().iter().map(|p| p[0]).collect();
        let sqrt_w: Vec<f64> = fine.flat_weights().iter().map(|w| w.sqrt()).collect();
        Ok(Self {
            sigma: svd.sigma,
            nodes,
            sqrt_w,
            vt: svd.vt,
        })
    }

    pub fn eval(&self, kernel: &dyn Kernel, i: usize, x: f64) -> f64 {
        let mut acc = 0.0;
        for (l, &yl) in self.nodes.iter().enumerate() {
            acc += self.sqrt_w[l] * kernel.probe(&[x], &[yl]) * self.vt[(i, l)];
        }
        acc / self.sigma[i]
    }
}

/// Column of the factorization's `s_hat` operator belonging to the `k`-th
/// pivot in ascending coordinate order (0-based), plus the sorted pivots.
pub fn sorted_pivot_column(f: &SkelFactorization, k: usize) -> (usize, Vec<f64>) {
    let mut order: Vec<usize> = (0..f.r1()).collect();
    order.sort_by(|&a, &b| {
        f.xhat().point(a)[0]
            .partial_cmp(&f.xhat().point(b)[0])
            .unwrap()
    });
    let sorted: Vec<f64> = order.iter().map(|&i| f.xhat().point(i)[0]).collect();
    (order[k.min(f.r1() - 1)], sorted)
}

pub fn run_toy_diagnostics(cfg: &ToyConfig) -> Result<Table> {
    let toy = NamedKernel::toy_1d();
    let b = AxisBox::new(vec![-1.0], vec![1.0])?;
    let f = skeletonize(&toy, &b, &b, cfg.eps, &SkelOptions::default())?;
    let r1 = f.r1();

    let probes: Vec<f64> = (0..cfg.probes)
        .map(|i| -1.0 + 2.0 * i as f64 / (cfg.probes - 1) as f64)
        .collect();

    let mut table = Table::new(&TOY_COLUMNS);

    // 4th Lagrange function (ascending node order) of the cross operator
    // against the classical polynomial through the same node set
    let (col, sorted_nodes) = sorted_pivot_column(&f, 3);
    let sorted_idx = 3.min(r1 - 1);
    let poly = Lagrange1d::new(&sorted_nodes);
    for &x in &probes {
        let s_hat = f.s_hat_row(&[x])?[col];
        let s_poly = poly.row(x)[sorted_idx];
        table.push(vec![
            "lagrange".into(),
            Value::Na,
            x.into(),
            Value::Na,
            Value::Na,
            Value::Na,
            s_hat.into(),
            s_poly.into(),
        ]);
    }

    // interpolation error on each discrete left singular function
    let sf = SingularFunctions::compute(&toy, &b, cfg.fine_nodes)?;
    for i in 0..r1 {
        let u_at_pivots: Vec<f64> = f
            .xhat()
            .iter()
            .map(|p| sf.eval(&toy, i, p[0]))
            .collect();
        let mut err = 0.0f64;
        for &x in &probes {
            let s_row = f.s_hat_row(&[x])?;
            let interp = dot(&s_row, &u_at_pivots);
            err = err.max((interp - sf.eval(&toy, i, x)).abs());
        }
        table.push(vec![
            "singfun".into(),
            (i + 1).into(),
            Value::Na,
            sf.sigma[i].into(),
            (cfg.eps / sf.sigma[i]).into(),
            err.into(),
            Value::Na,
            Value::Na,
        ]);
    }

    Ok(table)
}
