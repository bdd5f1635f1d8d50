//! Chebyshev nodes of the first kind, their integration weights, tensor grids
//! over boxes, barycentric Lagrange evaluation and the automatic grid-sizing
//! rule that picks per-dimension node counts for a target interpolation
//! accuracy.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{tensor_points, AxisBox, PointSet};
use crate::kernels::Kernel;

/// The `m` Chebyshev nodes of the first kind on `[-1, 1]`,
/// `cos((2k - 1) pi / (2m))` for `k = 1..m`, strictly decreasing.
///
/// Evaluated as `sin` of the signed half-angle so the set is exactly
/// symmetric about zero in floating point.
pub fn cheb_nodes_1d(m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::EmptyCount(0));
    }
    Ok((1..=m)
        .map(|k| {
            let t = (m as f64 - (2 * k - 1) as f64) * PI / (2.0 * m as f64);
            t.sin()
        })
        .collect())
}

/// Integration weights attached to the first-kind nodes,
/// `w_k = (pi / m) sin((2k - 1) pi / (2m))`, all in `(pi/m^2, pi/m]` and
/// exactly symmetric (`w_k = w_{m+1-k}`).
pub fn cheb_weights_1d(m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::EmptyCount(0));
    }
    Ok((1..=m)
        .map(|k| {
            // sin((2k-1)pi/(2m)) = cos of the signed half-angle, even in it
            let t = (m as f64 - (2 * k - 1) as f64) * PI / (2.0 * m as f64);
            PI / m as f64 * t.cos()
        })
        .collect())
}

/// Tensor grid of Chebyshev nodes over an axis-aligned box, with the
/// per-dimension integration weights scaled by the affine map onto each side.
/// Flat indexing is lexicographic with the last dimension fastest, and the
/// flat weight of a point is the product of its per-dimension weights.
#[derive(Debug, Clone)]
pub struct TensorGrid {
    boxd: AxisBox,
    counts: Vec<usize>,
    nodes_1d: Vec<Vec<f64>>,
    weights_1d: Vec<Vec<f64>>,
}

pub fn tensor_grid(boxd: &AxisBox, counts: &[usize]) -> Result<TensorGrid> {
    if counts.len() != boxd.dim() {
        return Err(Error::DimMismatch {
            expected: boxd.dim(),
            got: counts.len(),
        });
    }
    let mut nodes_1d = Vec::with_capacity(counts.len());
    let mut weights_1d = Vec::with_capacity(counts.len());
    for (d, &m) in counts.iter().enumerate() {
        let lo = boxd.lo()[d];
        let hi = boxd.hi()[d];
        let center = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let nodes: Vec<f64> = cheb_nodes_1d(m)?
            .into_iter()
            .map(|t| center + half * t)
            .collect();
        let weights: Vec<f64> = cheb_weights_1d(m)?.into_iter().map(|w| w * half).collect();
        nodes_1d.push(nodes);
        weights_1d.push(weights);
    }
    Ok(TensorGrid {
        boxd: boxd.clone(),
        counts: counts.to_vec(),
        nodes_1d,
        weights_1d,
    })
}

impl TensorGrid {
    pub fn boxd(&self) -> &AxisBox {
        &self.boxd
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes_1d(&self, d: usize) -> &[f64] {
        &self.nodes_1d[d]
    }

    pub fn weights_1d(&self, d: usize) -> &[f64] {
        &self.weights_1d[d]
    }

    /// All grid points, flattened lexicographically (last dimension fastest).
    pub fn flat_points(&self) -> PointSet {
        tensor_points(&self.nodes_1d)
    }

    /// Product weights in the same flat order as [`TensorGrid::flat_points`].
    pub fn flat_weights(&self) -> Vec<f64> {
        let total = self.len();
        let dim = self.dim();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut w = 1.0;
            for d in 0..dim {
                w *= self.weights_1d[d][idx[d]];
            }
            out.push(w);
            for d in (0..dim).rev() {
                idx[d] += 1;
                if idx[d] < self.counts[d] {
                    break;
                }
                idx[d] = 0;
            }
        }
        out
    }
}

/// Barycentric (second form) Lagrange basis over a fixed set of distinct
/// nodes. `row(x)` returns all basis functions evaluated at `x`; at a node it
/// is exactly a unit vector, and the row always sums to one.
#[derive(Debug, Clone)]
pub struct Lagrange1d {
    nodes: Vec<f64>,
    bary: Vec<f64>,
}

impl Lagrange1d {
    /// Basis through arbitrary distinct nodes; weights by direct products
    /// with capacity scaling to dodge under/overflow.
    pub fn new(nodes: &[f64]) -> Self {
        let n = nodes.len();
        assert!(n > 0, "need at least one node");
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &t in nodes {
            lo = lo.min(t);
            hi = hi.max(t);
        }
        let cap = if hi > lo { 4.0 / (hi - lo) } else { 1.0 };
        let bary = (0..n)
            .map(|i| {
                let mut w = 1.0;
                for j in 0..n {
                    if j != i {
                        w *= (nodes[i] - nodes[j]) * cap;
                    }
                }
                1.0 / w
            })
            .collect();
        Self {
            nodes: nodes.to_vec(),
            bary,
        }
    }

    /// Basis at the `m` first-kind Chebyshev nodes mapped onto `[lo, hi]`,
    /// using the analytic weights `(-1)^k sin((2k - 1) pi / (2m))` (uniform
    /// scaling from the affine map cancels in the barycentric ratio).
    pub fn cheb_on_interval(m: usize, lo: f64, hi: f64) -> Result<Self> {
        let center = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let nodes: Vec<f64> = cheb_nodes_1d(m)?
            .into_iter()
            .map(|t| center + half * t)
            .collect();
        let bary = (0..m)
            .map(|k| {
                let s = ((2 * k + 1) as f64 * PI / (2.0 * m as f64)).sin();
                if k % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .collect();
        Ok(Self { nodes, bary })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// All Lagrange basis functions evaluated at `x`.
    pub fn row(&self, x: f64) -> Vec<f64> {
        let n = self.nodes.len();
        if let Some(hit) = self.nodes.iter().position(|&t| t == x) {
            let mut e = vec![0.0; n];
            e[hit] = 1.0;
            return e;
        }
        let mut terms = Vec::with_capacity(n);
        let mut denom = 0.0;
        for i in 0..n {
            let t = self.bary[i] / (x - self.nodes[i]);
            terms.push(t);
            denom += t;
        }
        for t in &mut terms {
            *t /= denom;
        }
        terms
    }

    /// Interpolant of the values `f` (given at the nodes) evaluated at `x`.
    pub fn interpolate(&self, f: &[f64], x: f64) -> f64 {
        debug_assert_eq!(f.len(), self.nodes.len());
        if let Some(hit) = self.nodes.iter().position(|&t| t == x) {
            return f[hit];
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..self.nodes.len() {
            let t = self.bary[i] / (x - self.nodes[i]);
            num += t * f[i];
            den += t;
        }
        num / den
    }
}

/// Default node-count cap per dimension in the sizing rule.
pub const DEFAULT_MAX_NODES_PER_DIM: usize = 128;
/// Equispaced probe points per dimension used to estimate interpolation error.
pub const SIZING_PROBES: usize = 101;

/// Per-dimension Chebyshev node counts for both boxes such that the tensor
/// interpolant of the kernel reaches relative sup accuracy `epsilon^{3/4}`,
/// estimated on 1D fibers through the domain midpoints.
pub fn grid_size_heuristic(
    kernel: &dyn Kernel,
    box_x: &AxisBox,
    box_y: &AxisBox,
    epsilon: f64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    grid_sizes_for_delta(
        kernel,
        box_x,
        box_y,
        epsilon.powf(0.75),
        DEFAULT_MAX_NODES_PER_DIM,
    )
}

/// [`grid_size_heuristic`] with the interpolation target `delta` and node cap
/// made explicit. Per-dimension errors add up in a tensor interpolant, so
/// each fiber gets an equal share `delta / d` of the budget.
pub fn grid_sizes_for_delta(
    kernel: &dyn Kernel,
    box_x: &AxisBox,
    box_y: &AxisBox,
    delta: f64,
    m_max: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let mid_x = box_x.midpoint();
    let mid_y = box_y.midpoint();
    let share_x = delta / box_x.dim() as f64;
    let share_y = delta / box_y.dim() as f64;

    let counts_x = (0..box_x.dim())
        .map(|d| {
            fiber_node_count(
                |t| {
                    let mut x = mid_x.clone();
                    x[d] = t;
                    kernel.probe(&x, &mid_y)
                },
                box_x.lo()[d],
                box_x.hi()[d],
                share_x,
                m_max,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let counts_y = (0..box_y.dim())
        .map(|d| {
            fiber_node_count(
                |t| {
                    let mut y = mid_y.clone();
                    y[d] = t;
                    kernel.probe(&mid_x, &y)
                },
                box_y.lo()[d],
                box_y.hi()[d],
                share_y,
                m_max,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((counts_x, counts_y))
}

/// Smallest `m <= m_max` such that the Chebyshev interpolant of `f` on
/// `[lo, hi]` stays within `delta * max|f|` of `f` on the probe grid.
fn fiber_node_count(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    delta: f64,
    m_max: usize,
) -> Result<usize> {
    let probes: Vec<f64> = (0..SIZING_PROBES)
        .map(|i| lo + (hi - lo) * i as f64 / (SIZING_PROBES - 1) as f64)
        .collect();
    let truth: Vec<f64> = probes.iter().map(|&t| f(t)).collect();
    let scale = truth.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let denom = if scale > 0.0 { scale } else { 1.0 };

    for m in 1..=m_max {
        let lag = Lagrange1d::cheb_on_interval(m, lo, hi)?;
        let node_vals: Vec<f64> = lag.nodes().iter().map(|&t| f(t)).collect();
        let err = probes
            .iter()
            .zip(&truth)
            .map(|(&t, &y)| (lag.interpolate(&node_vals, t) - y).abs())
            .fold(0.0f64, f64::max);
        if err <= delta * denom {
            return Ok(m);
        }
    }
    Err(Error::GridSizeExceeded {
        m_max,
        target: delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{FnKernel, NamedKernel};
    use proptest::prelude::*;

    const SQRT2_OVER_2: f64 = std::f64::consts::SQRT_2 / 2.0;

    #[test]
    fn nodes_small_cases() {
        assert_eq!(cheb_nodes_1d(1).unwrap(), vec![0.0]);
        let n2 = cheb_nodes_1d(2).unwrap();
        assert!((n2[0] - SQRT2_OVER_2).abs() < 1e-15);
        assert!((n2[1] + SQRT2_OVER_2).abs() < 1e-15);
        let n3 = cheb_nodes_1d(3).unwrap();
        assert!((n3[0] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(n3[1], 0.0);
        assert!((n3[2] + 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(cheb_nodes_1d(0).is_err());
    }

    #[test]
    fn nodes_decreasing_and_symmetric() {
        for m in [2, 5, 17, 64] {
            let nodes = cheb_nodes_1d(m).unwrap();
            for w in nodes.windows(2) {
                assert!(w[0] > w[1]);
            }
            for k in 0..m {
                assert_eq!(nodes[k], -nodes[m - 1 - k], "m={m} k={k}");
            }
        }
    }

    #[test]
    fn weights_small_cases() {
        let w1 = cheb_weights_1d(1).unwrap();
        assert!((w1[0] - PI).abs() < 1e-15);
        let w2 = cheb_weights_1d(2).unwrap();
        let want = PI * std::f64::consts::SQRT_2 / 4.0;
        assert!((w2[0] - want).abs() < 1e-15);
        assert!((w2[1] - want).abs() < 1e-15);
        assert!((want - 1.1107).abs() < 1e-4);
    }

    #[test]
    fn weights_bounds_and_symmetry() {
        // at m = 1 the single weight is pi, hitting both bounds exactly;
        // the lower bound is strict from m = 2 on
        assert_eq!(cheb_weights_1d(1).unwrap(), vec![PI]);
        for m in 2..=256 {
            let w = cheb_weights_1d(m).unwrap();
            let mf = m as f64;
            for (k, &wk) in w.iter().enumerate() {
                assert!(wk > PI / (mf * mf), "m={m} k={k} w={wk}");
                assert!(wk <= PI / mf + 1e-16, "m={m} k={k} w={wk}");
                assert_eq!(wk, w[m - 1 - k]);
            }
        }
    }

    #[test]
    fn weight_sum_m4_and_monotone_convergence_to_two() {
        let s4: f64 = cheb_weights_1d(4).unwrap().iter().sum();
        assert!((s4 - 2.0523443059540623).abs() < 1e-12, "sum {s4}");
        let mut prev_gap = f64::INFINITY;
        let mut m = 2;
        while m <= 256 {
            let s: f64 = cheb_weights_1d(m).unwrap().iter().sum();
            let gap = (s - 2.0).abs();
            assert!(gap < prev_gap, "m={m}: {gap} !< {prev_gap}");
            prev_gap = gap;
            m *= 2;
        }
    }

    #[test]
    fn tensor_grid_2d_nodes() {
        let b = AxisBox::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let g = tensor_grid(&b, &[2, 2]).unwrap();
        let pts = g.flat_points();
        assert_eq!(pts.len(), 4);
        for p in pts.iter() {
            assert!((p[0].abs() - SQRT2_OVER_2).abs() < 1e-15);
            assert!((p[1].abs() - SQRT2_OVER_2).abs() < 1e-15);
        }
        // last dimension fastest
        assert!(pts.point(0)[0] > 0.0 && pts.point(0)[1] > 0.0);
        assert!(pts.point(1)[0] > 0.0 && pts.point(1)[1] < 0.0);
    }

    #[test]
    fn tensor_grid_affine_map_1d() {
        let b = AxisBox::new(vec![0.0], vec![2.0]).unwrap();
        let g = tensor_grid(&b, &[1]).unwrap();
        assert_eq!(g.flat_points().point(0), &[1.0]);
        assert!((g.flat_weights()[0] - PI).abs() < 1e-15);
    }

    #[test]
    fn flat_weights_are_products() {
        let b = AxisBox::new(vec![0.0, -2.0], vec![1.0, 3.0]).unwrap();
        let g = tensor_grid(&b, &[3, 4]).unwrap();
        let w = g.flat_weights();
        for k in 0..3 {
            for l in 0..4 {
                let want = g.weights_1d(0)[k] * g.weights_1d(1)[l];
                assert!((w[k * 4 + l] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn lagrange_unit_vector_at_nodes() {
        let lag = Lagrange1d::cheb_on_interval(7, -1.0, 1.0).unwrap();
        let x = lag.nodes()[2];
        let row = lag.row(x);
        for (i, &v) in row.iter().enumerate() {
            let want = if i == 2 { 1.0 } else { 0.0 };
            assert_eq!(v, want);
        }
    }

    #[test]
    fn lagrange_single_node_is_constant_one() {
        let lag = Lagrange1d::cheb_on_interval(1, -1.0, 1.0).unwrap();
        assert_eq!(lag.row(0.73), vec![1.0]);
        assert_eq!(lag.row(-0.1), vec![1.0]);
    }

    #[test]
    fn lagrange_partition_of_unity() {
        let lag = Lagrange1d::cheb_on_interval(12, 0.5, 2.5).unwrap();
        for &x in &[0.5, 0.77, 1.3, 2.49] {
            let s: f64 = lag.row(x).iter().sum();
            assert!((s - 1.0).abs() < 1e-13, "x={x} sum={s}");
        }
    }

    #[test]
    fn generic_nodes_match_analytic_weights() {
        // both constructors must produce the same basis functions
        let m = 9;
        let analytic = Lagrange1d::cheb_on_interval(m, -1.0, 1.0).unwrap();
        let generic = Lagrange1d::new(analytic.nodes());
        for &x in &[-0.93, -0.2, 0.11, 0.78] {
            let ra = analytic.row(x);
            let rg = generic.row(x);
            for (a, g) in ra.iter().zip(&rg) {
                assert!((a - g).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lebesgue_constant_bound() {
        let mut m = 2;
        while m <= 128 {
            let lag = Lagrange1d::cheb_on_interval(m, -1.0, 1.0).unwrap();
            let bound = 2.0 / PI * ((m + 1) as f64).ln() + 0.974;
            let mut worst = 0.0f64;
            for i in 0..1001 {
                let x = -1.0 + 2.0 * i as f64 / 1000.0;
                let s: f64 = lag.row(x).iter().map(|v| v.abs()).sum();
                worst = worst.max(s);
            }
            assert!(worst <= bound, "m={m}: Lebesgue {worst} > {bound}");
            m *= 2;
        }
    }

    #[test]
    fn interpolation_exact_on_polynomials() {
        // per-dimension degree < m reproduced to machine precision
        let b = AxisBox::new(vec![-1.0, 0.0], vec![1.0, 2.0]).unwrap();
        let g = tensor_grid(&b, &[4, 5]).unwrap();
        let poly = |x: f64, y: f64| 3.0 * x.powi(3) - x + 0.5 * (y.powi(4) - 2.0 * y.powi(2) + y);
        let lx = Lagrange1d::new(g.nodes_1d(0));
        let ly = Lagrange1d::new(g.nodes_1d(1));
        let mut worst = 0.0f64;
        for i in 0..21 {
            for j in 0..21 {
                let x = -1.0 + 2.0 * i as f64 / 20.0;
                let y = 2.0 * j as f64 / 20.0;
                let rx = lx.row(x);
                let ry = ly.row(y);
                let mut val = 0.0;
                for (k, &wx) in rx.iter().enumerate() {
                    for (l, &wy) in ry.iter().enumerate() {
                        val += wx * wy * poly(g.nodes_1d(0)[k], g.nodes_1d(1)[l]);
                    }
                }
                worst = worst.max((val - poly(x, y)).abs());
            }
        }
        assert!(worst < 1e-12, "tensor interpolation error {worst}");
    }

    #[test]
    fn heuristic_constant_kernel_needs_one_node() {
        let k = FnKernel::new(2, |_, _| 1.0);
        let bx = AxisBox::cube(&[0.0, 0.0], 1.0).unwrap();
        let by = AxisBox::cube(&[2.0, 2.0], 1.0).unwrap();
        let (cx, cy) = grid_size_heuristic(&k, &bx, &by, 1e-8).unwrap();
        assert_eq!(cx, vec![1, 1]);
        assert_eq!(cy, vec![1, 1]);
    }

    #[test]
    fn heuristic_counts_verified_by_independent_probe_oracle() {
        let k = NamedKernel::by_name("inv_r", 2).unwrap();
        let bx = AxisBox::cube(&[0.0, 0.0], 1.0).unwrap();
        let by = AxisBox::cube(&[2.0, 2.0], 1.0).unwrap();
        let eps = 1e-6f64;
        // per-dimension share of the tensor budget in 2D
        let delta = eps.powf(0.75) / 2.0;
        let (cx, _cy) = grid_size_heuristic(&k, &bx, &by, eps).unwrap();
        // oracle: straightforward Lagrange product evaluation of the same
        // fibers confirms m works and m-1 does not
        let mid_y = by.midpoint();
        for (d, &m) in cx.iter().enumerate() {
            let mid_x = bx.midpoint();
            let f = |t: f64| {
                let mut x = mid_x.clone();
                x[d] = t;
                k.eval(&x, &mid_y)
            };
            let check = |m: usize| -> f64 {
                let lag = Lagrange1d::cheb_on_interval(m, bx.lo()[d], bx.hi()[d]).unwrap();
                let vals: Vec<f64> = lag.nodes().iter().map(|&t| f(t)).collect();
                let mut worst: f64 = 0.0;
                let mut scale: f64 = 0.0;
                for i in 0..SIZING_PROBES {
                    let t = bx.lo()[d]
                        + (bx.hi()[d] - bx.lo()[d]) * i as f64 / (SIZING_PROBES - 1) as f64;
                    let truth = f(t);
                    scale = scale.max(truth.abs());
                    let mut val = 0.0;
                    for (i, w) in lag.row(t).iter().enumerate() {
                        val += w * vals[i];
                    }
                    worst = worst.max((val - truth).abs());
                }
                worst / scale
            };
            assert!(check(m) <= delta, "claimed count {m} fails the oracle");
            if m > 1 {
                assert!(check(m - 1) > delta, "count {m} is not minimal");
            }
        }
    }

    #[test]
    fn heuristic_monotone_in_epsilon() {
        let k = NamedKernel::by_name("inv_r", 2).unwrap();
        let bx = AxisBox::cube(&[0.0, 0.0], 1.0).unwrap();
        let by = AxisBox::cube(&[2.0, 2.0], 1.0).unwrap();
        let mut prev = (vec![0, 0], vec![0, 0]);
        for eps in [1e-2, 1e-4, 1e-6, 1e-8, 1e-10] {
            let got = grid_size_heuristic(&k, &bx, &by, eps).unwrap();
            for d in 0..2 {
                assert!(got.0[d] >= prev.0[d]);
                assert!(got.1[d] >= prev.1[d]);
            }
            prev = got;
        }
    }

    #[test]
    fn heuristic_errors_on_rough_kernel() {
        // |x - y| has a kink inside the probe line when the boxes overlap, so
        // no modest Chebyshev grid interpolates it to 1e-9
        let k = FnKernel::new(1, |x, y| (x[0] - y[0]).abs());
        let b = AxisBox::new(vec![-1.0], vec![1.0]).unwrap();
        match grid_sizes_for_delta(&k, &b, &b, 1e-9, 64) {
            Err(Error::GridSizeExceeded { m_max, .. }) => assert_eq!(m_max, 64),
            other => panic!("expected GridSizeExceeded, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn weights_positive_and_sum_near_interval_length(m in 1usize..200) {
            let w = cheb_weights_1d(m).unwrap();
            prop_assert!(w.iter().all(|&x| x > 0.0));
            let s: f64 = w.iter().sum();
            // sum = (pi/m)/sin(pi/2m), always in (2, pi]
            prop_assert!(s > 2.0 - 1e-12 && s <= PI + 1e-12);
        }

        #[test]
        fn lagrange_rows_sum_to_one(m in 1usize..40, x in -1.0f64..1.0) {
            let lag = Lagrange1d::cheb_on_interval(m, -1.0, 1.0).unwrap();
            let s: f64 = lag.row(x).iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
