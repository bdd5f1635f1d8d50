//! Kernel functions and dense kernel-matrix assembly.
//!
//! Kernels are evaluated through the [`Kernel`] trait. Evaluation accounting
//! goes through [`CountingKernel`]: `eval` is the metered entry point used by
//! matrix assembly, while `probe` bypasses the counter and is reserved for
//! diagnostics such as the grid-sizing rule.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::linalg::DenseMatrix;

pub trait Kernel: Sync {
    /// Dimension of the points this kernel accepts.
    fn dim(&self) -> usize;

    /// Metered evaluation; every call counts as one kernel evaluation.
    fn eval(&self, x: &[f64], y: &[f64]) -> f64;

    /// Unmetered evaluation for sizing probes and diagnostics.
    fn probe(&self, x: &[f64], y: &[f64]) -> f64 {
        self.eval(x, y)
    }

    fn name(&self) -> &str {
        "kernel"
    }
}

fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KernelForm {
    InvR,
    InvR2,
    InvR3,
    LogR,
    ExpNegR,
    ExpNegR2,
    Toy1d,
}

/// One of the built-in kernels, selected by name:
/// `inv_r`, `inv_r2`, `inv_r3`, `log_r`, `exp_neg_r`, `exp_neg_r2`, `toy_1d`.
///
/// Singular kernels return a non-finite value at coincident points rather
/// than erroring; callers are expected to keep the point sets separated.
#[derive(Debug, Clone)]
pub struct NamedKernel {
    form: KernelForm,
    dim: usize,
    name: &'static str,
}

impl NamedKernel {
    pub fn by_name(name: &str, dim: usize) -> Result<Self> {
        if dim == 0 || dim > 3 {
            return Err(Error::UnsupportedDim(dim));
        }
        let (form, tag): (KernelForm, &'static str) = match name {
            "inv_r" => (KernelForm::InvR, "inv_r"),
            "inv_r2" => (KernelForm::InvR2, "inv_r2"),
            "inv_r3" => (KernelForm::InvR3, "inv_r3"),
            "log_r" => (KernelForm::LogR, "log_r"),
            "exp_neg_r" => (KernelForm::ExpNegR, "exp_neg_r"),
            "exp_neg_r2" => (KernelForm::ExpNegR2, "exp_neg_r2"),
            "toy_1d" => (KernelForm::Toy1d, "toy_1d"),
            other => return Err(Error::UnknownKernel(other.to_string())),
        };
        if form == KernelForm::Toy1d && dim != 1 {
            return Err(Error::UnsupportedDim(dim));
        }
        Ok(Self {
            form,
            dim,
            name: tag,
        })
    }

    pub fn all_names() -> &'static [&'static str] {
        &[
            "inv_r",
            "inv_r2",
            "inv_r3",
            "log_r",
            "exp_neg_r",
            "exp_neg_r2",
            "toy_1d",
        ]
    }

    /// `1 / (4 + x - y)` on matching 1D domains.
    pub fn toy_1d() -> Self {
        Self::by_name("toy_1d", 1).unwrap()
    }
}

impl Kernel for NamedKernel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.form {
            KernelForm::InvR => 1.0 / dist(x, y),
            KernelForm::InvR2 => {
                let r = dist(x, y);
                1.0 / (r * r)
            }
            KernelForm::InvR3 => {
                let r = dist(x, y);
                1.0 / (r * r * r)
            }
            KernelForm::LogR => dist(x, y).ln(),
            KernelForm::ExpNegR => (-dist(x, y)).exp(),
            KernelForm::ExpNegR2 => {
                let r = dist(x, y);
                (-r * r).exp()
            }
            KernelForm::Toy1d => 1.0 / (4.0 + x[0] - y[0]),
        }
    }

    fn name(&self) -> &str {
        self.name
    }
}

/// A kernel defined by a closure, mostly for tests and custom geometries.
pub struct FnKernel<F: Fn(&[f64], &[f64]) -> f64 + Sync> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &[f64]) -> f64 + Sync> FnKernel<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &[f64]) -> f64 + Sync> Kernel for FnKernel<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        (self.f)(x, y)
    }
}

/// Wrapper that counts metered evaluations of the inner kernel. The counter
/// uses an atomic, so a shared factorization can be applied concurrently.
pub struct CountingKernel<'k> {
    inner: &'k dyn Kernel,
    count: AtomicU64,
}

impl<'k> CountingKernel<'k> {
    pub fn new(inner: &'k dyn Kernel) -> Self {
        Self {
            inner,
            count: AtomicU64::new(0),
        }
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.count.store(0, Ordering::Relaxed);
    }
}

impl Kernel for CountingKernel<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.eval(x, y)
    }

    fn probe(&self, x: &[f64], y: &[f64]) -> f64 {
        self.inner.probe(x, y)
    }

    fn name(&self) -> &str {
        self.inner.name()
    }
}

/// Affine map from a low-dimensional parameter space into the ambient space,
/// `p -> origin + sum_i p_i * axes_i`.
#[derive(Debug, Clone)]
pub struct AffineEmbedding {
    origin: Vec<f64>,
    axes: Vec<Vec<f64>>,
}

impl AffineEmbedding {
    pub fn new(origin: Vec<f64>, axes: Vec<Vec<f64>>) -> Result<Self> {
        for a in &axes {
            if a.len() != origin.len() {
                return Err(Error::DimMismatch {
                    expected: origin.len(),
                    got: a.len(),
                });
            }
        }
        Ok(Self { origin, axes })
    }

    pub fn param_dim(&self) -> usize {
        self.axes.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.len()
    }

    pub fn map(&self, p: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.origin);
        for (t, axis) in p.iter().zip(&self.axes) {
            for (o, a) in out.iter_mut().zip(axis) {
                *o += t * a;
            }
        }
    }

    pub fn map_points(&self, params: &PointSet) -> Result<PointSet> {
        if params.dim() != self.param_dim() {
            return Err(Error::DimMismatch {
                expected: self.param_dim(),
                got: params.dim(),
            });
        }
        let mut out = PointSet::empty(self.ambient_dim());
        let mut buf = vec![0.0; self.ambient_dim()];
        for p in params.iter() {
            self.map(p, &mut buf);
            out.push(&buf);
        }
        Ok(out)
    }
}

/// A kernel over two embedded parameter domains: parameter points are mapped
/// into the ambient space before evaluating the inner kernel. Lets planar
/// patches in 3D run through the box-based pipeline in their 2D coordinates.
pub struct EmbeddedKernel<'k> {
    inner: &'k dyn Kernel,
    embed_x: AffineEmbedding,
    embed_y: AffineEmbedding,
}

impl<'k> EmbeddedKernel<'k> {
    pub fn new(
        inner: &'k dyn Kernel,
        embed_x: AffineEmbedding,
        embed_y: AffineEmbedding,
    ) -> Result<Self> {
        if embed_x.ambient_dim() != inner.dim() || embed_y.ambient_dim() != inner.dim() {
            return Err(Error::DimMismatch {
                expected: inner.dim(),
                got: embed_x.ambient_dim(),
            });
        }
        if embed_x.param_dim() != embed_y.param_dim() {
            return Err(Error::DimMismatch {
                expected: embed_x.param_dim(),
                got: embed_y.param_dim(),
            });
        }
        Ok(Self {
            inner,
            embed_x,
            embed_y,
        })
    }

    pub fn embed_x(&self) -> &AffineEmbedding {
        &self.embed_x
    }

    pub fn embed_y(&self) -> &AffineEmbedding {
        &self.embed_y
    }
}

impl Kernel for EmbeddedKernel<'_> {
    fn dim(&self) -> usize {
        self.embed_x.param_dim()
    }

    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut xe = [0.0; 3];
        let mut ye = [0.0; 3];
        let d = self.inner.dim();
        self.embed_x.map(x, &mut xe[..d]);
        self.embed_y.map(y, &mut ye[..d]);
        self.inner.eval(&xe[..d], &ye[..d])
    }

    fn probe(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut xe = [0.0; 3];
        let mut ye = [0.0; 3];
        let d = self.inner.dim();
        self.embed_x.map(x, &mut xe[..d]);
        self.embed_y.map(y, &mut ye[..d]);
        self.inner.probe(&xe[..d], &ye[..d])
    }

    fn name(&self) -> &str {
        self.inner.name()
    }
}

/// The dense kernel matrix `K[i][j] = kernel(x_i, y_j)`; costs exactly
/// `|X| * |Y|` metered evaluations.
pub fn assemble(kernel: &dyn Kernel, x: &PointSet, y: &PointSet) -> Result<DenseMatrix> {
    if x.dim() != kernel.dim() || y.dim() != kernel.dim() {
        return Err(Error::DimMismatch {
            expected: kernel.dim(),
            got: if x.dim() != kernel.dim() {
                x.dim()
            } else {
                y.dim()
            },
        });
    }
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut out = DenseMatrix::zeros(x.len(), y.len());
    for (i, xi) in x.iter().enumerate() {
        let row = out.row_mut(i);
        for (j, yj) in y.iter().enumerate() {
            row[j] = kernel.eval(xi, yj);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::singular_values;
    use proptest::prelude::*;

    #[test]
    fn builtin_values() {
        let toy = NamedKernel::toy_1d();
        assert_eq!(toy.eval(&[0.0], &[0.0]), 0.25);

        let inv_r = NamedKernel::by_name("inv_r", 2).unwrap();
        assert_eq!(inv_r.eval(&[0.0, 0.0], &[3.0, 4.0]), 0.2);

        let inv_r3 = NamedKernel::by_name("inv_r3", 1).unwrap();
        assert_eq!(inv_r3.eval(&[0.0], &[2.0]), 0.125);

        let log_r = NamedKernel::by_name("log_r", 2).unwrap();
        assert!((log_r.eval(&[0.0, 0.0], &[0.0, std::f64::consts::E]) - 1.0).abs() < 1e-15);

        let e1 = NamedKernel::by_name("exp_neg_r", 1).unwrap();
        assert!((e1.eval(&[0.0], &[1.0]) - (-1.0f64).exp()).abs() < 1e-15);
        let e2 = NamedKernel::by_name("exp_neg_r2", 1).unwrap();
        assert!((e2.eval(&[0.0], &[2.0]) - (-4.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn unknown_or_invalid_kernels_rejected() {
        assert!(matches!(
            NamedKernel::by_name("nope", 2),
            Err(Error::UnknownKernel(_))
        ));
        assert!(NamedKernel::by_name("toy_1d", 2).is_err());
        assert!(NamedKernel::by_name("inv_r", 0).is_err());
    }

    #[test]
    fn coincident_points_are_loudly_nonfinite() {
        let inv_r = NamedKernel::by_name("inv_r", 2).unwrap();
        assert!(inv_r.eval(&[1.0, 1.0], &[1.0, 1.0]).is_infinite());
        let log_r = NamedKernel::by_name("log_r", 2).unwrap();
        assert!(!log_r.eval(&[1.0, 1.0], &[1.0, 1.0]).is_finite());
    }

    #[test]
    fn assemble_spot_checks() {
        let toy = NamedKernel::toy_1d();
        let x = PointSet::new(1, vec![0.0]).unwrap();
        let y = PointSet::new(1, vec![0.0]).unwrap();
        let k = assemble(&toy, &x, &y).unwrap();
        assert_eq!(k[(0, 0)], 0.25);

        let inv_r = NamedKernel::by_name("inv_r", 2).unwrap();
        let x = PointSet::new(2, vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let y = PointSet::new(2, vec![5.0, 0.0, 0.0, 4.0, 3.0, 4.0]).unwrap();
        let k = assemble(&inv_r, &x, &y).unwrap();
        assert_eq!(k.rows(), 2);
        assert_eq!(k.cols(), 3);
        for i in 0..2 {
            for j in 0..3 {
                let want = inv_r.eval(x.point(i), y.point(j));
                assert_eq!(k[(i, j)], want);
            }
        }
        assert_eq!(k[(0, 0)], 0.2);
    }

    #[test]
    fn assemble_guards() {
        let inv_r = NamedKernel::by_name("inv_r", 2).unwrap();
        let x1 = PointSet::new(1, vec![0.0]).unwrap();
        let y2 = PointSet::new(2, vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            assemble(&inv_r, &x1, &y2),
            Err(Error::DimMismatch { .. })
        ));
        let empty = PointSet::empty(2);
        assert!(matches!(
            assemble(&inv_r, &empty, &y2),
            Err(Error::EmptyPointSet)
        ));
    }

    #[test]
    fn separable_kernel_has_numerical_rank_one() {
        let k = FnKernel::new(1, |x, y| (x[0]).exp() * (y[0]).exp());
        let x = PointSet::new(1, vec![-0.5, 0.0, 0.3, 0.9]).unwrap();
        let y = PointSet::new(1, vec![0.1, 0.4, 0.8]).unwrap();
        let a = assemble(&k, &x, &y).unwrap();
        let sv = singular_values(&a);
        assert!(sv[1] / sv[0] < 1e-14, "sigma2/sigma1 = {}", sv[1] / sv[0]);
    }

    #[test]
    fn counting_kernel_meters_eval_not_probe() {
        let inv_r = NamedKernel::by_name("inv_r", 2).unwrap();
        let counting = CountingKernel::new(&inv_r);
        counting.eval(&[0.0, 0.0], &[1.0, 1.0]);
        counting.eval(&[0.0, 0.0], &[2.0, 1.0]);
        counting.probe(&[0.0, 0.0], &[3.0, 1.0]);
        assert_eq!(counting.count(), 2);
        counting.reset();
        assert_eq!(counting.count(), 0);
    }

    #[test]
    fn embedded_kernel_maps_parameters() {
        let inv_r = NamedKernel::by_name("inv_r", 3).unwrap();
        let ex = AffineEmbedding::new(
            vec![-1.0, 0.0, 0.0],
            vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        )
        .unwrap();
        let ey = AffineEmbedding::new(
            vec![0.0, 0.0, -1.0],
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
        )
        .unwrap();
        let k = EmbeddedKernel::new(&inv_r, ex, ey).unwrap();
        assert_eq!(k.dim(), 2);
        let want = inv_r.eval(&[-1.0, 0.25, 0.5], &[0.75, 0.1, -1.0]);
        assert_eq!(k.eval(&[0.25, 0.5], &[0.75, 0.1]), want);
    }

    proptest! {
        #[test]
        fn assemble_transpose_identity(
            xs in proptest::collection::vec(-1.0f64..1.0, 2..6),
            ys in proptest::collection::vec(3.0f64..5.0, 2..6),
        ) {
            let k = NamedKernel::by_name("inv_r", 1).unwrap();
            let kt = FnKernel::new(1, |y: &[f64], x: &[f64]| k.eval(x, y));
            let x = PointSet::new(1, xs).unwrap();
            let y = PointSet::new(1, ys).unwrap();
            let a = assemble(&k, &x, &y).unwrap();
            let b = assemble(&kt, &y, &x).unwrap();
            prop_assert_eq!(a.transpose(), b);
        }

        #[test]
        fn symmetric_kernels_give_symmetric_matrices(
            xs in proptest::collection::vec(-1.0f64..1.0, 2..6),
            name in prop_oneof![
                Just("inv_r"), Just("inv_r2"), Just("inv_r3"),
                Just("log_r"), Just("exp_neg_r"), Just("exp_neg_r2")
            ],
        ) {
            // distinct points so singular kernels stay finite off-diagonal
            let mut xs = xs;
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            xs.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            prop_assume!(xs.len() >= 2);
            let k = NamedKernel::by_name(name, 1).unwrap();
            let x = PointSet::new(1, xs).unwrap();
            let a = assemble(&k, &x, &x).unwrap();
            for i in 0..a.rows() {
                for j in 0..i {
                    prop_assert_eq!(a[(i, j)], a[(j, i)]);
                }
            }
        }
    }
}
