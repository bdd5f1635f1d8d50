//! Skeletonized interpolation: low-rank factorization of smooth kernel
//! matrices at `O((m + n) r)` kernel-evaluation cost.
//!
//! Given a smooth kernel `K(x, y)` and two well-separated boxes, the library
//! builds tensor grids of Chebyshev nodes, weighs the node matrix by
//! square-rooted integration weights, selects pivot points with rank-revealing
//! QR factorizations and returns the cross approximation
//!
//! ```text
//! K(X, Y) ≈ K(X, Ŷ) · K(X̂, Ŷ)⁻¹ · K(X̂, Y)
//! ```
//!
//! whose rank is close to the truncated-SVD rank of `K(X, Y)`. Baselines
//! (adaptive cross approximation, random CUR, SVD/RRQR reference ranks) and
//! the dense linear algebra they need live here as well; the `skelfac` binary
//! in the sibling crate drives the benchmark experiments.

pub mod baselines;
pub mod chebyshev;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod linalg;
pub mod skeleton;

pub use error::{Error, Result};
pub use geometry::{AxisBox, PointSet};
pub use kernels::{assemble, CountingKernel, Kernel, NamedKernel};
pub use linalg::DenseMatrix;
pub use skeleton::{skeletonize, SkelFactorization, SkelOptions};
