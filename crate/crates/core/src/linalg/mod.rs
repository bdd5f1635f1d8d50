//! Dense linear algebra owned by the crate: column-pivoted QR with a strong
//! rank-revealing refinement, LU with partial pivoting, singular values, and
//! Frobenius epsilon-rank determination.

mod lu;
mod matrix;
mod qr;
mod svd;

pub use lu::{lu_factor, LuFactors};
pub use matrix::{dot, DenseMatrix};
pub use qr::{cpqr, cpqr_budget, eps_rank_frobenius, strong_rrqr, strong_rrqr_budget, PivotedQr};
pub use svd::{singular_values, svd_thin, Svd};
