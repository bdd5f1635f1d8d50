//! LU factorization with partial pivoting and triangular solves.

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// Packed LU factors of a square matrix: `P A = L U` with unit-lower `L` and
/// upper `U` stored in one matrix, plus the row permutation.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    /// `perm[i]` is the original row now sitting at position `i`.
    perm: Vec<usize>,
    n: usize,
}

pub fn lu_factor(a: &DenseMatrix) -> Result<LuFactors> {
    if a.rows() != a.cols() {
        return Err(Error::BadShape {
            rows: a.rows(),
            cols: a.cols(),
            expected: "square",
        });
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        // partial pivoting: largest magnitude in column k at or below the diagonal
        let mut piv = k;
        let mut piv_val = lu[(k, k)].abs();
        for i in k + 1..n {
            let v = lu[(i, k)].abs();
            if v > piv_val {
                piv = i;
                piv_val = v;
            }
        }
        if piv_val == 0.0 {
            return Err(Error::SingularMatrix { pivot: k });
        }
        if piv != k {
            perm.swap(k, piv);
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
            }
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor != 0.0 {
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
    }
    Ok(LuFactors { lu, perm, n })
}

impl LuFactors {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Solve `A X = B` column by column.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        if b.rows() != self.n {
            return Err(Error::DimMismatch {
                expected: self.n,
                got: b.rows(),
            });
        }
        let mut x = DenseMatrix::zeros(self.n, b.cols());
        let mut col = vec![0.0; self.n];
        for j in 0..b.cols() {
            for i in 0..self.n {
                col[i] = b[(self.perm[i], j)];
            }
            self.solve_lower(&mut col);
            self.solve_upper(&mut col);
            for i in 0..self.n {
                x[(i, j)] = col[i];
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: b.len(),
            });
        }
        let mut col: Vec<f64> = (0..self.n).map(|i| b[self.perm[i]]).collect();
        self.solve_lower(&mut col);
        self.solve_upper(&mut col);
        Ok(col)
    }

    /// Solve `A^T X = B` (used to apply row vectors to `A^{-1}` from the left).
    pub fn solve_transposed(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        if b.rows() != self.n {
            return Err(Error::DimMismatch {
                expected: self.n,
                got: b.rows(),
            });
        }
        // A^T = (P^T L U)^T = U^T L^T P, so solve U^T y = b, L^T z = y, x = P^T z
        let mut x = DenseMatrix::zeros(self.n, b.cols());
        let mut col = vec![0.0; self.n];
        for j in 0..b.cols() {
            for i in 0..self.n {
                col[i] = b[(i, j)];
            }
            // forward substitution with U^T (lower triangular)
            for i in 0..self.n {
                let mut s = col[i];
                for k in 0..i {
                    s -= self.lu[(k, i)] * col[k];
                }
                col[i] = s / self.lu[(i, i)];
            }
            // back substitution with L^T (unit upper triangular)
            for i in (0..self.n).rev() {
                let mut s = col[i];
                for k in i + 1..self.n {
                    s -= self.lu[(k, i)] * col[k];
                }
                col[i] = s;
            }
            for i in 0..self.n {
                x[(self.perm[i], j)] = col[i];
            }
        }
        Ok(x)
    }

    pub fn solve_transposed_vec(&self, b: &[f64]) -> Result<Vec<f64>> {
        let bm = DenseMatrix::from_fn(self.n, 1, |i, _| b[i]);
        let x = self.solve_transposed(&bm)?;
        Ok((0..self.n).map(|i| x[(i, 0)]).collect())
    }

    fn solve_lower(&self, col: &mut [f64]) {
        for i in 0..self.n {
            let mut s = col[i];
            let row = self.lu.row(i);
            for k in 0..i {
                s -= row[k] * col[k];
            }
            col[i] = s;
        }
    }

    fn solve_upper(&self, col: &mut [f64]) {
        for i in (0..self.n).rev() {
            let mut s = col[i];
            let row = self.lu.row(i);
            for k in i + 1..self.n {
                s -= row[k] * col[k];
            }
            col[i] = s / row[i];
        }
    }

    /// `P A` reconstructed from the factors, for residual checks.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.n;
        DenseMatrix::from_fn(n, n, |i, j| {
            let mut s = 0.0;
            for k in 0..=i.min(j) {
                let l = if k == i { 1.0 } else { self.lu[(i, k)] };
                s += l * self.lu[(k, j)];
            }
            s
        })
    }
}
