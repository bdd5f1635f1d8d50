//! Column-pivoted QR with norm-downdating (Businger-Golub) and a strong
//! rank-revealing refinement that bounds the interpolation factor
//! `R11^{-1} R12` by column swaps.

use super::matrix::DenseMatrix;

/// Pivoted QR factorization `A P = Q R`. The orthogonal factor is kept
/// implicitly as Householder reflectors stored below the diagonal of `qr`;
/// `R` sits on and above the diagonal. `rank` is the numerical rank detected
/// by the stopping rule.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    qr: DenseMatrix,
    taus: Vec<f64>,
    /// `perm[j]` is the original index of the column now in position `j`.
    perm: Vec<usize>,
    rank: usize,
}

/// Column-pivoted QR of `A`, stopping once the largest residual column norm
/// drops to `tol` times the largest initial column norm.
pub fn cpqr(a: &DenseMatrix, tol: f64) -> PivotedQr {
    cpqr_budget(a, tol, None)
}

/// [`cpqr`] with an additional cap on the number of pivots. `tol = 0` keeps
/// factoring until the cap (or an exactly zero residual).
pub fn cpqr_budget(a: &DenseMatrix, tol: f64, max_rank: Option<usize>) -> PivotedQr {
    let m = a.rows();
    let n = a.cols();
    let mut qr = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut taus = Vec::new();

    let mut norms_sq: Vec<f64> = (0..n).map(|j| qr.col_norm(j).powi(2)).collect();
    // reference values for the downdating refresh rule
    let mut last_exact = norms_sq.clone();
    let max_init = norms_sq.iter().cloned().fold(0.0f64, f64::max).sqrt();
    let threshold = tol * max_init;

    let kmax = m.min(n).min(max_rank.unwrap_or(usize::MAX));
    let mut k = 0;
    while k < kmax {
        // pivot: largest residual norm, lowest index on exact ties
        let mut best = k;
        let mut best_val = norms_sq[k];
        for j in k + 1..n {
            if norms_sq[j] > best_val {
                best = j;
                best_val = norms_sq[j];
            }
        }
        if best_val.max(0.0).sqrt() <= threshold {
            break;
        }
        if best != k {
            swap_columns(&mut qr, k, best);
            perm.swap(k, best);
            norms_sq.swap(k, best);
            last_exact.swap(k, best);
        }

        let tau = reflect_column(&mut qr, k);
        apply_reflector_right_block(&mut qr, k, tau);
        taus.push(tau);

        // downdate residual norms; recompute exactly once cancellation bites
        for j in k + 1..n {
            let t = qr[(k, j)];
            norms_sq[j] -= t * t;
            if norms_sq[j] < 1e-6 * last_exact[j] {
                let exact: f64 = (k + 1..m).map(|i| qr[(i, j)] * qr[(i, j)]).sum();
                norms_sq[j] = exact;
                last_exact[j] = exact;
            }
        }
        k += 1;
    }

    PivotedQr {
        qr,
        taus,
        perm,
        rank: k,
    }
}

/// Strong rank-revealing QR: the [`cpqr`] pivot set refined by column swaps
/// until every entry of `R11^{-1} R12` has magnitude at most `f` (`f >= 1`,
/// conventionally 2). The rank stopping rule is the one of [`cpqr`].
pub fn strong_rrqr(a: &DenseMatrix, tol: f64, f: f64) -> PivotedQr {
    strong_rrqr_budget(a, tol, f, None)
}

/// [`strong_rrqr`] with a cap on the number of pivots, for rank sweeps.
pub fn strong_rrqr_budget(
    a: &DenseMatrix,
    tol: f64,
    f: f64,
    max_rank: Option<usize>,
) -> PivotedQr {
    assert!(f >= 1.0, "swap threshold f must be at least 1");
    let base = cpqr_budget(a, tol, max_rank);
    let k = base.rank;
    let n = a.cols();
    if k == 0 || k == n {
        return base;
    }

    let mut perm = base.perm.clone();
    // Each swap grows |det R11| by more than f, so this terminates; the cap
    // only guards against pathological floating-point cycling.
    let swap_cap = 1000 + 20 * n;
    let mut swaps = 0;
    loop {
        let fixed = fixed_qr(&a.select_columns(&perm), k);
        let t = fixed.interp_factor();
        let mut max_abs = 0.0;
        let mut max_ij = (0, 0);
        for i in 0..k {
            for j in 0..n - k {
                let v = t[(i, j)].abs();
                if v > max_abs {
                    max_abs = v;
                    max_ij = (i, j);
                }
            }
        }
        if max_abs <= f {
            break;
        }
        perm.swap(max_ij.0, k + max_ij.1);
        swaps += 1;
        assert!(swaps <= swap_cap, "strong RRQR swap refinement did not settle");
    }

    // restore the greedy ordering inside the selected block so the diagonal
    // of R11 is nonincreasing; this only permutes rows of R11^{-1} R12
    let selected: Vec<usize> = perm[..k].to_vec();
    let order = cpqr_budget(&a.select_columns(&selected), 0.0, Some(k)).perm;
    for (pos, &o) in order.iter().take(k).enumerate() {
        perm[pos] = selected[o];
    }

    let mut out = fixed_qr(&a.select_columns(&perm), k);
    out.perm = perm;
    out
}

/// Householder QR of `a` in the given column order, running `steps` reflectors.
fn fixed_qr(a: &DenseMatrix, steps: usize) -> PivotedQr {
    let m = a.rows();
    let n = a.cols();
    let mut qr = a.clone();
    let mut taus = Vec::with_capacity(steps);
    for k in 0..steps.min(m).min(n) {
        let tau = reflect_column(&mut qr, k);
        apply_reflector_right_block(&mut qr, k, tau);
        taus.push(tau);
    }
    let rank = taus.len();
    PivotedQr {
        qr,
        taus,
        perm: (0..n).collect(),
        rank,
    }
}

fn swap_columns(a: &mut DenseMatrix, p: usize, q: usize) {
    for i in 0..a.rows() {
        let row = a.row_mut(i);
        row.swap(p, q);
    }
}

/// Build the Householder reflector annihilating column `k` below the
/// diagonal. Stores the scaled reflector in the column, the new diagonal
/// entry at `(k, k)`, and returns `tau` (`H = I - tau v v^T`, `v[k] = 1`).
fn reflect_column(qr: &mut DenseMatrix, k: usize) -> f64 {
    let m = qr.rows();
    let alpha = qr[(k, k)];
    let tail_sq: f64 = (k + 1..m).map(|i| qr[(i, k)] * qr[(i, k)]).sum();
    if tail_sq == 0.0 {
        return 0.0;
    }
    let norm = (alpha * alpha + tail_sq).sqrt();
    let beta = if alpha >= 0.0 { -norm } else { norm };
    let tau = (beta - alpha) / beta;
    let scale = 1.0 / (alpha - beta);
    for i in k + 1..m {
        qr[(i, k)] *= scale;
    }
    qr[(k, k)] = beta;
    tau
}

/// Apply the reflector stored in column `k` to columns `k+1..n`, sweeping
/// rows so the inner loops stay contiguous.
fn apply_reflector_right_block(qr: &mut DenseMatrix, k: usize, tau: f64) {
    if tau == 0.0 {
        return;
    }
    let m = qr.rows();
    let n = qr.cols();
    if k + 1 >= n {
        return;
    }
    let mut w = vec![0.0; n - k - 1];
    for i in k..m {
        let row = qr.row(i);
        let v_i = if i == k { 1.0 } else { row[k] };
        for (wj, &x) in w.iter_mut().zip(&row[k + 1..n]) {
            *wj += v_i * x;
        }
    }
    for i in k..m {
        let row = qr.row_mut(i);
        let v_i = if i == k { 1.0 } else { row[k] };
        let t = tau * v_i;
        for (wj, x) in w.iter().zip(&mut row[k + 1..n]) {
            *x -= t * wj;
        }
    }
}

impl PivotedQr {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// The first `rank` pivot columns, in pivot order.
    pub fn pivots(&self) -> &[usize] {
        &self.perm[..self.rank]
    }

    pub fn rows(&self) -> usize {
        self.qr.rows()
    }

    pub fn cols(&self) -> usize {
        self.qr.cols()
    }

    /// Upper-trapezoidal factor, `rank x n`.
    pub fn r_factor(&self) -> DenseMatrix {
        let n = self.qr.cols();
        DenseMatrix::from_fn(self.rank, n, |i, j| if j >= i { self.qr[(i, j)] } else { 0.0 })
    }

    pub fn r_diag(&self) -> Vec<f64> {
        (0..self.rank).map(|i| self.qr[(i, i)]).collect()
    }

    /// `Q X` for an `m x c` matrix `X` (`Q` is the full orthogonal factor).
    pub fn q_mul(&self, x: &DenseMatrix) -> DenseMatrix {
        let mut y = x.clone();
        for k in (0..self.taus.len()).rev() {
            self.apply_h(&mut y, k);
        }
        y
    }

    /// `Q^T X`.
    pub fn qt_mul(&self, x: &DenseMatrix) -> DenseMatrix {
        let mut y = x.clone();
        for k in 0..self.taus.len() {
            self.apply_h(&mut y, k);
        }
        y
    }

    fn apply_h(&self, y: &mut DenseMatrix, k: usize) {
        let tau = self.taus[k];
        if tau == 0.0 {
            return;
        }
        let m = self.qr.rows();
        let c = y.cols();
        let mut w = vec![0.0; c];
        for i in k..m {
            let v_i = if i == k { 1.0 } else { self.qr[(i, k)] };
            let row = y.row(i);
            for (wj, &x) in w.iter_mut().zip(row) {
                *wj += v_i * x;
            }
        }
        for i in k..m {
            let v_i = if i == k { 1.0 } else { self.qr[(i, k)] };
            let t = tau * v_i;
            let row = y.row_mut(i);
            for (wj, x) in w.iter().zip(row) {
                *x -= t * wj;
            }
        }
    }

    /// The interpolation factor `T = R11^{-1} R12`, `rank x (n - rank)`.
    pub fn interp_factor(&self) -> DenseMatrix {
        let k = self.rank;
        let n = self.qr.cols();
        let mut t = DenseMatrix::from_fn(k, n - k, |i, j| self.qr[(i, k + j)]);
        for i in (0..k).rev() {
            let d = self.qr[(i, i)];
            for j in 0..n - k {
                let mut s = t[(i, j)];
                for l in i + 1..k {
                    s -= self.qr[(i, l)] * t[(l, j)];
                }
                t[(i, j)] = s / d;
            }
        }
        t
    }

    /// `Q R`, an approximation of (or, at full rank, exactly) `A P`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let m = self.qr.rows();
        let n = self.qr.cols();
        let mut r_full = DenseMatrix::zeros(m, n);
        for i in 0..self.rank {
            for j in i..n {
                r_full[(i, j)] = self.qr[(i, j)];
            }
        }
        self.q_mul(&r_full)
    }
}

/// Smallest rank `r` such that the Frobenius tail of the singular values is
/// at most `eps` times the whole: `sqrt(sum_{i>r} s_i^2) <= eps * ||s||_2`.
pub fn eps_rank_frobenius(sigma: &[f64], eps: f64) -> usize {
    let total_sq: f64 = sigma.iter().rev().map(|s| s * s).sum();
    if total_sq == 0.0 {
        return 0;
    }
    let bound_sq = (eps * eps) * total_sq;
    // suffix sums from the tail keep the small terms accurate
    let mut tail_sq = 0.0;
    let mut rank = sigma.len();
    for (i, s) in sigma.iter().enumerate().rev() {
        let next_tail = tail_sq + s * s;
        if next_tail <= bound_sq {
            tail_sq = next_tail;
            rank = i;
        } else {
            break;
        }
    }
    rank
}
