//! Singular values via Golub-Kahan bidiagonalization plus implicit-shift QR,
//! and a one-sided Jacobi SVD when singular vectors are needed.
//!
//! The two paths are independent implementations, which the tests exploit by
//! cross-checking them against each other and against eigenvalues of `A^T A`.

use super::matrix::{dot, DenseMatrix};

/// All singular values of `a`, nonnegative and nonincreasing.
pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let work = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.transpose()
    };
    let (mut d, mut e) = bidiagonalize(work);
    bidiagonal_qr_values(&mut d, &mut e);
    d.sort_by(|x, y| y.partial_cmp(x).unwrap());
    d
}

/// Householder bidiagonalization of an `m x n` matrix with `m >= n`.
/// Returns the diagonal `d[0..n]` and superdiagonal `e[0..n]` (last entry a
/// zero sentinel). Reflectors are applied with row sweeps so the inner loops
/// stream contiguous memory; the orthogonal factors are not accumulated.
fn bidiagonalize(mut a: DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let m = a.rows();
    let n = a.cols();
    debug_assert!(m >= n);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for k in 0..n {
        // left reflector: annihilate column k below the diagonal
        let alpha = a[(k, k)];
        let tail_sq: f64 = (k + 1..m).map(|i| a[(i, k)] * a[(i, k)]).sum();
        if tail_sq == 0.0 {
            d[k] = alpha;
        } else {
            let norm = (alpha * alpha + tail_sq).sqrt();
            let beta = if alpha >= 0.0 { -norm } else { norm };
            let tau = (beta - alpha) / beta;
            let scale = 1.0 / (alpha - beta);
            for i in k + 1..m {
                a[(i, k)] *= scale;
            }
            d[k] = beta;
            if k + 1 < n {
                let mut w = vec![0.0; n - k - 1];
                for i in k..m {
                    let row = a.row(i);
                    let v_i = if i == k { 1.0 } else { row[k] };
                    for (wj, &x) in w.iter_mut().zip(&row[k + 1..n]) {
                        *wj += v_i * x;
                    }
                }
                for i in k..m {
                    let row = a.row_mut(i);
                    let v_i = if i == k { 1.0 } else { row[k] };
                    let t = tau * v_i;
                    for (wj, x) in w.iter().zip(&mut row[k + 1..n]) {
                        *x -= t * wj;
                    }
                }
            }
        }

        // right reflector: annihilate row k beyond the superdiagonal
        if k + 1 < n {
            let alpha = a[(k, k + 1)];
            let tail_sq: f64 = (k + 2..n).map(|j| a[(k, j)] * a[(k, j)]).sum();
            if tail_sq == 0.0 {
                e[k] = alpha;
            } else {
                let norm = (alpha * alpha + tail_sq).sqrt();
                let beta = if alpha >= 0.0 { -norm } else { norm };
                let tau = (beta - alpha) / beta;
                let scale = 1.0 / (alpha - beta);
                for j in k + 2..n {
                    a[(k, j)] *= scale;
                }
                e[k] = beta;
                // v lives in row k (v[k+1] = 1): update rows k+1..m
                let v_start = k + 1;
                let vrow: Vec<f64> = (v_start..n)
                    .map(|j| if j == v_start { 1.0 } else { a[(k, j)] })
                    .collect();
                for i in k + 1..m {
                    let row = a.row_mut(i);
                    let w = dot(&row[v_start..n], &vrow);
                    let t = tau * w;
                    for (x, v) in row[v_start..n].iter_mut().zip(&vrow) {
                        *x -= t * v;
                    }
                }
            }
        }
    }
    (d, e)
}

fn rot(f: f64, g: f64) -> (f64, f64, f64) {
    let t = f.hypot(g);
    if t == 0.0 {
        (1.0, 0.0, 0.0)
    } else {
        (f / t, g / t, t)
    }
}

/// Implicit-shift QR iteration reducing a bidiagonal to diagonal form in
/// place. On return `d` holds the (unsorted, nonnegative) singular values.
fn bidiagonal_qr_values(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    let eps = f64::EPSILON;
    let tiny = 1e-300;
    e[n - 1] = 0.0;

    let mut p = n;
    let mut guard = 0usize;
    let guard_cap = 200 * n + 200;
    while p > 0 {
        guard += 1;
        if guard > guard_cap {
            debug_assert!(false, "bidiagonal QR did not converge");
            break;
        }

        // deflation scan: find the last negligible superdiagonal entry
        let mut k: isize = p as isize - 2;
        while k >= 0 {
            let ku = k as usize;
            if e[ku].abs() <= tiny + eps * (d[ku].abs() + d[ku + 1].abs()) {
                e[ku] = 0.0;
                break;
            }
            k -= 1;
        }

        let kase;
        if k == p as isize - 2 {
            kase = 4;
        } else {
            let mut ks = p as isize - 1;
            while ks > k {
                let ku = ks as usize;
                let t = if ks != p as isize { e[ku].abs() } else { 0.0 }
                    + if ks != k + 1 { e[ku - 1].abs() } else { 0.0 };
                if d[ku].abs() <= tiny + eps * t {
                    d[ku] = 0.0;
                    break;
                }
                ks -= 1;
            }
            if ks == k {
                kase = 3;
            } else if ks == p as isize - 1 {
                kase = 1;
            } else {
                kase = 2;
                k = ks;
            }
        }
        let k = (k + 1) as usize;

        match kase {
            // d[p-1] is negligible: rotate e[p-2] away, shrinking the block
            1 => {
                let mut f = e[p - 2];
                e[p - 2] = 0.0;
                for j in (k..p - 1).rev() {
                    let (cs, sn, t) = rot(d[j], f);
                    d[j] = t;
                    if j != k {
                        f = -sn * e[j - 1];
                        e[j - 1] *= cs;
                    }
                }
            }
            // d[k-1] is negligible: split the block at k
            2 => {
                let mut f = e[k - 1];
                e[k - 1] = 0.0;
                for j in k..p {
                    let (cs, sn, t) = rot(d[j], f);
                    d[j] = t;
                    f = -sn * e[j];
                    e[j] *= cs;
                }
            }
            // one implicitly shifted QR sweep on the block [k, p-1]
            3 => {
                let scale = d[p - 1]
                    .abs()
                    .max(d[p - 2].abs())
                    .max(e[p - 2].abs())
                    .max(d[k].abs())
                    .max(e[k].abs());
                let sp = d[p - 1] / scale;
                let spm1 = d[p - 2] / scale;
                let epm1 = e[p - 2] / scale;
                let sk = d[k] / scale;
                let ek = e[k] / scale;
                let b = ((spm1 + sp) * (spm1 - sp) + epm1 * epm1) / 2.0;
                let c = (sp * epm1) * (sp * epm1);
                let mut shift = 0.0;
                if b != 0.0 || c != 0.0 {
                    shift = (b * b + c).sqrt();
                    if b < 0.0 {
                        shift = -shift;
                    }
                    shift = c / (b + shift);
                }
                let mut f = (sk + sp) * (sk - sp) + shift;
                let mut g = sk * ek;
                for j in k..p - 1 {
                    let (cs, sn, t) = rot(f, g);
                    if j != k {
                        e[j - 1] = t;
                    }
                    f = cs * d[j] + sn * e[j];
                    e[j] = cs * e[j] - sn * d[j];
                    g = sn * d[j + 1];
                    d[j + 1] *= cs;
                    let (cs, sn, t) = rot(f, g);
                    d[j] = t;
                    f = cs * e[j] + sn * d[j + 1];
                    d[j + 1] = -sn * e[j] + cs * d[j + 1];
                    g = sn * e[j + 1];
                    e[j + 1] *= cs;
                }
                e[p - 2] = f;
            }
            // d[k] converged
            _ => {
                if d[k] < 0.0 {
                    d[k] = -d[k];
                }
                p -= 1;
            }
        }
    }
}

/// Thin SVD with singular vectors: `a = u * diag(sigma) * vt`, with `u` of
/// shape `m x p` and `vt` of shape `p x n`, `p = min(m, n)`. One-sided Jacobi,
/// accurate but meant for moderate sizes.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub vt: DenseMatrix,
}

pub fn svd_thin(a: &DenseMatrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd_thin(&a.transpose());
        return Svd {
            u: t.vt.transpose(),
            sigma: t.sigma,
            vt: t.u.transpose(),
        };
    }
    let m = a.rows();
    let n = a.cols();
    let mut w = a.clone();
    let mut v = DenseMatrix::identity(n);

    let tol = 1e-15;
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    app += wp * wp;
                    aqq += wq * wq;
                    apq += wp * wq;
                }
                if apq.abs() <= tol * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    w[(i, p)] = c * wp - s * wq;
                    w[(i, q)] = s * wp + c * wq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| w.col_norm(j)).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());

    let mut u = DenseMatrix::zeros(m, n);
    let mut vt = DenseMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (jj, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        if s > 0.0 {
            for i in 0..m {
                u[(i, jj)] = w[(i, j)] / s;
            }
        }
        for i in 0..n {
            vt[(jj, i)] = v[(i, j)];
        }
    }
    Svd { u, sigma, vt }
}
