//! Dense real symmetric eigensolver.
//!
//! Householder reduction to tridiagonal form, implicit QL for all eigenvalues,
//! inverse iteration for selected eigenvectors, and cyclic Jacobi for the
//! small projected problems used in Rayleigh–Ritz refinement. Matrices are
//! row-major `n × n` slices.

use alloc::vec;
use alloc::vec::Vec;

use libm::{fabs, hypot, sqrt};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("QL iteration did not converge for eigenvalue {index} after {iterations} sweeps (matrix norm {norm:e})")]
    NoConvergence { index: usize, iterations: usize, norm: f64 },
    #[error("Jacobi iteration did not converge: off-diagonal norm {off:e} after {sweeps} sweeps")]
    JacobiNoConvergence { sweeps: usize, off: f64 },
    #[error("matrix contains non-finite entries")]
    NonFinite,
}

/// Symmetric tridiagonal matrix: `off[i]` couples `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let l = if i > 0 { fabs(self.off[i - 1]) } else { 0.0 };
                let r = if i + 1 < n { fabs(self.off[i]) } else { 0.0 };
                fabs(self.diag[i]) + l + r
            })
            .fold(0.0, f64::max)
    }
}

/// `QᵀAQ = T` with `Q = H_0 H_1 ⋯`, each `H_k = I − β v vᵀ` acting on indices `k+1..n`.
#[derive(Debug, Clone)]
pub struct Householder {
    n: usize,
    reflectors: Vec<(Vec<f64>, f64)>,
    pub tri: Tridiagonal,
}

pub fn tridiagonalize(mut a: Vec<f64>, n: usize) -> Result<Householder, SolverError> {
    assert_eq!(a.len(), n * n, "matrix must be n × n");
    if a.iter().any(|x| !x.is_finite()) {
        return Err(SolverError::NonFinite);
    }
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<f64> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
        let norm = sqrt(v.iter().map(|x| x * x).sum());
        diag[k] = a[k * n + k];
        if norm == 0.0 || v[1..].iter().all(|&x| x == 0.0) {
            off[k] = v[0];
            reflectors.push((Vec::new(), 0.0));
            continue;
        }
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let beta = 2.0 / vv;
        // p = β A₂₂ v, w = p − (β/2)(vᵀp) v, A₂₂ ← A₂₂ − v wᵀ − w vᵀ.
        let base = k + 1;
        for i in 0..m {
            let row = &a[(base + i) * n + base..(base + i) * n + n];
            p[i] = beta * row.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>();
        }
        let kk = 0.5 * beta * v.iter().zip(&p[..m]).map(|(x, y)| x * y).sum::<f64>();
        for i in 0..m {
            p[i] -= kk * v[i];
        }
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[(base + i) * n + base..(base + i) * n + n];
            for j in 0..m {
                row[j] -= vi * p[j] + wi * v[j];
            }
        }
        off[k] = alpha;
        reflectors.push((v, beta));
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2];
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    if n >= 1 {
        diag[n - 1] = a[(n - 1) * n + n - 1];
    }
    Ok(Householder { n, reflectors, tri: Tridiagonal { diag, off } })
}

impl Householder {
    /// Maps an eigenvector of the tridiagonal matrix to one of the original.
    pub fn back_transform(&self, z: &mut [f64]) {
        assert_eq!(z.len(), self.n);
        for (k, (v, beta)) in self.reflectors.iter().enumerate().rev() {
            if *beta == 0.0 {
                continue;
            }
            let tail = &mut z[k + 1..];
            let s = beta * tail.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
            for (x, y) in tail.iter_mut().zip(v) {
                *x -= s * y;
            }
        }
    }
}

/// All eigenvalues of a symmetric tridiagonal matrix, ascending, by implicit QL.
pub fn tridiagonal_eigenvalues(t: &Tridiagonal) -> Result<Vec<f64>, SolverError> {
    const MAX_ITER: usize = 60;
    let n = t.diag.len();
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    e.push(0.0);
    let norm = t.norm_bound();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = fabs(d[m]) + fabs(d[m + 1]);
                if fabs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(SolverError::NoConvergence { index: l, iterations: iter, norm });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { fabs(r) } else { -fabs(r) });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Solves `(T − σI) x = b` by Gaussian elimination with partial pivoting;
/// zero pivots are replaced by `tiny`.
fn shifted_solve(t: &Tridiagonal, sigma: f64, b: &mut [f64], tiny: f64) {
    let n = t.diag.len();
    if n == 0 {
        return;
    }
    // Rows after pivoting have up to three nonzeros: u0 (diag), u1, u2.
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut mult = vec![0.0; n];
    let mut swapped = vec![false; n];
    let mut a = t.diag[0] - sigma;
    let mut c = if n > 1 { t.off[0] } else { 0.0 };
    for i in 0..n {
        if i + 1 == n {
            u0[i] = if a == 0.0 { tiny } else { a };
            break;
        }
        let below = t.off[i];
        let next_diag = t.diag[i + 1] - sigma;
        let next_off = if i + 2 < n { t.off[i + 1] } else { 0.0 };
        if fabs(below) > fabs(a) {
            swapped[i] = true;
            u0[i] = below;
            u1[i] = next_diag;
            u2[i] = next_off;
            let m = a / below;
            mult[i] = m;
            a = c - m * next_diag;
            c = -m * next_off;
        } else {
            let piv = if a == 0.0 { tiny } else { a };
            u0[i] = piv;
            u1[i] = c;
            u2[i] = 0.0;
            let m = below / piv;
            mult[i] = m;
            a = next_diag - m * c;
            c = next_off;
        }
    }
    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            b.swap(i, i + 1);
        }
        b[i + 1] -= mult[i] * b[i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= u1[i] * b[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * b[i + 2];
        }
        b[i] = s / u0[i];
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let nrm = sqrt(x.iter().map(|v| v * v).sum());
    if nrm > 0.0 {
        for v in x.iter_mut() {
            *v /= nrm;
        }
    }
    nrm
}

fn orthogonalize(x: &mut [f64], basis: &[Vec<f64>]) {
    for q in basis {
        let s: f64 = x.iter().zip(q).map(|(a, b)| a * b).sum();
        for (a, b) in x.iter_mut().zip(q) {
            *a -= s * b;
        }
    }
}

/// Eigenvectors of `t` for the given eigenvalues by inverse iteration. Each new
/// vector is orthogonalised against the earlier ones, so repeated or clustered
/// eigenvalues yield an orthonormal set.
pub fn tridiagonal_eigenvectors(t: &Tridiagonal, values: &[f64]) -> Vec<Vec<f64>> {
    let n = t.diag.len();
    let norm = t.norm_bound().max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * norm;
    let mut seed: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    for &lambda in values {
        let mut x: Vec<f64> = (0..n)
            .map(|_| {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        orthogonalize(&mut x, &out);
        normalize(&mut x);
        for _ in 0..4 {
            shifted_solve(t, lambda, &mut x, tiny);
            orthogonalize(&mut x, &out);
            orthogonalize(&mut x, &out);
            normalize(&mut x);
        }
        out.push(x);
    }
    out
}

/// Cyclic Jacobi on a small symmetric matrix. Returns ascending eigenvalues and
/// the matching eigenvectors as columns of a row-major `m × m` matrix.
pub fn jacobi_eigen(mut b: Vec<f64>, m: usize) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
    const MAX_SWEEPS: usize = 100;
    assert_eq!(b.len(), m * m);
    if b.iter().any(|x| !x.is_finite()) {
        return Err(SolverError::NonFinite);
    }
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    let off = |b: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    s += b[i * m + j] * b[i * m + j];
                }
            }
        }
        sqrt(s)
    };
    let mut sweeps = 0;
    loop {
        // Rotate only entries that are not negligible relative to their
        // diagonal pair; this keeps tiny eigenvalues of PSD input relatively accurate.
        let mut rotated = false;
        if sweeps >= MAX_SWEEPS {
            return Err(SolverError::JacobiNoConvergence { sweeps, off: off(&b) });
        }
        sweeps += 1;
        for p in 0..m {
            for q in p + 1..m {
                let apq = b[p * m + q];
                if fabs(apq) <= f64::EPSILON * sqrt(fabs(b[p * m + p] * b[q * m + q])) {
                    continue;
                }
                rotated = true;
                let (app, aqq) = (b[p * m + p], b[q * m + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..m {
                    let (bkp, bkq) = (b[k * m + p], b[k * m + q]);
                    b[k * m + p] = c * bkp - s * bkq;
                    b[k * m + q] = s * bkp + c * bkq;
                }
                for k in 0..m {
                    let (bpk, bqk) = (b[p * m + k], b[q * m + k]);
                    b[p * m + k] = c * bpk - s * bqk;
                    b[q * m + k] = s * bpk + c * bqk;
                }
                for k in 0..m {
                    let (vkp, vkq) = (v[k * m + p], v[k * m + q]);
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| b[i * m + i].total_cmp(&b[j * m + j]));
    let values = order.iter().map(|&i| b[i * m + i]).collect();
    let mut vectors = vec![0.0; m * m];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..m {
            vectors[k * m + new] = v[k * m + old];
        }
    }
    Ok((values, vectors))
}

/// All eigenvalues of a dense symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: Vec<f64>, n: usize) -> Result<Vec<f64>, SolverError> {
    tridiagonal_eigenvalues(&tridiagonalize(a, n)?.tri)
}

/// All eigenvalues, plus orthonormal eigenvectors for those `≤ threshold`.
#[derive(Debug, Clone)]
pub struct LowEigen {
    pub values: Vec<f64>,
    pub low_vectors: Vec<Vec<f64>>,
}

pub fn low_eigenpairs(a: Vec<f64>, n: usize, threshold: f64) -> Result<LowEigen, SolverError> {
    let h = tridiagonalize(a, n)?;
    let values = tridiagonal_eigenvalues(&h.tri)?;
    let low: Vec<f64> = values.iter().copied().take_while(|&x| x <= threshold).collect();
    let mut low_vectors = tridiagonal_eigenvectors(&h.tri, &low);
    for z in &mut low_vectors {
        h.back_transform(z);
    }
    Ok(LowEigen { values, low_vectors })
}
