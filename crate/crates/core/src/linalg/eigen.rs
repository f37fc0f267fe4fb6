//! Hermitian eigendecomposition: Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit-shift QL iterations.

use super::hermitian::HermitianMatrix;
use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and a unitary matrix of eigenvectors (as columns)
/// with `H = V diag(λ) V*`.
pub fn herm_eig(h: &HermitianMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let (vals, vecs) = decompose(h.as_matrix(), true)?;
    Ok((vals, vecs.expect("eigenvectors requested")))
}

/// Eigenvalues only, ascending.
pub fn herm_eigvals(h: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(decompose(h.as_matrix(), false)?.0)
}

/// Eigenvalues of a real symmetric matrix given row-major, ascending.
pub fn sym_eigvals(n: usize, a: &[f64]) -> Result<Vec<f64>> {
    let m = ComplexMatrix::from_fn(n, n, |i, j| C64::new(a[i * n + j], 0.0));
    Ok(decompose(&m, false)?.0)
}

/// Eigenpairs of a real symmetric matrix; eigenvectors are returned as columns of a
/// row-major `n x n` array.
pub fn sym_eig(n: usize, a: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = ComplexMatrix::from_fn(n, n, |i, j| C64::new(a[i * n + j], 0.0));
    let (vals, vecs) = decompose(&m, true)?;
    let vecs = vecs.expect("eigenvectors requested");
    Ok((vals, vecs.as_slice().iter().map(|z| z.re).collect()))
}

/// `‖V diag(λ) V* − H‖_F`.
pub fn reconstruction_residual(h: &ComplexMatrix, vals: &[f64], vecs: &ComplexMatrix) -> f64 {
    let n = vals.len();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| vecs[(i, j)] * vals[j]);
    (&(&scaled * &vecs.adjoint()) - h).frobenius_norm()
}

fn decompose(a: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = a.rows();
    if n == 1 {
        return Ok((vec![a[(0, 0)].re], want_vectors.then(|| ComplexMatrix::identity(1))));
    }
    let (diag, off, q) = tridiagonalize(a, want_vectors);
    let mut d = diag;
    let mut e = off;
    e.push(0.0);
    let mut z = want_vectors.then(|| vec![0.0; n * n]);
    if let Some(z) = z.as_mut() {
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
    }
    if let Err(()) = tql(&mut d, &mut e, z.as_deref_mut()) {
        let residual = e.iter().map(|x| x.abs()).fold(0.0, f64::max);
        return Err(Error::DecompositionFailure { residual });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let vals: Vec<f64> = order.iter().map(|&i| d[i]).collect();

    let vecs = match (q, z) {
        (Some(q), Some(z)) => {
            // V = Q Z, with columns permuted into ascending order.
            let mut v = ComplexMatrix::zeros(n, n);
            for (col, &src) in order.iter().enumerate() {
                for i in 0..n {
                    let mut acc = ZERO;
                    for k in 0..n {
                        acc += q[(i, k)] * z[k * n + src];
                    }
                    v[(i, col)] = acc;
                }
            }
            Some(v)
        }
        _ => None,
    };
    Ok((vals, vecs))
}

/// Reduces a Hermitian matrix to real symmetric tridiagonal form `T = Q* A Q`.
/// Returns the diagonal, the (nonnegative) off-diagonal, and `Q` when requested.
fn tridiagonalize(a: &ComplexMatrix, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<ComplexMatrix>) {
    let n = a.rows();
    let mut a = a.clone();
    let mut q = want_q.then(|| ComplexMatrix::identity(n));
    let mut v = vec![ZERO; n];
    let mut w = vec![ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let xnorm = ((k + 1)..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let tail = ((k + 2)..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let x0_abs = x0.norm();
        let phase = if x0_abs == 0.0 { ONE } else { x0 / x0_abs };
        let alpha = -phase * xnorm;

        v.iter_mut().for_each(|z| *z = ZERO);
        v[k + 1] = x0 - alpha;
        for i in (k + 2)..n {
            v[i] = a[(i, k)];
        }
        let vnorm = (2.0 * xnorm * (xnorm + x0_abs)).sqrt();
        for z in v.iter_mut().skip(k + 1) {
            *z /= vnorm;
        }

        // A <- H A H with H = I - 2 v v*:  A - 2 v w* - 2 w v* + 4 c v v*, w = A v, c = v* w.
        for i in 0..n {
            let mut acc = ZERO;
            for j in (k + 1)..n {
                acc += a[(i, j)] * v[j];
            }
            w[i] = acc;
        }
        let c: f64 = ((k + 1)..n).map(|i| (v[i].conj() * w[i]).re).sum();
        for i in 0..n {
            for j in 0..n {
                let upd = v[i] * w[j].conj() * 2.0 + w[i] * v[j].conj() * 2.0 - v[i] * v[j].conj() * (4.0 * c);
                a[(i, j)] -= upd;
            }
        }
        // Exact zeros below the subdiagonal of column k (and row k).
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in (k + 2)..n {
            a[(i, k)] = ZERO;
            a[(k, i)] = ZERO;
        }

        if let Some(q) = q.as_mut() {
            // Q <- Q H
            for i in 0..n {
                let mut qv = ZERO;
                for j in (k + 1)..n {
                    qv += q[(i, j)] * v[j];
                }
                for j in (k + 1)..n {
                    q[(i, j)] -= qv * v[j].conj() * 2.0;
                }
            }
        }
    }

    // Diagonal unitary that makes the off-diagonal real and nonnegative.
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n - 1);
    let mut delta = vec![ONE; n];
    for i in 0..n {
        diag.push(a[(i, i)].re);
        if i + 1 < n {
            let t = a[(i + 1, i)];
            let r = t.norm();
            off.push(r);
            delta[i + 1] = if r == 0.0 { delta[i] } else { delta[i] * (t / r) };
        }
    }
    if let Some(q) = q.as_mut() {
        for i in 0..n {
            for (j, d) in delta.iter().enumerate() {
                q[(i, j)] *= d;
            }
        }
    }
    (diag, off, q)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix; `e[i]` couples `i` and `i+1`,
/// `e[n-1] = 0`. Accumulates rotations into `z` (row-major) when given.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> std::result::Result<(), ()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(());
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
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
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
