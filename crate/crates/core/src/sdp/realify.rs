//! Real symmetric embedding of Hermitian matrices and the small dense real kernel
//! used by the interior-point solver.

use crate::error::{Error, Result};
use crate::linalg::{sym_eigvals, ComplexMatrix, HermitianMatrix, C64};

/// Dense row-major real square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Shape(format!("expected {} entries, got {}", n * n, data.len())));
        }
        Ok(Self { n, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn matmul(&self, other: &RealMatrix) -> RealMatrix {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let src = &other.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        RealMatrix { n, data: out }
    }

    pub fn transpose(&self) -> RealMatrix {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j];
            }
        }
        RealMatrix { n, data: out }
    }

    /// `(M + Mᵀ)/2`.
    pub fn symmetrized(&self) -> RealMatrix {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
                out.data[i * n + j] = v;
                out.data[j * n + i] = v;
            }
        }
        out
    }

    pub fn add_scaled(&self, other: &RealMatrix, s: f64) -> RealMatrix {
        RealMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect() }
    }

    pub fn scale(&self, s: f64) -> RealMatrix {
        RealMatrix { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn add_identity(&mut self, s: f64) {
        for i in 0..self.n {
            self.data[i * self.n + i] += s;
        }
    }

    pub fn dot(&self, other: &RealMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        sym_eigvals(self.n, &self.symmetrized().data)
    }

    /// Lower Cholesky factor of a symmetric positive definite matrix, or `None` if a
    /// pivot is not positive.
    pub fn cholesky(&self) -> Option<RealMatrix> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = self.data[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in (j + 1)..n {
                let mut s = self.data[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Some(RealMatrix { n, data: l })
    }

    /// Inverse of a lower-triangular matrix.
    pub fn lower_inverse(&self) -> RealMatrix {
        let n = self.n;
        let mut inv = vec![0.0; n * n];
        for j in 0..n {
            inv[j * n + j] = 1.0 / self.data[j * n + j];
            for i in (j + 1)..n {
                let mut s = 0.0;
                for k in j..i {
                    s += self.data[i * n + k] * inv[k * n + j];
                }
                inv[i * n + j] = -s / self.data[i * n + i];
            }
        }
        RealMatrix { n, data: inv }
    }

    /// Inverse from a lower Cholesky factor: `(L Lᵀ)⁻¹ = L⁻ᵀ L⁻¹`.
    pub fn inverse_from_cholesky(l: &RealMatrix) -> RealMatrix {
        let li = l.lower_inverse();
        li.transpose().matmul(&li).symmetrized()
    }
}

/// Solves `M x = r` for symmetric positive definite `M` (row-major, `n x n`) by
/// Cholesky, returning `None` if the factorization breaks down.
pub(crate) fn cholesky_solve(n: usize, m: &[f64], r: &[f64]) -> Option<Vec<f64>> {
    let l = RealMatrix { n, data: m.to_vec() }.cholesky()?;
    let mut z = r.to_vec();
    for i in 0..n {
        let mut s = z[i];
        for k in 0..i {
            s -= l.data[i * n + k] * z[k];
        }
        z[i] = s / l.data[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = z[i];
        for k in (i + 1)..n {
            s -= l.data[k * n + i] * z[k];
        }
        z[i] = s / l.data[i * n + i];
    }
    z.iter().all(|v| v.is_finite()).then_some(z)
}

/// `[[Re H, −Im H], [Im H, Re H]]`.
pub fn realify(h: &HermitianMatrix) -> RealMatrix {
    let d = h.dim();
    let n = 2 * d;
    let mut out = RealMatrix::zeros(n);
    for r in 0..d {
        for s in 0..d {
            let z = h[(r, s)];
            out.set(r, s, z.re);
            out.set(d + r, d + s, z.re);
            out.set(r, d + s, -z.im);
            out.set(d + r, s, z.im);
        }
    }
    out
}

/// Left inverse of [`realify`] that also maps any real PSD matrix to a PSD Hermitian one:
/// `((X₁₁ + X₂₂) + i(X₂₁ − X₁₂)) / 2`.
pub fn complexify(x: &RealMatrix) -> Result<HermitianMatrix> {
    let n = x.dim();
    if n % 2 != 0 {
        return Err(Error::Shape(format!("realified matrices have even dimension, got {n}")));
    }
    let d = n / 2;
    let m = ComplexMatrix::from_fn(d, d, |r, s| {
        C64::new(0.5 * (x.get(r, s) + x.get(d + r, d + s)), 0.5 * (x.get(d + r, s) - x.get(r, d + s)))
    });
    Ok(HermitianMatrix::symmetrize(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::herm_eigvals;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn diagonal_embedding() {
        let r = realify(&HermitianMatrix::from_real_diagonal(&[1.0, 2.0]));
        let mut expected = RealMatrix::zeros(4);
        for (i, v) in [1.0, 2.0, 1.0, 2.0].into_iter().enumerate() {
            expected.set(i, i, v);
        }
        assert_eq!(r, expected);
    }

    #[test]
    fn pauli_y_spectrum() {
        let i = C64::new(0.0, 1.0);
        let h = HermitianMatrix::new(
            ComplexMatrix::from_rows(&[vec![C64::new(0.0, 0.0), i], vec![-i, C64::new(0.0, 0.0)]]).unwrap(),
        )
        .unwrap();
        let r = realify(&h);
        assert_eq!(r, r.transpose());
        let ev = r.eigenvalues().unwrap();
        for (v, e) in ev.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn spectra_doubled_and_inner_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1usize, 3, 4] {
            let a = random::hermitian(&mut rng, n);
            let b = random::hermitian(&mut rng, n);
            let ev = herm_eigvals(&a).unwrap();
            let doubled = sorted(ev.iter().chain(ev.iter()).copied().collect());
            let got = realify(&a).eigenvalues().unwrap();
            for (x, y) in got.iter().zip(&doubled) {
                assert!((x - y).abs() < 1e-11);
            }
            let lhs = realify(&a).dot(&realify(&b));
            assert!((lhs - 2.0 * a.inner_re(&b)).abs() < 1e-11);
            assert!(complexify(&realify(&a)).unwrap().approx_eq(&a, 1e-15));
        }
    }

    #[test]
    fn psd_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let h = random::hermitian(&mut rng, 3);
            let psd_c = h.min_eigenvalue().unwrap() >= 0.0;
            let psd_r = realify(&h).eigenvalues().unwrap()[0] >= 0.0;
            assert_eq!(psd_c, psd_r);
        }
        let p = random::psd(&mut rng, 3);
        assert!(realify(&p).cholesky().is_some());
    }

    #[test]
    fn cholesky_inverse_and_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let p = realify(&random::psd(&mut rng, 3).add(&HermitianMatrix::identity(3)));
        let l = p.cholesky().unwrap();
        assert!((l.matmul(&l.transpose()).add_scaled(&p, -1.0)).frobenius_norm() < 1e-12);
        let inv = RealMatrix::inverse_from_cholesky(&l);
        assert!(inv.matmul(&p).add_scaled(&RealMatrix::identity(6), -1.0).frobenius_norm() < 1e-10);
        let rhs: Vec<f64> = (0..6).map(|i| i as f64 - 2.0).collect();
        let x = cholesky_solve(6, p.as_slice(), &rhs).unwrap();
        for i in 0..6 {
            let row: f64 = (0..6).map(|j| p.get(i, j) * x[j]).sum();
            assert!((row - rhs[i]).abs() < 1e-10);
        }
        let mut neg = RealMatrix::identity(2);
        neg.set(1, 1, -1.0);
        assert!(neg.cholesky().is_none());
    }
}
