use std::ops::Deref;

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Default bound on `max |M - M*|` accepted when constructing a [`HermitianMatrix`].
pub const DEFAULT_HERM_TOL: f64 = 1e-12;

/// Default tolerance below zero tolerated for eigenvalues of PSD arguments.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// Square complex matrix that is Hermitian; the stored entries are exactly `(M + M*)/2`.
#[derive(Clone, PartialEq, Debug)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, DEFAULT_HERM_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, herm_tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!("Hermitian matrix must be square, got {}x{}", m.rows(), m.cols())));
        }
        let deviation = m.hermitian_deviation();
        if deviation > herm_tol {
            return Err(Error::NotHermitian { deviation, tolerance: herm_tol });
        }
        Ok(Self::symmetrize(&m))
    }

    /// Projects a square matrix onto its Hermitian part without any tolerance check.
    pub fn symmetrize(m: &ComplexMatrix) -> Self {
        assert!(m.is_square(), "symmetrize needs a square matrix");
        let n = m.rows();
        let mut out = m.clone();
        for i in 0..n {
            out[(i, i)] = C64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        Self(out)
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Real trace.
    pub fn trace_re(&self) -> f64 {
        self.0.trace().re
    }

    /// `⟨self, other⟩`, which is real for Hermitian arguments.
    pub fn inner_re(&self, other: &HermitianMatrix) -> f64 {
        self.0.inner(&other.0).re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale_real(s))
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        Self(&self.0 - &other.0)
    }

    /// `B* self B`, kept Hermitian.
    pub fn congruence(&self, b: &ComplexMatrix) -> Self {
        Self::symmetrize(&(&(&b.adjoint() * &self.0) * b))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = super::eigen::herm_eig(self)?;
        Ok(vals[0])
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = super::eigen::herm_eig(self)?;
        Ok(vals[vals.len() - 1])
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }
}

impl Deref for HermitianMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl TryFrom<ComplexMatrix> for HermitianMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_symmetrizes_within_tolerance() {
        let m = ComplexMatrix::from_rows(&[
            vec![C64::new(1.0, 1e-14), C64::new(2.0, 1.0)],
            vec![C64::new(2.0, -1.0 + 1e-13), C64::new(3.0, 0.0)],
        ])
        .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h[(0, 0)].im, 0.0);
        assert_eq!(h[(0, 1)], h[(1, 0)].conj());
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(HermitianMatrix::new(r), Err(Error::Shape(_))));
    }
}
