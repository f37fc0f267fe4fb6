use super::eigen::{herm_eig, herm_eigvals};
use super::hermitian::{HermitianMatrix, DEFAULT_PSD_TOL};
use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn herm_fn(h: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let (vals, vecs) = herm_eig(h)?;
    let n = vals.len();
    let fv: Vec<f64> = vals.iter().map(|&x| f(x)).collect();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| vecs[(i, j)] * fv[j]);
    Ok(HermitianMatrix::symmetrize(&(&scaled * &vecs.adjoint())))
}

/// Principal square root of a PSD matrix; eigenvalues in `[-psd_tol, 0)` are clamped to zero.
pub fn sqrtm_psd(p: &HermitianMatrix) -> Result<HermitianMatrix> {
    sqrtm_psd_with_tol(p, DEFAULT_PSD_TOL)
}

pub fn sqrtm_psd_with_tol(p: &HermitianMatrix, psd_tol: f64) -> Result<HermitianMatrix> {
    let (vals, vecs) = herm_eig(p)?;
    if vals[0] < -psd_tol {
        return Err(Error::NotPositiveSemidefinite { eigenvalue: vals[0], tolerance: psd_tol });
    }
    let n = vals.len();
    let roots: Vec<f64> = vals.iter().map(|&x| x.max(0.0).sqrt()).collect();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| vecs[(i, j)] * roots[j]);
    Ok(HermitianMatrix::symmetrize(&(&scaled * &vecs.adjoint())))
}

/// Inverse of a positive definite matrix (smallest eigenvalue must exceed `min_eig`).
pub fn inverse_pd(h: &HermitianMatrix, min_eig: f64) -> Result<HermitianMatrix> {
    let vals = herm_eigvals(h)?;
    if vals[0] <= min_eig {
        return Err(Error::Singular { min_eigenvalue: vals[0] });
    }
    herm_fn(h, |x| 1.0 / x)
}

/// Pseudo-inverse square root restricted to the eigenspaces above `threshold`.
pub fn pinv_sqrt(h: &HermitianMatrix, threshold: f64) -> Result<HermitianMatrix> {
    herm_fn(h, |x| if x > threshold { 1.0 / x.sqrt() } else { 0.0 })
}

/// Hermitian dilation `[[0, A], [A*, 0]]`, whose spectrum is `±σ(A)` padded with zeros.
fn dilation(a: &ComplexMatrix) -> HermitianMatrix {
    let (r, c) = a.shape();
    let mut d = ComplexMatrix::zeros(r + c, r + c);
    for i in 0..r {
        for j in 0..c {
            d[(i, r + j)] = a[(i, j)];
            d[(r + j, i)] = a[(i, j)].conj();
        }
    }
    HermitianMatrix::symmetrize(&d)
}

/// Singular values, descending, `min(rows, cols)` of them.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let k = a.rows().min(a.cols());
    let vals = herm_eigvals(&dilation(a))?;
    Ok(vals.iter().rev().take(k).map(|&s| s.max(0.0)).collect())
}

/// Thin singular triplets `(σ, u, v)` with `A v = σ u`, for every `σ > threshold`, descending.
pub fn singular_triplets(a: &ComplexMatrix, threshold: f64) -> Result<Vec<(f64, Vec<C64>, Vec<C64>)>> {
    let (r, c) = a.shape();
    let (vals, vecs) = herm_eig(&dilation(a))?;
    let s2 = std::f64::consts::SQRT_2;
    let mut out = Vec::new();
    for idx in (0..vals.len()).rev() {
        let sigma = vals[idx];
        if sigma <= threshold || out.len() == r.min(c) {
            break;
        }
        let u: Vec<C64> = (0..r).map(|i| vecs[(i, idx)] * s2).collect();
        let v: Vec<C64> = (0..c).map(|j| vecs[(r + j, idx)] * s2).collect();
        out.push((sigma, u, v));
    }
    Ok(out)
}

/// Partial isometry `Σ u_t v_t*` over singular values above `threshold`;
/// `Re Tr(W* A) = ‖A‖₁` up to the dropped part of the spectrum.
pub fn polar_factor(a: &ComplexMatrix, threshold: f64) -> Result<ComplexMatrix> {
    let (r, c) = a.shape();
    let mut w = ComplexMatrix::zeros(r, c);
    for (_, u, v) in singular_triplets(a, threshold)? {
        for i in 0..r {
            for j in 0..c {
                w[(i, j)] += u[i] * v[j].conj();
            }
        }
    }
    Ok(w)
}

/// `‖A‖₁ = Tr √(A* A)`, the sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

/// Largest singular value.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

/// `F(P, Q) = ‖√P √Q‖₁`.
pub fn fidelity_direct(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::Shape(format!("fidelity arguments differ in dimension: {} vs {}", p.dim(), q.dim())));
    }
    let sp = sqrtm_psd(p)?;
    let sq = sqrtm_psd(q)?;
    trace_norm(&(sp.as_matrix() * sq.as_matrix()))
}

/// Row-major flattening with `vec(E_{i,j}) = e_i ⊗ e_j`.
pub fn vec(a: &ComplexMatrix) -> Vec<C64> {
    a.as_slice().to_vec()
}

pub fn unvec(v: &[C64], rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if v.len() != rows * cols {
        return Err(Error::Shape(format!("cannot reshape {} entries into {rows}x{cols}", v.len())));
    }
    ComplexMatrix::new(rows, cols, v.to_vec())
}

/// Outer product `u v*`.
pub fn outer(u: &[C64], v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
}

pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn normalized(v: &[C64]) -> Vec<C64> {
    let n = vector_norm(v);
    if n == 0.0 {
        return vec![ZERO; v.len()];
    }
    v.iter().map(|z| z / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ONE;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let s = sqrtm_psd(&HermitianMatrix::identity(3)).unwrap();
        assert!(s.approx_eq(&ComplexMatrix::identity(3), 1e-15));
        let s = sqrtm_psd(&HermitianMatrix::from_real_diagonal(&[4.0, 9.0])).unwrap();
        assert!(s.approx_eq(&ComplexMatrix::from_real_diagonal(&[2.0, 3.0]), 1e-14));
    }

    #[test]
    fn sqrt_squaring_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let p = random::psd(&mut rng, 4);
            let s = sqrtm_psd(&p).unwrap();
            assert!(s.min_eigenvalue().unwrap() >= -1e-12);
            let err = (&(s.as_matrix() * s.as_matrix()) - p.as_matrix()).frobenius_norm();
            assert!(err <= 1e-9 * (1.0 + p.frobenius_norm()), "{err}");
        }
    }

    #[test]
    fn sqrt_clamps_and_rejects() {
        let p = HermitianMatrix::from_real_diagonal(&[1.0, -1e-12]);
        let s = sqrtm_psd(&p).unwrap();
        assert_eq!(s[(1, 1)].re, 0.0);
        let bad = HermitianMatrix::from_real_diagonal(&[1.0, -1e-3]);
        match sqrtm_psd(&bad) {
            Err(Error::NotPositiveSemidefinite { eigenvalue, .. }) => assert!((eigenvalue + 1e-3).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn norm_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert!((trace_norm(&i3).unwrap() - 3.0).abs() < 1e-14);
        assert!((spectral_norm(&i3).unwrap() - 1.0).abs() < 1e-14);
        assert!((frobenius_norm(&i3) - 3f64.sqrt()).abs() < 1e-14);
        let d = ComplexMatrix::from_real_diagonal(&[3.0, -4.0]);
        assert!((spectral_norm(&d).unwrap() - 4.0).abs() < 1e-14);
        assert!((frobenius_norm(&d) - 5.0).abs() < 1e-14);
        let u = normalized(&[C64::new(1.0, 2.0), C64::new(0.0, -1.0), ONE]);
        let v = normalized(&[C64::new(0.5, 0.0), C64::new(3.0, 1.0), ZERO]);
        assert!((trace_norm(&outer(&u, &v)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_matches_gram_eigen_oracle() {
        // Oracle: singular values as square roots of eig(A* A).
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        let gram = HermitianMatrix::symmetrize(&(&a.adjoint() * &a));
        let oracle: f64 = herm_eigvals(&gram).unwrap().iter().map(|x| x.max(0.0).sqrt()).sum();
        // Closed form: σ = √2 ± 1, so the sum is 2√2.
        assert!((oracle - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((trace_norm(&a).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn singular_triplets_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random::complex_matrix(&mut rng, 3, 5);
        let mut rec = ComplexMatrix::zeros(3, 5);
        for (s, u, v) in singular_triplets(&a, 1e-12).unwrap() {
            rec = &rec + &outer(&u, &v).scale_real(s);
        }
        assert!(rec.approx_eq(&a, 1e-12));
    }

    #[test]
    fn fidelity_examples() {
        let rho = HermitianMatrix::from_real_diagonal(&[0.3, 0.7]);
        assert!((fidelity_direct(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
        let f = fidelity_direct(
            &HermitianMatrix::from_real_diagonal(&[1.0, 0.0]),
            &HermitianMatrix::from_real_diagonal(&[0.0, 1.0]),
        )
        .unwrap();
        assert!(f.abs() < 1e-12);
        let f = fidelity_direct(
            &HermitianMatrix::from_real_diagonal(&[0.5, 0.5]),
            &HermitianMatrix::from_real_diagonal(&[0.25, 0.75]),
        )
        .unwrap();
        assert!((f - (0.125f64.sqrt() + 0.375f64.sqrt())).abs() < 1e-12);
        assert!((f - 0.9659258).abs() < 1e-7);
    }

    #[test]
    fn vec_of_matrix_units() {
        let e12 = ComplexMatrix::unit(2, 2, 0, 1);
        assert_eq!(vec(&e12), vec![ZERO, ONE, ZERO, ZERO]);
        assert_eq!(vec(&ComplexMatrix::identity(2)), vec![ONE, ZERO, ZERO, ONE]);
        assert!(unvec(&[ONE; 3], 2, 2).is_err());
    }
}
