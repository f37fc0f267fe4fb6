use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Which tensor factor survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Partial trace of an operator on `C^{d1} ⊗ C^{d2}` (index `i·d2 + j`).
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), keep: Keep) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    if m.rows() != d1 * d2 || m.cols() != d1 * d2 {
        return Err(Error::Shape(format!(
            "partial trace over {d1}x{d2} factors needs a {0}x{0} matrix, got {1}x{2}",
            d1 * d2,
            m.rows(),
            m.cols()
        )));
    }
    Ok(match keep {
        Keep::First => ComplexMatrix::from_fn(d1, d1, |a, b| (0..d2).map(|j| m[(a * d2 + j, b * d2 + j)]).sum()),
        Keep::Second => ComplexMatrix::from_fn(d2, d2, |a, b| (0..d1).map(|i| m[(i * d2 + a, i * d2 + b)]).sum()),
    })
}

/// `1_d ⊗ A`.
pub fn identity_kron(d: usize, a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(d).kron(a)
}

/// `A ⊗ 1_d`.
pub fn kron_identity(a: &ComplexMatrix, d: usize) -> ComplexMatrix {
    a.kron(&ComplexMatrix::identity(d))
}

/// Permutation taking `C^{d1} ⊗ C^{d2}` to `C^{d2} ⊗ C^{d1}` (as a matrix acting on vectors).
pub fn swap_operator(d1: usize, d2: usize) -> ComplexMatrix {
    let n = d1 * d2;
    let mut s = ComplexMatrix::zeros(n, n);
    for i in 0..d1 {
        for j in 0..d2 {
            s[(j * d1 + i, i * d2 + j)] = super::matrix::ONE;
        }
    }
    s
}

/// Reorders the row space of a `(d1·d2) x c` matrix from `d1 ⊗ d2` to `d2 ⊗ d1`.
pub fn swap_row_factors(a: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    if a.rows() != d1 * d2 {
        return Err(Error::Shape(format!("expected {} rows, got {}", d1 * d2, a.rows())));
    }
    let mut out = ComplexMatrix::zeros(a.rows(), a.cols());
    for i in 0..d1 {
        for j in 0..d2 {
            for c in 0..a.cols() {
                out[(j * d1 + i, c)] = a[(i * d2 + j, c)];
            }
        }
    }
    Ok(out)
}

/// Conjugation by the factor swap on both sides: an operator on `d1 ⊗ d2` becomes one on `d2 ⊗ d1`.
pub fn swap_factors(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    let n = d1 * d2;
    if m.rows() != n || m.cols() != n {
        return Err(Error::Shape(format!("expected {n}x{n}, got {}x{}", m.rows(), m.cols())));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for (a, b) in (0..d1).flat_map(|a| (0..d2).map(move |b| (a, b))) {
        for (c, d) in (0..d1).flat_map(|c| (0..d2).map(move |d| (c, d))) {
            out[(b * d1 + a, d * d1 + c)] = m[(a * d2 + b, c * d2 + d)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::C64;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn product_operator_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random::complex_matrix(&mut rng, 2, 2);
        let b = random::complex_matrix(&mut rng, 3, 3);
        let ab = a.kron(&b);
        let first = partial_trace(&ab, (2, 3), Keep::First).unwrap();
        assert!(first.approx_eq(&a.scale(b.trace()), 1e-13));
        let second = partial_trace(&ab, (2, 3), Keep::Second).unwrap();
        assert!(second.approx_eq(&b.scale(a.trace()), 1e-13));
    }

    #[test]
    fn trace_out_first_factor_of_identity() {
        let id = ComplexMatrix::identity(6);
        let r = partial_trace(&id, (2, 3), Keep::Second).unwrap();
        assert!(r.approx_eq(&ComplexMatrix::identity(3).scale_real(2.0), 0.0));
        assert!(partial_trace(&id, (2, 2), Keep::First).is_err());
    }

    #[test]
    fn random_trace_preservation_and_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = random::complex_matrix(&mut rng, 6, 6);
        let n = random::complex_matrix(&mut rng, 6, 6);
        for keep in [Keep::First, Keep::Second] {
            let t = partial_trace(&m, (2, 3), keep).unwrap();
            assert!((t.trace() - m.trace()).norm() <= 1e-12);
            let s = C64::new(0.3, -1.2);
            let lhs = partial_trace(&(&m.scale(s) + &n), (2, 3), keep).unwrap();
            let rhs = &t.scale(s) + &partial_trace(&n, (2, 3), keep).unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-12));
        }
    }

    #[test]
    fn swap_conjugation_matches_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random::complex_matrix(&mut rng, 2, 2);
        let b = random::complex_matrix(&mut rng, 3, 3);
        let swapped = swap_factors(&a.kron(&b), 2, 3).unwrap();
        assert!(swapped.approx_eq(&b.kron(&a), 1e-14));
        let w = swap_operator(2, 3);
        let via_op = &(&w * &a.kron(&b)) * &w.adjoint();
        assert!(via_op.approx_eq(&swapped, 1e-14));
    }
}
