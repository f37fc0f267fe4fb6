//! Seeded random instances: matrices, states, unitaries and channels.
//!
//! Used by the oracles and diagnostics for sampling and by the test suites.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::{ChoiMatrix, StinespringPair};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};

/// Entries with independent standard normal real and imaginary parts.
pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn complex_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    crate::linalg::normalized(&complex_vector(rng, n))
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    HermitianMatrix::symmetrize(&complex_matrix(rng, n, n))
}

/// `G G*` with `G` an `n x n` Gaussian matrix.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    psd_with_rank(rng, n, n)
}

pub fn psd_with_rank<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> HermitianMatrix {
    let g = complex_matrix(rng, n, rank);
    HermitianMatrix::symmetrize(&(&g * &g.adjoint()))
}

/// Random PSD matrix normalized to unit trace.
pub fn density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let p = psd(rng, n);
    let t = p.trace_re();
    p.scale(1.0 / t)
}

/// Matrix with orthonormal columns obtained by Gram-Schmidt on a Gaussian matrix (`rows >= cols`).
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    loop {
        let g = complex_matrix(rng, rows, cols);
        let mut q = ComplexMatrix::zeros(rows, cols);
        let mut ok = true;
        for j in 0..cols {
            let mut v = g.column(j);
            for _pass in 0..2 {
                for k in 0..j {
                    let qk = q.column(k);
                    let proj: C64 = qk.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(&qk) {
                        *vi -= proj * qi;
                    }
                }
            }
            let norm = crate::linalg::vector_norm(&v);
            if norm < 1e-8 {
                ok = false;
                break;
            }
            let v: Vec<C64> = v.iter().map(|z| z / norm).collect();
            q.set_column(j, &v);
        }
        if ok {
            return q;
        }
    }
}

/// Haar-like random unitary (Gram-Schmidt of a Gaussian matrix).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    isometry(rng, n, n)
}

/// Arbitrary (generally non-CP) map through a Gaussian Stinespring pair.
pub fn stinespring_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, k: usize) -> StinespringPair {
    let a0 = complex_matrix(rng, m * k, n);
    let a1 = complex_matrix(rng, m * k, n);
    StinespringPair::new(a0, a1, n, m, k).expect("consistent random shapes")
}

/// Trace-preserving completely positive map `X ↦ Tr_Z(V X V*)` with `V` an isometry.
pub fn channel<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, k: usize) -> StinespringPair {
    let v = isometry(rng, m * k, n);
    StinespringPair::new(v.clone(), v, n, m, k).expect("consistent random shapes")
}

/// Choi matrix with Gaussian entries (an arbitrary linear map).
pub fn choi_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> ChoiMatrix {
    ChoiMatrix::new(complex_matrix(rng, m * n, m * n), n, m).expect("consistent random shapes")
}

/// Choi matrix of a random completely positive (not necessarily trace-preserving) map.
pub fn cp_choi_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> ChoiMatrix {
    ChoiMatrix::new(psd(rng, m * n).into_matrix(), n, m).expect("consistent random shapes")
}
