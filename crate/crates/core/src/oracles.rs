//! Reference computations that do not use the SDP solver.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::ChoiMatrix;
use crate::error::{Error, Result};
use crate::linalg::{
    identity_kron, partial_trace, polar_factor, spectral_norm, trace_norm, unvec, vec, vector_norm, ComplexMatrix,
    HermitianMatrix, Keep, C64,
};
use crate::random;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AscentConfig {
    pub restarts: usize,
    pub max_steps: usize,
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self { restarts: 32, max_steps: 500, step_tol: 1e-10, seed: 0 }
    }
}

impl AscentConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AscentResult {
    /// `‖(Φ ⊗ 1)(u v*)‖₁` at the witness.
    pub lower_bound: f64,
    pub u: Vec<C64>,
    pub v: Vec<C64>,
}

/// Diamond norm of a completely positive map: `‖Tr_Y J(Φ)‖_∞`.
pub fn cp_diamond_oracle(j: &ChoiMatrix) -> Result<f64> {
    if !is_completely_positive(j) {
        return Err(Error::WrongRegime("the CP diamond-norm formula needs a positive semidefinite Choi matrix".into()));
    }
    spectral_norm(&j.trace_output())
}

/// `Σ_i √(p_i q_i)`.
pub fn commuting_fidelity_oracle(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Shape(format!("spectra have lengths {} and {}", p.len(), q.len())));
    }
    for (i, &v) in p.iter().chain(q).enumerate() {
        if !(v >= 0.0) {
            return Err(Error::NegativeEntry { index: i % p.len().max(1), value: v });
        }
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum())
}

/// `(1 ⊗ Aᵀ) J (1 ⊗ B̄)`, which equals `(Φ ⊗ 1)(vec(A) vec(B)*)`.
fn evaluation(j: &ChoiMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let m = j.output_dim();
    &(&identity_kron(m, &a.transpose()) * j.matrix()) * &identity_kron(m, &b.conj())
}

fn objective(j: &ChoiMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    trace_norm(&evaluation(j, a, b)).unwrap_or(0.0)
}

fn normalize(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let f = a.frobenius_norm();
    (f > 0.0 && f.is_finite()).then(|| a.scale_real(1.0 / f))
}

/// Moves `a` along `g` on the unit sphere, trying the full step `g/‖g‖` first and then
/// `a + t·g` with `t` halved up to 20 times; keeps `a` if nothing improves `f`.
fn line_search(
    a: &ComplexMatrix,
    g: &ComplexMatrix,
    current: f64,
    f: impl Fn(&ComplexMatrix) -> f64,
) -> (ComplexMatrix, f64) {
    if let Some(full) = normalize(g) {
        let v = f(&full);
        if v > current {
            return (full, v);
        }
    }
    let mut t = 1.0;
    for _ in 0..=20 {
        if let Some(cand) = normalize(&(a + &g.scale_real(t))) {
            let v = f(&cand);
            if v > current {
                return (cand, v);
            }
        }
        t *= 0.5;
    }
    (a.clone(), current)
}

/// Lower bound on the diamond norm from `max ‖(Φ ⊗ 1)(u v*)‖₁` over unit `u, v`,
/// by alternating ascent in `u = vec(A)` and `v = vec(B)` from random starts.
pub fn rank_one_ascent(j: &ChoiMatrix, cfg: &AscentConfig) -> AscentResult {
    let n = j.input_dim();
    let m = j.output_dim();
    let mut best: Option<(f64, ComplexMatrix, ComplexMatrix)> = None;
    for restart in 0..cfg.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(restart as u64);
        let mut a = unvec(&random::unit_vector(&mut rng, n * n), n, n).expect("n² entries");
        let mut b = unvec(&random::unit_vector(&mut rng, n * n), n, n).expect("n² entries");
        let mut value = objective(j, &a, &b);
        for _ in 0..cfg.max_steps {
            let before = value;

            // Gradient in A at fixed polar factor W of M: conj(Tr_Y(J (1 ⊗ B̄) W*)).
            let w = polar_factor(&evaluation(j, &a, &b), 1e-14).unwrap_or_else(|_| ComplexMatrix::zeros(m * n, m * n));
            let jb = j.matrix() * &identity_kron(m, &b.conj());
            let ga = partial_trace(&(&jb * &w.adjoint()), (m, n), Keep::Second).expect("square").conj();
            (a, value) = line_search(&a, &ga, value, |x| objective(j, x, &b));

            // Gradient in B: (Tr_Y(W* (1 ⊗ Aᵀ) J))ᵀ.
            let w = polar_factor(&evaluation(j, &a, &b), 1e-14).unwrap_or_else(|_| ComplexMatrix::zeros(m * n, m * n));
            let aj = &identity_kron(m, &a.transpose()) * j.matrix();
            let gb = partial_trace(&(&w.adjoint() * &aj), (m, n), Keep::Second).expect("square").transpose();
            (b, value) = line_search(&b, &gb, value, |x| objective(j, &a, x));

            if value - before < cfg.step_tol {
                break;
            }
        }
        if best.as_ref().map_or(true, |(v, _, _)| value > *v) {
            best = Some((value, a, b));
        }
    }
    let (lower_bound, a, b) = best.expect("at least one restart");
    let (u, v) = (vec(&a), vec(&b));
    debug_assert!((vector_norm(&u) - 1.0).abs() < 1e-9);
    AscentResult { lower_bound, u, v }
}

/// Checks the returned witness: recomputes `‖(Φ ⊗ 1)(u v*)‖₁`.
pub fn witness_value(j: &ChoiMatrix, u: &[C64], v: &[C64]) -> Result<f64> {
    let n = j.input_dim();
    let a = unvec(u, n, n)?;
    let b = unvec(v, n, n)?;
    trace_norm(&evaluation(j, &a, &b))
}

/// Whether a Choi matrix is PSD at the tolerance used by [`cp_diamond_oracle`].
pub fn is_completely_positive(j: &ChoiMatrix) -> bool {
    let scale = j.spectral_norm().unwrap_or(1.0).max(1.0);
    j.matrix().hermitian_deviation() <= 1e-9 * scale
        && HermitianMatrix::symmetrize(j.matrix()).min_eigenvalue().map_or(false, |e| e >= -1e-9 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fidelity_direct;
    use crate::random;

    #[test]
    fn cp_oracle_values() {
        assert!((cp_diamond_oracle(&ChoiMatrix::identity(2)).unwrap() - 1.0).abs() < 1e-12);
        let tripled = ChoiMatrix::identity(2).scaled(C64::new(3.0, 0.0));
        assert!((cp_diamond_oracle(&tripled).unwrap() - 3.0).abs() < 1e-12);
        assert!(matches!(cp_diamond_oracle(&ChoiMatrix::transpose_map(2)), Err(Error::WrongRegime(_))));
    }

    #[test]
    fn cp_oracle_matches_ascent_on_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..3 {
            let j = random::cp_choi_matrix(&mut rng, 2, 2);
            let exact = cp_diamond_oracle(&j).unwrap();
            let lower = rank_one_ascent(&j, &AscentConfig::with_seed(1)).lower_bound;
            assert!(lower <= exact + 1e-9);
            assert!(lower >= exact - 1e-6, "{lower} vs {exact}");
        }
    }

    #[test]
    fn commuting_oracle() {
        assert_eq!(commuting_fidelity_oracle(&[1.0], &[1.0]).unwrap(), 1.0);
        assert_eq!(commuting_fidelity_oracle(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let v = commuting_fidelity_oracle(&[0.5, 0.5], &[0.25, 0.75]).unwrap();
        assert!((v - 0.9659258).abs() < 1e-7);
        let direct = fidelity_direct(
            &HermitianMatrix::from_real_diagonal(&[0.5, 0.5]),
            &HermitianMatrix::from_real_diagonal(&[0.25, 0.75]),
        )
        .unwrap();
        assert!((v - direct).abs() < 1e-12);
        assert!(commuting_fidelity_oracle(&[1.0, -0.1], &[1.0, 1.0]).is_err());
        assert!(commuting_fidelity_oracle(&[1.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn ascent_known_values() {
        let zero = ChoiMatrix::new(ComplexMatrix::zeros(4, 4), 2, 2).unwrap();
        assert_eq!(rank_one_ascent(&zero, &AscentConfig::default()).lower_bound, 0.0);
        let swap = rank_one_ascent(&ChoiMatrix::transpose_map(2), &AscentConfig::default());
        assert!(swap.lower_bound >= 2.0 - 1e-6, "{}", swap.lower_bound);
        let id = rank_one_ascent(&ChoiMatrix::identity(2), &AscentConfig::default());
        assert!(id.lower_bound >= 1.0 - 1e-8);
        let check = witness_value(&ChoiMatrix::identity(2), &id.u, &id.v).unwrap();
        assert!((check - id.lower_bound).abs() < 1e-12);
    }

    #[test]
    fn ascent_is_deterministic() {
        let j = random::choi_matrix(&mut ChaCha8Rng::seed_from_u64(32), 2, 2);
        let cfg = AscentConfig { restarts: 4, ..AscentConfig::with_seed(9) };
        assert_eq!(rank_one_ascent(&j, &cfg), rank_one_ascent(&j, &cfg));
    }
}
