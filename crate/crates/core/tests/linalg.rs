use cbnorm::linalg::{
    fidelity_direct, herm_eig, herm_eigvals, identity_kron, kron_identity, partial_trace, polar_factor,
    reconstruction_residual, singular_values, spectral_norm, sqrtm_psd, swap_factors, swap_operator, trace_norm,
    unvec, vec, ComplexMatrix, HermitianMatrix, Keep, C64,
};
use cbnorm::random;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn pauli_spectra() {
    let i = C64::new(0.0, 1.0);
    let y = ComplexMatrix::new(2, 2, vec![C64::new(0.0, 0.0), -i, i, C64::new(0.0, 0.0)]).unwrap();
    let vals = herm_eigvals(&HermitianMatrix::new(y.clone()).unwrap()).unwrap();
    assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    assert!((trace_norm(&y).unwrap() - 2.0).abs() < 1e-14);
    assert!((spectral_norm(&y).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn fidelity_of_pure_states_is_overlap() {
    let mut r = rng(1);
    let u = random::unit_vector(&mut r, 3);
    let v = random::unit_vector(&mut r, 3);
    let p = HermitianMatrix::symmetrize(&cbnorm::linalg::outer(&u, &u));
    let q = HermitianMatrix::symmetrize(&cbnorm::linalg::outer(&v, &v));
    let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
    assert!((fidelity_direct(&p, &q).unwrap() - overlap.norm()).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 1usize..7) {
        let h = random::hermitian(&mut rng(seed), n);
        let (vals, vecs) = herm_eig(&h).unwrap();
        prop_assert!(reconstruction_residual(&h, &vals, &vecs) < 1e-10 * (1.0 + h.frobenius_norm()));
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = vals.iter().sum();
        prop_assert!((trace - h.trace_re()).abs() < 1e-10 * (1.0 + h.frobenius_norm()));
    }

    #[test]
    fn square_root_squares_back(seed in any::<u64>(), n in 1usize..6) {
        let p = random::psd(&mut rng(seed), n);
        let s = sqrtm_psd(&p).unwrap();
        prop_assert!((s.as_matrix() * s.as_matrix()).approx_eq(&p, 1e-9 * (1.0 + p.frobenius_norm())));
        prop_assert!(s.min_eigenvalue().unwrap() >= -1e-10);
    }

    #[test]
    fn norm_ordering(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let a = random::complex_matrix(&mut rng(seed), r, c);
        let sv = singular_values(&a).unwrap();
        let tn = trace_norm(&a).unwrap();
        let sn = spectral_norm(&a).unwrap();
        let fro = a.frobenius_norm();
        prop_assert!(sn <= fro + 1e-12 && fro <= tn + 1e-12);
        let sq: f64 = sv.iter().map(|s| s * s).sum();
        prop_assert!((sq.sqrt() - fro).abs() < 1e-10 * (1.0 + fro));
    }

    #[test]
    fn polar_factor_is_unitary_and_attains_trace_norm(seed in any::<u64>(), n in 1usize..5) {
        let a = random::complex_matrix(&mut rng(seed), n, n);
        let w = polar_factor(&a, 1e-14).unwrap();
        prop_assert!((&w.adjoint() * &w).approx_eq(&ComplexMatrix::identity(n), 1e-9));
        let t = (&w.adjoint() * &a).trace();
        prop_assert!((t.re - trace_norm(&a).unwrap()).abs() < 1e-9 * (1.0 + t.re.abs()));
        prop_assert!(t.im.abs() < 1e-9 * (1.0 + t.re.abs()));
    }

    #[test]
    fn partial_traces_of_products(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4) {
        let mut r = rng(seed);
        let a = random::complex_matrix(&mut r, d1, d1);
        let b = random::complex_matrix(&mut r, d2, d2);
        let ab = a.kron(&b);
        prop_assert!(partial_trace(&ab, (d1, d2), Keep::First).unwrap().approx_eq(&a.scale(b.trace()), 1e-10));
        prop_assert!(partial_trace(&ab, (d1, d2), Keep::Second).unwrap().approx_eq(&b.scale(a.trace()), 1e-10));
        prop_assert!(identity_kron(d1, &b).approx_eq(&ComplexMatrix::identity(d1).kron(&b), 0.0));
        prop_assert!(kron_identity(&a, d2).approx_eq(&a.kron(&ComplexMatrix::identity(d2)), 0.0));
        // SWAP (A ⊗ B) SWAP* = B ⊗ A.
        let s = swap_operator(d1, d2);
        prop_assert!((&(&s * &ab) * &s.adjoint()).approx_eq(&b.kron(&a), 1e-12));
        prop_assert!(swap_factors(&ab, d1, d2).unwrap().approx_eq(&b.kron(&a), 1e-12));
    }

    #[test]
    fn vec_round_trips(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let a = random::complex_matrix(&mut rng(seed), r, c);
        prop_assert_eq!(unvec(&vec(&a), r, c).unwrap(), a);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let p = random::density(&mut r, n);
        let q = random::density(&mut r, n);
        let f = fidelity_direct(&p, &q).unwrap();
        prop_assert!((f - fidelity_direct(&q, &p).unwrap()).abs() < 1e-9);
        prop_assert!((-1e-12..=1.0 + 1e-9).contains(&f));
        prop_assert!((fidelity_direct(&p, &p).unwrap() - 1.0).abs() < 1e-8);
    }
}
