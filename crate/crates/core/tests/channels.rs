use cbnorm::channels::{
    adjoint, apply, choi_from_stinespring, reduced_maps, stinespring_from_choi, ChannelRep, ChoiMatrix, StinespringPair,
};
use cbnorm::linalg::{partial_trace, ComplexMatrix, Keep, C64};
use cbnorm::random;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn transpose_map_transposes() {
    let j = ChoiMatrix::transpose_map(3);
    let x = random::complex_matrix(&mut rng(2), 3, 3);
    assert!(j.apply(&x).unwrap().approx_eq(&x.transpose(), 1e-14));
    // Not CP, but it still has a Stinespring pair with A₀ ≠ A₁.
    let s = stinespring_from_choi(&j).unwrap();
    assert!(s.apply(&x).unwrap().approx_eq(&x.transpose(), 1e-10));
}

#[test]
fn identity_representations_agree() {
    let x = random::complex_matrix(&mut rng(3), 2, 2);
    let a = StinespringPair::identity(2).apply(&x).unwrap();
    let b = ChoiMatrix::identity(2).apply(&x).unwrap();
    assert!(a.approx_eq(&x, 1e-14) && b.approx_eq(&x, 1e-14));
}

#[test]
fn shapes_are_checked() {
    assert!(ChoiMatrix::new(ComplexMatrix::identity(5), 2, 2).is_err());
    assert!(StinespringPair::new(ComplexMatrix::zeros(4, 2), ComplexMatrix::zeros(6, 2), 2, 2, 2).is_err());
    let j: ChannelRep = ChoiMatrix::identity(2).into();
    assert!(apply(&j, &ComplexMatrix::identity(3)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn stinespring_and_choi_apply_agree(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, k in 1usize..4) {
        let mut r = rng(seed);
        let s = random::stinespring_pair(&mut r, n, m, k);
        let j = choi_from_stinespring(&s);
        let x = random::complex_matrix(&mut r, n, n);
        // Direct: Tr_Z(A₀ X A₁*).
        let direct = partial_trace(&(&(s.a0() * &x) * &s.a1().adjoint()), (m, k), Keep::First).unwrap();
        prop_assert!(s.apply(&x).unwrap().approx_eq(&direct, 1e-10));
        prop_assert!(j.apply(&x).unwrap().approx_eq(&direct, 1e-10));
    }

    #[test]
    fn choi_round_trip(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let j = random::choi_matrix(&mut rng(seed), n, m);
        let back = choi_from_stinespring(&stinespring_from_choi(&j).unwrap());
        prop_assert!(back.matrix().approx_eq(j.matrix(), 1e-9 * (1.0 + j.matrix().frobenius_norm())));
    }

    #[test]
    fn adjoint_identity(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, k in 1usize..3) {
        let mut r = rng(seed);
        let reps: [ChannelRep; 2] = [
            random::stinespring_pair(&mut r, n, m, k).into(),
            random::choi_matrix(&mut r, n, m).into(),
        ];
        for rep in reps {
            let x = random::complex_matrix(&mut r, n, n);
            let y = random::complex_matrix(&mut r, m, m);
            let lhs = y.inner(&apply(&rep, &x).unwrap());
            let rhs = adjoint(&rep).apply(&y).unwrap().inner(&x);
            prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
            prop_assert!(adjoint(&adjoint(&rep)).to_choi().matrix().approx_eq(rep.to_choi().matrix(), 1e-12));
        }
    }

    #[test]
    fn maps_are_linear(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let mut r = rng(seed);
        let rep: ChannelRep = random::choi_matrix(&mut r, n, m).into();
        let x = random::complex_matrix(&mut r, n, n);
        let y = random::complex_matrix(&mut r, n, n);
        let c = C64::new(0.3, -1.7);
        let lhs = apply(&rep, &(&x.scale(c) + &y)).unwrap();
        let rhs = &apply(&rep, &x).unwrap().scale(c) + &apply(&rep, &y).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-10 * (1.0 + lhs.frobenius_norm())));
    }

    #[test]
    fn channels_preserve_trace(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, k in 1usize..4) {
        prop_assume!(m * k >= n);
        let mut r = rng(seed);
        let ch = random::channel(&mut r, n, m, k);
        let x = random::complex_matrix(&mut r, n, n);
        prop_assert!((ch.apply(&x).unwrap().trace() - x.trace()).norm() < 1e-10 * (1.0 + x.trace().norm()));
        let j = choi_from_stinespring(&ch);
        prop_assert!(j.trace_output().approx_eq(&ComplexMatrix::identity(n), 1e-10));
    }

    #[test]
    fn reduced_maps_have_psd_choi(seed in any::<u64>(), n in 1usize..4, m in 1usize..3, k in 1usize..3) {
        let s = random::stinespring_pair(&mut rng(seed), n, m, k);
        let (psi0, psi1) = reduced_maps(&s);
        for psi in [psi0, psi1] {
            prop_assert_eq!(psi.dims(), (n, k));
            prop_assert!(psi.to_choi().is_psd(1e-9).unwrap());
        }
    }
}
