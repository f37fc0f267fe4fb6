use cbnorm::channels::{ChannelRep, ChoiMatrix, StinespringPair};
use cbnorm::diagnostics::{
    epsilon_choi, epsilon_stinespring, r_choi, r_stinespring, reduced_adjoint_norms, solvability_report,
    verify_interior_point,
};
use cbnorm::linalg::{ComplexMatrix, HermitianMatrix};
use cbnorm::programs::{diamond_norm, hermitian_basis, ProgramInput};
use cbnorm::random;
use cbnorm::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `‖A_b* (1_Y ⊗ 1_Z) A_b‖` computed straight from the pair, without reduced maps.
fn direct_norm(a: &ComplexMatrix) -> f64 {
    let g = HermitianMatrix::symmetrize(&(&a.adjoint() * a));
    g.max_eigenvalue().unwrap()
}

#[test]
fn stinespring_norms_match_direct_gram() {
    let mut g = rng(31);
    for _ in 0..5 {
        let s = random::stinespring_pair(&mut g, 2, 3, 2);
        let (a, b) = reduced_adjoint_norms(&s).unwrap();
        assert!((a - direct_norm(s.a0())).abs() < 1e-12 && (b - direct_norm(s.a1())).abs() < 1e-12);
        let eps = epsilon_stinespring(&s).unwrap();
        assert!((eps - 1.0 / (4.0 * (1.0 + a + b))).abs() < 1e-15);
        assert!((r_stinespring(&s).unwrap() - (a + b + 4.0)).abs() < 1e-12);
    }
}

#[test]
fn choi_epsilon_depends_only_on_output_dimension() {
    assert_eq!(epsilon_choi(&ChoiMatrix::identity(2)), 0.25);
    assert_eq!(epsilon_choi(&random::choi_matrix(&mut rng(32), 4, 2)), 0.25);
    assert!((epsilon_choi(&random::choi_matrix(&mut rng(33), 2, 5)) - 0.1).abs() < 1e-16);
}

#[test]
fn optimal_dual_trace_respects_bound() {
    // The dual objective is the trace of the dual operator in the orthonormal basis,
    // so β itself must sit below R.
    let mut g = rng(34);
    for _ in 0..4 {
        let s = random::stinespring_pair(&mut g, 2, 2, 2);
        let r = diamond_norm(&ChannelRep::Stinespring(s.clone()), 1e-8).unwrap();
        assert!(r.certificate.beta <= r_stinespring(&s).unwrap() + 1e-6);
        let j = random::choi_matrix(&mut g, 2, 2);
        let r = diamond_norm(&ChannelRep::Choi(j.clone()), 1e-8).unwrap();
        assert!(r.certificate.beta <= r_choi(&j).unwrap() + 1e-6);
    }
}

#[test]
fn interior_balls_at_formula_radius() {
    let mut g = rng(35);
    for _ in 0..5 {
        let s = random::stinespring_pair(&mut g, 2, 2, 3);
        let eps = epsilon_stinespring(&s).unwrap();
        assert!(verify_interior_point(&ProgramInput::Stinespring(s), eps).unwrap());
        let j = random::choi_matrix(&mut g, 3, 2);
        let eps = epsilon_choi(&j);
        assert!(verify_interior_point(&ProgramInput::Choi(j), eps).unwrap());
    }
}

#[test]
fn zero_map_is_degenerate() {
    let zero = StinespringPair::new(ComplexMatrix::zeros(4, 2), ComplexMatrix::zeros(4, 2), 2, 2, 2).unwrap();
    let rep = solvability_report(&ProgramInput::Stinespring(zero)).unwrap();
    assert_eq!(rep.epsilon, 0.25);
    assert_eq!(rep.r_bound, 4.0);
    assert!(rep.degenerate);
}

#[test]
fn density_pairs_are_out_of_scope() {
    let p = HermitianMatrix::identity(2);
    let input = ProgramInput::DensityPair(p.clone(), p);
    assert!(matches!(solvability_report(&input), Err(Error::WrongRegime(_))));
    assert!(verify_interior_point(&input, 0.1).is_err());
    assert_eq!(hermitian_basis(3).len(), 9);
}
