//! Interior-ball radius `ε` and dual trace bound `R` for the Stinespring and Choi
//! programs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channels::{ChannelRep, ChoiMatrix, StinespringPair};
use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, ComplexMatrix};
use crate::programs::{strict_feasible_points, ProgramInput, ProgramKind};

/// Default number of random perturbations in [`verify_interior_point`].
pub const DEFAULT_SAMPLES: usize = 64;

/// Slack eigenvalues down to this value count as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct InputsDigest {
    pub n: usize,
    pub m: usize,
    /// Environment dimension, for Stinespring input.
    pub k: Option<usize>,
    /// `(‖Ψ₀*(1)‖_∞, ‖Ψ₁*(1)‖_∞)` or `(‖J‖_∞, ‖J‖_∞)`.
    pub norms: (f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolvabilityReport {
    pub epsilon: f64,
    pub r_bound: f64,
    pub program: ProgramKind,
    pub inputs_digest: InputsDigest,
    /// The map is zero, so `R = 0` for the Choi program.
    pub degenerate: bool,
}

/// `(‖Ψ₀*(1_Z)‖_∞, ‖Ψ₁*(1_Z)‖_∞)`.
pub fn reduced_adjoint_norms(s: &StinespringPair) -> Result<(f64, f64)> {
    let (psi0, psi1) = s.reduced_maps();
    let unit = ComplexMatrix::identity(s.env_dim());
    let norm = |psi: StinespringPair| -> Result<f64> {
        let adj = ChannelRep::Stinespring(psi).adjoint();
        spectral_norm(&adj.apply(&unit)?)
    };
    Ok((norm(psi0)?, norm(psi1)?))
}

/// `1 / (4(1 + ‖Ψ₀*(1)‖_∞ + ‖Ψ₁*(1)‖_∞))`.
pub fn epsilon_stinespring(s: &StinespringPair) -> Result<f64> {
    let (a, b) = reduced_adjoint_norms(s)?;
    Ok(1.0 / (4.0 * (1.0 + a + b)))
}

/// `‖Ψ₀*(1)‖_∞ + ‖Ψ₁*(1)‖_∞ + 2k`.
pub fn r_stinespring(s: &StinespringPair) -> Result<f64> {
    let (a, b) = reduced_adjoint_norms(s)?;
    Ok(a + b + 2.0 * s.env_dim() as f64)
}

/// `1 / (2m)`.
pub fn epsilon_choi(j: &ChoiMatrix) -> f64 {
    1.0 / (2.0 * j.output_dim() as f64)
}

/// `2‖J‖_∞ · n · m`.
pub fn r_choi(j: &ChoiMatrix) -> Result<f64> {
    Ok(2.0 * j.spectral_norm()? * (j.input_dim() * j.output_dim()) as f64)
}

pub fn solvability_report(input: &ProgramInput) -> Result<SolvabilityReport> {
    match input {
        ProgramInput::Stinespring(s) => {
            let norms = reduced_adjoint_norms(s)?;
            Ok(SolvabilityReport {
                epsilon: 1.0 / (4.0 * (1.0 + norms.0 + norms.1)),
                r_bound: norms.0 + norms.1 + 2.0 * s.env_dim() as f64,
                program: ProgramKind::MaxFidStinespring,
                inputs_digest: InputsDigest { n: s.input_dim(), m: s.output_dim(), k: Some(s.env_dim()), norms },
                degenerate: s.a0().max_abs() == 0.0 || s.a1().max_abs() == 0.0,
            })
        }
        ProgramInput::Choi(j) => {
            let norm = j.spectral_norm()?;
            Ok(SolvabilityReport {
                epsilon: epsilon_choi(j),
                r_bound: 2.0 * norm * (j.input_dim() * j.output_dim()) as f64,
                program: ProgramKind::Choi,
                inputs_digest: InputsDigest { n: j.input_dim(), m: j.output_dim(), k: None, norms: (norm, norm) },
                degenerate: norm == 0.0,
            })
        }
        ProgramInput::DensityPair(..) => {
            Err(Error::WrongRegime("solvability bounds are defined for the Stinespring and Choi programs".into()))
        }
    }
}

pub fn verify_interior_point(input: &ProgramInput, epsilon: f64) -> Result<bool> {
    verify_interior_point_with(input, epsilon, DEFAULT_SAMPLES, 0)
}

/// Perturbs the explicit dual point by `samples` random directions `h` with
/// `‖h‖₂ = epsilon` (in orthonormal dual coordinates) and checks that every perturbed
/// slack keeps its eigenvalues above `−FEASIBILITY_TOL`.
pub fn verify_interior_point_with(input: &ProgramInput, epsilon: f64, samples: usize, seed: u64) -> Result<bool> {
    if matches!(input, ProgramInput::DensityPair(..)) {
        return Err(Error::WrongRegime("interior-ball checks apply to the Stinespring and Choi programs".into()));
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon must be finite and nonnegative, got {epsilon}")));
    }
    let prob = input.build()?;
    let y0 = strict_feasible_points(input)?.dual;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let h: Vec<f64> = (0..y0.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = h.iter().map(|x| x * x).sum::<f64>().sqrt();
        let y: Vec<f64> = y0.iter().zip(&h).map(|(a, b)| a + epsilon * b / norm).collect();
        for block in prob.dual_slack(&y) {
            if block.min_eigenvalue()? < -FEASIBILITY_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
