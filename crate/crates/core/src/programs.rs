//! The fidelity, maximum-output-fidelity and Choi-matrix semidefinite programs.
//!
//! Each program's `2×2` operator block `[[Z₀, X], [X*, Z₁]]` is a single PSD block.
//! Blocks that equal a fixed linear image of other variables (`Z_b = Ψ_b(ρ_b)`,
//! `Z_b = 1_Y ⊗ ρ_b`, or the data `P`, `Q`) are pinned by one scalar constraint per
//! element of an orthonormal Hermitian basis, so the multiplier vector `y` is the
//! coordinate vector of the corresponding dual operator.

use std::io::Write;

use crate::channels::{ChannelRep, ChoiMatrix, StinespringPair};
use crate::error::{Error, Result};
use crate::linalg::{
    inverse_pd, partial_trace, pinv_sqrt, singular_values, spectral_norm, ComplexMatrix, HermitianMatrix, Keep,
    C64, DEFAULT_PSD_TOL,
};
use crate::sdp::{check, solve_with_observer, Certificate, SdpProblem, SdpSolution, SolveStatus, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProgramKind {
    Fidelity,
    MaxFidStinespring,
    Choi,
}

impl ProgramKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Fidelity => "fidelity",
            Self::MaxFidStinespring => "maxfid-stinespring",
            Self::Choi => "choi",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub status: SolveStatus,
    pub certificate: Certificate,
    pub program: ProgramKind,
    /// Dual slack `Σ y_i A_i − C`, per block.
    pub dual_witness: Vec<HermitianMatrix>,
    pub solution: SdpSolution,
}

/// Orthonormal basis of the Hermitian `d×d` matrices: `E_aa`, `(E_ab + E_ba)/√2`,
/// `i(E_ab − E_ba)/√2` for `a < b`.
pub fn hermitian_basis(d: usize) -> Vec<HermitianMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        out.push(HermitianMatrix::symmetrize(&ComplexMatrix::unit(d, d, a, a)));
        for b in (a + 1)..d {
            let mut re = ComplexMatrix::zeros(d, d);
            re[(a, b)] = C64::new(r, 0.0);
            re[(b, a)] = C64::new(r, 0.0);
            out.push(HermitianMatrix::symmetrize(&re));
            let mut im = ComplexMatrix::zeros(d, d);
            im[(a, b)] = C64::new(0.0, r);
            im[(b, a)] = C64::new(0.0, -r);
            out.push(HermitianMatrix::symmetrize(&im));
        }
    }
    out
}

/// `h` placed at `offset` on the diagonal of a zero `dim×dim` matrix.
fn embed(dim: usize, offset: usize, h: &ComplexMatrix) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    m.set_submatrix(offset, offset, h);
    HermitianMatrix::symmetrize(&m)
}

/// `½[[0, M], [M*, 0]]`.
fn off_diagonal_half(m: &ComplexMatrix) -> HermitianMatrix {
    let d = m.rows();
    let mut out = ComplexMatrix::zeros(2 * d, 2 * d);
    out.set_submatrix(0, d, &m.scale_real(0.5));
    out.set_submatrix(d, 0, &m.adjoint().scale_real(0.5));
    HermitianMatrix::symmetrize(&out)
}

fn require_psd(h: &HermitianMatrix) -> Result<()> {
    let min = h.min_eigenvalue()?;
    if min < -DEFAULT_PSD_TOL {
        return Err(Error::NotPositiveSemidefinite { eigenvalue: min, tolerance: DEFAULT_PSD_TOL });
    }
    Ok(())
}

pub fn build_fidelity_sdp(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<SdpProblem> {
    if p.dim() != q.dim() {
        return Err(Error::Shape(format!("P is {0}x{0} but Q is {1}x{1}", p.dim(), q.dim())));
    }
    require_psd(p)?;
    require_psd(q)?;
    let n = p.dim();
    let mut prob = SdpProblem::new("fidelity", vec![2 * n], vec![off_diagonal_half(&ComplexMatrix::identity(n))])?;
    let basis = hermitian_basis(n);
    for (offset, data) in [(0, p), (n, q)] {
        for e in &basis {
            prob.add_constraint(vec![(0, embed(2 * n, offset, e))], e.inner_re(data))?;
        }
    }
    Ok(prob)
}

pub fn build_maxfid_sdp(s: &StinespringPair) -> Result<SdpProblem> {
    let (n, k) = (s.input_dim(), s.env_dim());
    let objective =
        vec![HermitianMatrix::zeros(n), HermitianMatrix::zeros(n), off_diagonal_half(&ComplexMatrix::identity(k))];
    let mut prob = SdpProblem::new("maxfid-stinespring", vec![n, n, 2 * k], objective)?;
    prob.add_constraint(vec![(0, HermitianMatrix::identity(n))], 1.0)?;
    prob.add_constraint(vec![(1, HermitianMatrix::identity(n))], 1.0)?;
    let basis = hermitian_basis(k);
    for (which, offset) in [(0usize, 0usize), (1, k)] {
        for e in &basis {
            // ⟨E, Z_b⟩ − ⟨Ψ_b*(E), ρ_b⟩ = 0
            let pulled = HermitianMatrix::symmetrize(&s.reduced_adjoint_apply(which, e));
            prob.add_constraint(vec![(2, embed(2 * k, offset, e)), (which, pulled.scale(-1.0))], 0.0)?;
        }
    }
    Ok(prob)
}

pub fn build_choi_sdp(j: &ChoiMatrix) -> Result<SdpProblem> {
    let (n, m) = (j.input_dim(), j.output_dim());
    let d = m * n;
    let objective = vec![HermitianMatrix::zeros(n), HermitianMatrix::zeros(n), off_diagonal_half(j.matrix())];
    let mut prob = SdpProblem::new("choi", vec![n, n, 2 * d], objective)?;
    prob.add_constraint(vec![(0, HermitianMatrix::identity(n))], 1.0)?;
    prob.add_constraint(vec![(1, HermitianMatrix::identity(n))], 1.0)?;
    let basis = hermitian_basis(d);
    for (which, offset) in [(0usize, 0usize), (1, d)] {
        for e in &basis {
            // ⟨E, Z_b⟩ − ⟨Tr_Y E, ρ_b⟩ = 0
            let reduced = HermitianMatrix::symmetrize(&partial_trace(e, (m, n), Keep::Second)?);
            prob.add_constraint(vec![(2, embed(2 * d, offset, e)), (which, reduced.scale(-1.0))], 0.0)?;
        }
    }
    Ok(prob)
}

/// Solves a compiled program and attaches a certificate. With `trace`, one line per
/// iterate is written there.
pub fn solve_program(
    prob: &SdpProblem,
    kind: ProgramKind,
    cfg: &SolverConfig,
    trace: Option<&mut dyn Write>,
) -> Result<NormResult> {
    let solution = match trace {
        Some(sink) => solve_with_observer(prob, cfg, &mut |rec| {
            let _ = writeln!(sink, "{rec}");
        })?,
        None => solve_with_observer(prob, cfg, &mut |_| {})?,
    };
    let certificate = check(prob, &solution)?;
    Ok(NormResult {
        value: solution.alpha,
        status: solution.status,
        certificate,
        program: kind,
        dual_witness: solution.s.clone(),
        solution,
    })
}

fn config(tol: f64) -> Result<SolverConfig> {
    SolverConfig::new(tol, SolverConfig::default().max_iter)
}

pub fn fidelity_sdp(p: &HermitianMatrix, q: &HermitianMatrix, tol: f64) -> Result<NormResult> {
    fidelity_sdp_with(p, q, &config(tol)?, None)
}

pub fn fidelity_sdp_with(
    p: &HermitianMatrix,
    q: &HermitianMatrix,
    cfg: &SolverConfig,
    trace: Option<&mut dyn Write>,
) -> Result<NormResult> {
    solve_program(&build_fidelity_sdp(p, q)?, ProgramKind::Fidelity, cfg, trace)
}

pub fn max_output_fidelity(s: &StinespringPair, tol: f64) -> Result<NormResult> {
    max_output_fidelity_with(s, &config(tol)?, None)
}

pub fn max_output_fidelity_with(
    s: &StinespringPair,
    cfg: &SolverConfig,
    trace: Option<&mut dyn Write>,
) -> Result<NormResult> {
    solve_program(&build_maxfid_sdp(s)?, ProgramKind::MaxFidStinespring, cfg, trace)
}

/// Diamond norm through the program matching the representation.
pub fn diamond_norm(rep: &ChannelRep, tol: f64) -> Result<NormResult> {
    diamond_norm_with(rep, &config(tol)?, None)
}

pub fn diamond_norm_with(rep: &ChannelRep, cfg: &SolverConfig, trace: Option<&mut dyn Write>) -> Result<NormResult> {
    match rep {
        ChannelRep::Stinespring(s) => max_output_fidelity_with(s, cfg, trace),
        ChannelRep::Choi(j) => solve_program(&build_choi_sdp(j)?, ProgramKind::Choi, cfg, trace),
    }
}

/// CB spectral norm as the diamond norm of the adjoint map.
pub fn cb_spectral_norm(rep: &ChannelRep, tol: f64) -> Result<NormResult> {
    cb_spectral_norm_with(rep, &config(tol)?, None)
}

pub fn cb_spectral_norm_with(
    rep: &ChannelRep,
    cfg: &SolverConfig,
    trace: Option<&mut dyn Write>,
) -> Result<NormResult> {
    diamond_norm_with(&rep.adjoint(), cfg, trace)
}

/// `Y` for which `½⟨P,Y⟩ + ½⟨Q,Z⟩` with `[[Y, −1], [−1, Z]] ⪰ 0` is the fidelity
/// program's dual, read off a fidelity-program solution.
pub fn fidelity_dual_operator(result: &NormResult) -> Result<HermitianMatrix> {
    if result.program != ProgramKind::Fidelity {
        return Err(Error::WrongRegime("dual operator Y is defined for the fidelity program".into()));
    }
    let w = &result.dual_witness[0];
    let n = w.dim() / 2;
    Ok(HermitianMatrix::symmetrize(&w.submatrix(0, 0, n, n).scale_real(2.0)))
}

/// Balances `Y ↦ λY` so that `⟨P, λY⟩ = ⟨Q, (λY)⁻¹⟩`; returns
/// `(√(⟨P,Y⟩⟨Q,Y⁻¹⟩), λ)`.
pub fn alberti_check(p: &HermitianMatrix, q: &HermitianMatrix, y: &HermitianMatrix) -> Result<(f64, f64)> {
    if p.dim() != q.dim() || p.dim() != y.dim() {
        return Err(Error::Shape("P, Q and Y must have the same dimension".into()));
    }
    let yinv = inverse_pd(y, 1e-10)?;
    let py = p.inner_re(y);
    let qy = q.inner_re(&yinv);
    if !(py > 0.0) {
        return Err(Error::InvalidParameter(format!("⟨P,Y⟩ must be positive, got {py}")));
    }
    let lambda = (qy / py).sqrt();
    Ok(((py * qy).sqrt(), lambda))
}

/// `σ_max(A^{+1/2} X B^{+1/2})` for the returned operator block `[[A, X], [X*, B]]`,
/// restricted to eigenspaces of `A`, `B` above `1e-8·max(λ_max, 1)`.
pub fn block_contraction_norm(result: &NormResult) -> Result<f64> {
    let w = result.solution.x.last().expect("programs have at least one block");
    let d = w.dim() / 2;
    let a = HermitianMatrix::symmetrize(&w.submatrix(0, 0, d, d));
    let b = HermitianMatrix::symmetrize(&w.submatrix(d, d, d, d));
    let x = w.submatrix(0, d, d, d);
    let ta = 1e-8 * a.max_eigenvalue()?.max(1.0);
    let tb = 1e-8 * b.max_eigenvalue()?.max(1.0);
    let k = &(pinv_sqrt(&a, ta)?.as_matrix() * &x) * pinv_sqrt(&b, tb)?.as_matrix();
    Ok(singular_values(&k)?[0])
}

/// A compiled program's input.
#[derive(Clone, Debug, PartialEq)]
pub enum ProgramInput {
    DensityPair(HermitianMatrix, HermitianMatrix),
    Stinespring(StinespringPair),
    Choi(ChoiMatrix),
}

impl ProgramInput {
    pub fn kind(&self) -> ProgramKind {
        match self {
            Self::DensityPair(..) => ProgramKind::Fidelity,
            Self::Stinespring(_) => ProgramKind::MaxFidStinespring,
            Self::Choi(_) => ProgramKind::Choi,
        }
    }

    pub fn build(&self) -> Result<SdpProblem> {
        match self {
            Self::DensityPair(p, q) => build_fidelity_sdp(p, q),
            Self::Stinespring(s) => build_maxfid_sdp(s),
            Self::Choi(j) => build_choi_sdp(j),
        }
    }
}

/// Explicit feasible points in the compiled program's coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasiblePoints {
    pub primal: Vec<HermitianMatrix>,
    /// Multipliers `y`, one per constraint of [`ProgramInput::build`].
    pub dual: Vec<f64>,
}

/// Coordinates of `m` in [`hermitian_basis`].
fn coordinates(m: &HermitianMatrix) -> Vec<f64> {
    hermitian_basis(m.dim()).iter().map(|e| e.inner_re(m)).collect()
}

/// Primal: `diag(P, Q)`, `ρ_b = 1/n` with `Z_b = Ψ_b(ρ_b)`, or `ρ_b = 1/n` with
/// `Z_b = 1_Y ⊗ ρ_b`. Dual: `Y = Z = 1` for fidelity; `λ_b = ½ + ‖Ψ_b*(1)‖_∞`,
/// `Y_b = 1` for the Stinespring program; `Y_b = (‖J‖_∞/2 + 1)·1`,
/// `λ_b = 1 + (‖J‖_∞/2 + 1)·m` for the Choi program.
pub fn strict_feasible_points(input: &ProgramInput) -> Result<FeasiblePoints> {
    match input {
        ProgramInput::DensityPair(p, q) => {
            let n = p.dim();
            let mut w = ComplexMatrix::zeros(2 * n, 2 * n);
            w.set_submatrix(0, 0, p);
            w.set_submatrix(n, n, q);
            let ones = coordinates(&HermitianMatrix::identity(n));
            Ok(FeasiblePoints {
                primal: vec![HermitianMatrix::symmetrize(&w)],
                dual: ones.iter().chain(ones.iter()).copied().collect(),
            })
        }
        ProgramInput::Stinespring(s) => {
            let (n, k) = (s.input_dim(), s.env_dim());
            let rho = HermitianMatrix::identity(n).scale(1.0 / n as f64);
            let (psi0, psi1) = s.reduced_maps();
            let mut w = ComplexMatrix::zeros(2 * k, 2 * k);
            w.set_submatrix(0, 0, &psi0.apply(&rho)?);
            w.set_submatrix(k, k, &psi1.apply(&rho)?);
            let ones = coordinates(&HermitianMatrix::identity(k));
            let mut dual = Vec::with_capacity(2 + 2 * ones.len());
            for which in 0..2 {
                let unit = s.reduced_adjoint_apply(which, &ComplexMatrix::identity(k));
                dual.push(0.5 + spectral_norm(&unit)?);
            }
            dual.extend(ones.iter().chain(ones.iter()));
            Ok(FeasiblePoints { primal: vec![rho.clone(), rho, HermitianMatrix::symmetrize(&w)], dual })
        }
        ProgramInput::Choi(j) => {
            let (n, m) = (j.input_dim(), j.output_dim());
            let rho = HermitianMatrix::identity(n).scale(1.0 / n as f64);
            let scale = 0.5 * j.spectral_norm()? + 1.0;
            let lambda = 1.0 + scale * m as f64;
            let ys = coordinates(&HermitianMatrix::identity(m * n).scale(scale));
            let dual = [lambda, lambda].into_iter().chain(ys.iter().copied()).chain(ys.iter().copied()).collect();
            Ok(FeasiblePoints {
                primal: vec![rho.clone(), rho, HermitianMatrix::identity(2 * m * n).scale(1.0 / n as f64)],
                dual,
            })
        }
    }
}
