use super::problem::SdpProblem;
use super::solver::{relative_gap, solve_with_config, SdpSolution, SolveStatus, SolverConfig};
use crate::error::Result;
use crate::linalg::HermitianMatrix;

/// Quantities recomputed from a candidate solution, independent of solver internals.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    /// `‖A(X) − b‖₂`.
    pub primal_residual: f64,
    pub primal_min_eig: f64,
    /// Smallest eigenvalue of `Σ y_i A_i − C`.
    pub dual_min_eig: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `|β − α| / (1 + (|α| + |β|)/2)`.
    pub duality_gap: f64,
    pub weak_duality_ok: bool,
    /// `(min(α, β), max(α, β))`.
    pub value_interval: (f64, f64),
}

impl Certificate {
    /// All residuals, eigenvalue violations and the gap are within `tol`.
    pub fn is_optimal(&self, tol: f64) -> bool {
        self.primal_residual <= tol
            && self.primal_min_eig >= -tol
            && self.dual_min_eig >= -tol
            && self.duality_gap <= tol
            && self.weak_duality_ok
    }
}

fn min_eig(blocks: &[HermitianMatrix]) -> Result<f64> {
    let mut m = f64::INFINITY;
    for b in blocks {
        m = m.min(b.min_eigenvalue()?);
    }
    Ok(m)
}

pub fn check(p: &SdpProblem, s: &SdpSolution) -> Result<Certificate> {
    p.check_point(&s.x)?;
    if s.y.len() != p.constraints().len() {
        return Err(crate::Error::Shape(format!(
            "{} multipliers for {} constraints",
            s.y.len(),
            p.constraints().len()
        )));
    }
    let residual: f64 =
        p.constraint_values(&s.x).iter().zip(p.rhs()).map(|(v, b)| (v - b) * (v - b)).sum::<f64>().sqrt();
    let slack = p.dual_slack(&s.y);
    let alpha = p.objective_value(&s.x);
    let beta: f64 = p.rhs().iter().zip(&s.y).map(|(b, y)| b * y).sum();
    Ok(Certificate {
        primal_residual: residual,
        primal_min_eig: min_eig(&s.x)?,
        dual_min_eig: min_eig(&slack)?,
        alpha,
        beta,
        duality_gap: relative_gap(alpha, beta),
        weak_duality_ok: alpha <= beta + 1e-9 * (1.0 + alpha.abs() + beta.abs()),
        value_interval: (alpha.min(beta), alpha.max(beta)),
    })
}

/// Outcome of one auxiliary margin program.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSide {
    /// Largest `t ≤ 1` found with a feasible point at distance `t` inside the cone.
    pub margin: f64,
    pub status: SolveStatus,
}

impl ProbeSide {
    pub fn strictly_feasible(&self, threshold: f64) -> bool {
        self.margin > threshold
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityReport {
    /// `max t` such that some `X` with `A(X) = b` has `X ⪰ tI` (capped at 1).
    pub primal: ProbeSide,
    /// `max s` such that some `y` has `Σ y_i A_i − C ⪰ sI` (capped at 1).
    pub dual: ProbeSide,
    pub dual_point: Vec<f64>,
}

pub fn strict_feasibility_probe(p: &SdpProblem) -> Result<FeasibilityReport> {
    strict_feasibility_probe_with(p, &SolverConfig::default())
}

pub fn strict_feasibility_probe_with(p: &SdpProblem, cfg: &SolverConfig) -> Result<FeasibilityReport> {
    let nb = p.blocks().len();
    let mut blocks = p.blocks().to_vec();
    blocks.push(1);

    // Primal: X = X' + (1 − u)I with X' ⪰ 0, u ≥ 0; maximize −u.
    let mut objective: Vec<HermitianMatrix> = p.blocks().iter().map(|&d| HermitianMatrix::zeros(d)).collect();
    objective.push(HermitianMatrix::from_real_diagonal(&[-1.0]));
    let mut primal = SdpProblem::new(format!("{}-primal-margin", p.name()), blocks.clone(), objective)?;
    for c in p.constraints() {
        let trace_a: f64 = c.terms.iter().map(|(_, a)| a.trace_re()).sum();
        let mut terms = c.terms.clone();
        terms.push((nb, HermitianMatrix::from_real_diagonal(&[-trace_a])));
        primal.add_constraint(terms, c.rhs - trace_a)?;
    }
    let ps = solve_with_config(&primal, cfg)?;
    let primal_side = ProbeSide { margin: 1.0 + ps.alpha, status: ps.status };

    // Dual: maximize ⟨C, Z⟩ − w with ⟨A_i, Z⟩ = 0, Tr Z + w = 1; its dual is
    // min v s.t. Σ y_i A_i − C ⪰ −v I, v ≥ −1.
    let mut objective = p.objective().to_vec();
    objective.push(HermitianMatrix::from_real_diagonal(&[-1.0]));
    let mut dual = SdpProblem::new(format!("{}-dual-margin", p.name()), blocks, objective)?;
    for c in p.constraints() {
        dual.add_constraint(c.terms.clone(), 0.0)?;
    }
    let mut trace_terms: Vec<(usize, HermitianMatrix)> =
        p.blocks().iter().enumerate().map(|(b, &d)| (b, HermitianMatrix::identity(d))).collect();
    trace_terms.push((nb, HermitianMatrix::identity(1)));
    dual.add_constraint(trace_terms, 1.0)?;
    let ds = solve_with_config(&dual, cfg)?;
    let dual_point = ds.y[..p.constraints().len()].to_vec();
    Ok(FeasibilityReport {
        primal: primal_side,
        dual: ProbeSide { margin: -ds.beta, status: ds.status },
        dual_point,
    })
}
