//! Infeasible-start primal-dual interior-point method (HKM direction, Mehrotra
//! predictor-corrector) on the real symmetric embedding of a Hermitian SDP.

use std::fmt;
use std::io::Write;

use super::problem::SdpProblem;
use super::realify::{cholesky_solve, complexify, RealMatrix};
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Fraction of the distance to the boundary of the cone taken per step.
    pub step_fraction: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 200, step_fraction: 0.98 }
    }
}

impl SolverConfig {
    pub fn new(tol: f64, max_iter: usize) -> Result<Self> {
        let cfg = Self { tol, max_iter, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol <= 1e-2) {
            return Err(Error::InvalidParameter(format!("tol must lie in (0, 1e-2], got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        if !(self.step_fraction > 0.0 && self.step_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!("step fraction must lie in (0, 1), got {}", self.step_fraction)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    MaxIterations,
    InfeasibleSuspected,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Optimal => "optimal",
            Self::MaxIterations => "max-iterations",
            Self::InfeasibleSuspected => "infeasible-suspected",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// State of one iterate, measured before the step taken from it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `|α − β| / (1 + (|α| + |β|)/2)`.
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub mu: f64,
    /// Step lengths that produced this iterate (zero at the starting point).
    pub primal_step: f64,
    pub dual_step: f64,
}

impl fmt::Display for IterationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "iter {:>3}  alpha {:+.10e}  beta {:+.10e}  gap {:.3e}  pres {:.3e}  dres {:.3e}  mu {:.3e}  step {:.3}/{:.3}",
            self.iteration,
            self.primal_objective,
            self.dual_objective,
            self.gap,
            self.primal_residual,
            self.dual_residual,
            self.mu,
            self.primal_step,
            self.dual_step
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpSolution {
    pub x: Vec<HermitianMatrix>,
    /// Multipliers for every constraint of the original problem (zero for rows removed
    /// by presolve).
    pub y: Vec<f64>,
    /// `Σ y_i A_i − C`, recomputed from `y`.
    pub s: Vec<HermitianMatrix>,
    pub alpha: f64,
    pub beta: f64,
    pub gap: f64,
    pub status: SolveStatus,
    pub iterations: usize,
}

pub(crate) fn relative_gap(alpha: f64, beta: f64) -> f64 {
    (alpha - beta).abs() / (1.0 + 0.5 * (alpha.abs() + beta.abs()))
}

pub fn solve(p: &SdpProblem, tol: f64, max_iter: usize) -> Result<SdpSolution> {
    solve_with_config(p, &SolverConfig::new(tol, max_iter)?)
}

pub fn solve_with_config(p: &SdpProblem, config: &SolverConfig) -> Result<SdpSolution> {
    solve_with_observer(p, config, &mut |_| {})
}

/// Solves and writes one line per iterate to `sink`.
pub fn solve_traced(p: &SdpProblem, config: &SolverConfig, sink: &mut dyn Write) -> Result<SdpSolution> {
    solve_with_observer(p, config, &mut |rec| {
        let _ = writeln!(sink, "{rec}");
    })
}

pub fn solve_with_observer(
    p: &SdpProblem,
    config: &SolverConfig,
    observer: &mut dyn FnMut(&IterationRecord),
) -> Result<SdpSolution> {
    config.validate()?;
    let (reduced, kept) = p.presolve()?;
    let rp = RealProblem::from_problem(&reduced);
    let outcome = rp.run(config, observer);

    let x = outcome.x.iter().map(complexify).collect::<Result<Vec<_>>>()?;
    let mut y = vec![0.0; p.constraints().len()];
    for (v, &k) in outcome.y.iter().zip(&kept) {
        y[k] = *v;
    }
    let s = p.dual_slack(&y);
    let alpha = p.objective_value(&x);
    let beta: f64 = p.rhs().iter().zip(&y).map(|(b, y)| b * y).sum();
    Ok(SdpSolution {
        x,
        y,
        s,
        alpha,
        beta,
        gap: relative_gap(alpha, beta),
        status: outcome.status,
        iterations: outcome.iterations,
    })
}

/// Real embedding: block `b` of complex dimension `d` becomes a real `2d` block, and
/// every matrix `M` is replaced by `realify(M)/2` so inner products are preserved.
struct RealProblem {
    dims: Vec<usize>,
    c: Vec<RealMatrix>,
    /// Per constraint: `(block, row, col, weight)` for every nonzero real entry.
    a: Vec<Vec<(usize, usize, usize, f64)>>,
    /// Per constraint: the blocks it touches.
    touched: Vec<Vec<usize>>,
    b: Vec<f64>,
}

struct Outcome {
    x: Vec<RealMatrix>,
    y: Vec<f64>,
    status: SolveStatus,
    iterations: usize,
}

#[derive(Clone)]
struct Iterate {
    x: Vec<RealMatrix>,
    y: Vec<f64>,
    s: Vec<RealMatrix>,
}

impl RealProblem {
    fn from_problem(p: &SdpProblem) -> Self {
        let halve = |h: &HermitianMatrix| super::realify::realify(h).scale(0.5);
        let dims: Vec<usize> = p.blocks().iter().map(|d| 2 * d).collect();
        let mut a = Vec::new();
        let mut touched = Vec::new();
        for terms in p.sparse_constraints() {
            let mut entries = Vec::with_capacity(4 * terms.len());
            let mut blocks: Vec<usize> = Vec::new();
            for (b, r, s, v) in terms {
                let d = p.blocks()[b];
                if v.re != 0.0 {
                    entries.push((b, r, s, 0.5 * v.re));
                    entries.push((b, d + r, d + s, 0.5 * v.re));
                }
                if v.im != 0.0 {
                    entries.push((b, r, d + s, -0.5 * v.im));
                    entries.push((b, d + r, s, 0.5 * v.im));
                }
                if !blocks.contains(&b) {
                    blocks.push(b);
                }
            }
            blocks.sort_unstable();
            a.push(entries);
            touched.push(blocks);
        }
        Self { dims, c: p.objective().iter().map(halve).collect(), a, touched, b: p.rhs() }
    }

    fn apply(&self, x: &[RealMatrix]) -> Vec<f64> {
        self.a.iter().map(|e| e.iter().map(|&(b, r, s, w)| w * x[b].get(r, s)).sum()).collect()
    }

    fn adjoint(&self, y: &[f64]) -> Vec<RealMatrix> {
        let mut out: Vec<RealMatrix> = self.dims.iter().map(|&d| RealMatrix::zeros(d)).collect();
        for (e, &yi) in self.a.iter().zip(y) {
            for &(b, r, s, w) in e {
                let v = out[b].get(r, s) + yi * w;
                out[b].set(r, s, v);
            }
        }
        out
    }

    fn objective(&self, x: &[RealMatrix]) -> f64 {
        self.c.iter().zip(x).map(|(c, x)| c.dot(x)).sum()
    }

    /// Schur complement `M_ij = Tr(A_i X A_j S⁻¹)`.
    fn schur(&self, x: &[RealMatrix], sinv: &[RealMatrix]) -> Vec<f64> {
        let m = self.a.len();
        let mut out = vec![0.0; m * m];
        // Group constraint entries by block so each G_j is only contracted where needed.
        for j in 0..m {
            for &blk in &self.touched[j] {
                let d = self.dims[blk];
                let (xb, sb) = (&x[blk], &sinv[blk]);
                // G = X A_j S⁻¹ restricted to this block.
                let mut g = vec![0.0; d * d];
                for &(b, p, q, w) in &self.a[j] {
                    if b != blk {
                        continue;
                    }
                    for u in 0..d {
                        let xu = w * xb.get(u, p);
                        if xu == 0.0 {
                            continue;
                        }
                        let row = &mut g[u * d..(u + 1) * d];
                        let srow = &sb.as_slice()[q * d..(q + 1) * d];
                        for (gv, sv) in row.iter_mut().zip(srow) {
                            *gv += xu * sv;
                        }
                    }
                }
                for i in j..m {
                    if !self.touched[i].contains(&blk) {
                        continue;
                    }
                    let mut acc = 0.0;
                    for &(b, r, s, w) in &self.a[i] {
                        if b == blk {
                            acc += w * g[s * d + r];
                        }
                    }
                    out[i * m + j] += acc;
                }
            }
        }
        for i in 0..m {
            for j in (i + 1)..m {
                out[i * m + j] = out[j * m + i];
            }
        }
        out
    }

    fn run(&self, cfg: &SolverConfig, observer: &mut dyn FnMut(&IterationRecord)) -> Outcome {
        let m = self.b.len();
        let total_dim: usize = self.dims.iter().sum();
        let c_norm = self.c.iter().map(|c| c.dot(c)).sum::<f64>().sqrt();
        let b_norm = norm(&self.b);
        let xi = 1.0 + c_norm + b_norm;
        let mut it = Iterate {
            x: self.dims.iter().map(|&d| RealMatrix::identity(d).scale(xi)).collect(),
            y: vec![0.0; m],
            s: self.dims.iter().map(|&d| RealMatrix::identity(d).scale(xi)).collect(),
        };
        let mut best: Option<(f64, Iterate)> = None;
        let mut steps = (0.0, 0.0);
        let mut stalled = 0usize;
        let blowup = 1e12 * (1.0 + xi);

        for iter in 0..=cfg.max_iter {
            let ax = self.apply(&it.x);
            let r_p: Vec<f64> = self.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
            let aty = self.adjoint(&it.y);
            let r_d: Vec<RealMatrix> = (0..self.dims.len())
                .map(|k| aty[k].add_scaled(&it.s[k], -1.0).add_scaled(&self.c[k], -1.0))
                .collect();
            let pres = norm(&r_p);
            let dres = r_d.iter().map(|r| r.dot(r)).sum::<f64>().sqrt();
            let alpha = self.objective(&it.x);
            let beta: f64 = self.b.iter().zip(&it.y).map(|(b, y)| b * y).sum();
            let gap = relative_gap(alpha, beta);
            let mu = it.x.iter().zip(&it.s).map(|(x, s)| x.dot(s)).sum::<f64>() / total_dim as f64;
            observer(&IterationRecord {
                iteration: iter,
                primal_objective: alpha,
                dual_objective: beta,
                gap,
                primal_residual: pres,
                dual_residual: dres,
                mu,
                primal_step: steps.0,
                dual_step: steps.1,
            });

            let finite = alpha.is_finite() && beta.is_finite() && pres.is_finite() && dres.is_finite() && mu.is_finite();
            let size = it.x.iter().chain(&it.s).map(|x| x.frobenius_norm()).fold(norm(&it.y), f64::max);
            if !finite || size > blowup {
                return self.finish(best, SolveStatus::InfeasibleSuspected, iter);
            }
            let merit = pres.max(dres).max(gap);
            if best.as_ref().map_or(true, |(b, _)| merit <= *b) {
                best = Some((merit, it.clone()));
            }
            if pres <= cfg.tol && dres <= cfg.tol && gap <= cfg.tol {
                return Outcome { x: it.x, y: it.y, status: SolveStatus::Optimal, iterations: iter };
            }
            if iter == cfg.max_iter || stalled >= 5 {
                return self.finish(best, SolveStatus::MaxIterations, iter);
            }

            let Some(next) = self.step(&it, &r_p, &r_d, mu, cfg) else {
                return self.finish(best, SolveStatus::MaxIterations, iter);
            };
            steps = (next.1, next.2);
            stalled = if steps.0.max(steps.1) < 1e-8 { stalled + 1 } else { 0 };
            it = next.0;
        }
        unreachable!("loop returns on its last iteration")
    }

    fn finish(&self, best: Option<(f64, Iterate)>, status: SolveStatus, iterations: usize) -> Outcome {
        let it = best.expect("the starting point is always recorded").1;
        Outcome { x: it.x, y: it.y, status, iterations }
    }

    /// One predictor-corrector step; `None` if a factorization fails.
    fn step(
        &self,
        it: &Iterate,
        r_p: &[f64],
        r_d: &[RealMatrix],
        mu: f64,
        cfg: &SolverConfig,
    ) -> Option<(Iterate, f64, f64)> {
        let nb = self.dims.len();
        let m = self.b.len();
        let total_dim: usize = self.dims.iter().sum();
        let mut sinv = Vec::with_capacity(nb);
        for s in &it.s {
            sinv.push(RealMatrix::inverse_from_cholesky(&s.cholesky()?));
        }
        let schur = self.schur(&it.x, &sinv);
        let xrs: Vec<RealMatrix> = (0..nb).map(|k| it.x[k].matmul(&r_d[k]).matmul(&sinv[k])).collect();
        let base_mat: Vec<RealMatrix> = (0..nb).map(|k| it.x[k].scale(-1.0).add_scaled(&xrs[k], -1.0)).collect();
        let base: Vec<f64> = self.apply(&base_mat).iter().zip(r_p).map(|(a, r)| a - r).collect();

        let solve_dy = |rhs: &[f64]| -> Option<Vec<f64>> {
            if m == 0 {
                return Some(Vec::new());
            }
            if let Some(v) = cholesky_solve(m, &schur, rhs) {
                return Some(v);
            }
            let scale = (0..m).map(|i| schur[i * m + i].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            let mut reg = 1e-14;
            while reg <= 1e-6 {
                let mut mm = schur.clone();
                for i in 0..m {
                    mm[i * m + i] += reg * scale;
                }
                if let Some(v) = cholesky_solve(m, &mm, rhs) {
                    return Some(v);
                }
                reg *= 100.0;
            }
            None
        };

        // Direction for a given right-hand side and (R_c S⁻¹) blocks.
        let direction = |rhs: &[f64], rc_sinv: &[RealMatrix]| -> Option<(Vec<RealMatrix>, Vec<f64>, Vec<RealMatrix>)> {
            let dy = solve_dy(rhs)?;
            let atdy = self.adjoint(&dy);
            let ds: Vec<RealMatrix> = (0..nb).map(|k| atdy[k].add_scaled(&r_d[k], 1.0)).collect();
            let dx: Vec<RealMatrix> = (0..nb)
                .map(|k| rc_sinv[k].add_scaled(&it.x[k].matmul(&ds[k]).matmul(&sinv[k]), -1.0).symmetrized())
                .collect();
            Some((dx, dy, ds))
        };

        // Predictor: R_c = −XS, so R_c S⁻¹ = −X.
        let neg_x: Vec<RealMatrix> = it.x.iter().map(|x| x.scale(-1.0)).collect();
        let (dx_a, _, ds_a) = direction(&base, &neg_x)?;
        let ap = max_step(&it.x, &dx_a).min(1.0);
        let ad = max_step(&it.s, &ds_a).min(1.0);
        let mu_aff = (0..nb)
            .map(|k| it.x[k].add_scaled(&dx_a[k], ap).dot(&it.s[k].add_scaled(&ds_a[k], ad)))
            .sum::<f64>()
            / total_dim as f64;
        let sigma = (mu_aff.max(0.0) / mu).powi(3).min(1.0);

        // Corrector: R_c = σμI − XS − ΔX_a ΔS_a.
        let corr: Vec<RealMatrix> = (0..nb).map(|k| dx_a[k].matmul(&ds_a[k]).matmul(&sinv[k])).collect();
        let rc_sinv: Vec<RealMatrix> = (0..nb)
            .map(|k| sinv[k].scale(sigma * mu).add_scaled(&it.x[k], -1.0).add_scaled(&corr[k], -1.0))
            .collect();
        let extra = self.apply(&(0..nb).map(|k| sinv[k].scale(sigma * mu).add_scaled(&corr[k], -1.0)).collect::<Vec<_>>());
        let rhs: Vec<f64> = base.iter().zip(&extra).map(|(a, e)| a + e).collect();
        let (dx, dy, ds) = direction(&rhs, &rc_sinv)?;

        let ap = (cfg.step_fraction * max_step(&it.x, &dx)).min(1.0);
        let ad = (cfg.step_fraction * max_step(&it.s, &ds)).min(1.0);
        let next = Iterate {
            x: (0..nb).map(|k| it.x[k].add_scaled(&dx[k], ap).symmetrized()).collect(),
            y: it.y.iter().zip(&dy).map(|(y, d)| y + ad * d).collect(),
            s: (0..nb).map(|k| it.s[k].add_scaled(&ds[k], ad).symmetrized()).collect(),
        };
        Some((next, ap, ad))
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest `t` with `X + tΔ ⪰ 0` over all blocks (infinite if unbounded, zero if `X`
/// is not positive definite).
fn max_step(x: &[RealMatrix], dx: &[RealMatrix]) -> f64 {
    let mut t = f64::INFINITY;
    for (xb, db) in x.iter().zip(dx) {
        let Some(l) = xb.cholesky() else { return 0.0 };
        let li = l.lower_inverse();
        let w = li.matmul(db).matmul(&li.transpose());
        let lam = match w.eigenvalues() {
            Ok(ev) => ev[0],
            Err(_) => return 0.0,
        };
        if lam < 0.0 {
            t = t.min(-1.0 / lam);
        }
    }
    t
}
