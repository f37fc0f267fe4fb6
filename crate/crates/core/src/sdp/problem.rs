use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};

/// Relative pivot threshold for dropping linearly dependent constraints.
pub const PRESOLVE_THRESHOLD: f64 = 1e-10;

/// One scalar equality `Σ_b ⟨A_b, X_b⟩ = rhs`; blocks absent from `terms` have `A_b = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(usize, HermitianMatrix)>,
    pub rhs: f64,
}

/// `maximize Σ_b ⟨C_b, X_b⟩` subject to the constraints and `X_b ⪰ 0` for every block.
///
/// The dual is `minimize bᵀy` subject to `Σ_i y_i A_i − C ⪰ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    name: String,
    blocks: Vec<usize>,
    objective: Vec<HermitianMatrix>,
    constraints: Vec<Constraint>,
}

/// Nonzero entries of one constraint: `(block, row, col, value)`.
pub(crate) type SparseTerms = Vec<(usize, usize, usize, C64)>;

impl SdpProblem {
    pub fn new(name: impl Into<String>, blocks: Vec<usize>, objective: Vec<HermitianMatrix>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::Shape("an SDP needs at least one block and positive block dims".into()));
        }
        if objective.len() != blocks.len() {
            return Err(Error::Shape(format!("{} objective blocks for {} variable blocks", objective.len(), blocks.len())));
        }
        for (b, (c, &d)) in objective.iter().zip(&blocks).enumerate() {
            if c.dim() != d {
                return Err(Error::Shape(format!("objective block {b} is {0}x{0}, expected {d}x{d}", c.dim())));
            }
        }
        Ok(Self { name: name.into(), blocks, objective, constraints: Vec::new() })
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, HermitianMatrix)>, rhs: f64) -> Result<()> {
        if !rhs.is_finite() {
            return Err(Error::InvalidParameter(format!("constraint right-hand side {rhs} is not finite")));
        }
        for (b, a) in &terms {
            let d = *self
                .blocks
                .get(*b)
                .ok_or_else(|| Error::Shape(format!("constraint refers to block {b} of {}", self.blocks.len())))?;
            if a.dim() != d {
                return Err(Error::Shape(format!("constraint block {b} is {0}x{0}, expected {d}x{d}", a.dim())));
            }
        }
        self.constraints.push(Constraint { terms, rhs });
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn objective(&self) -> &[HermitianMatrix] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn rhs(&self) -> Vec<f64> {
        self.constraints.iter().map(|c| c.rhs).collect()
    }

    /// Checks that `x` has one Hermitian matrix of the right size per block.
    pub fn check_point(&self, x: &[HermitianMatrix]) -> Result<()> {
        if x.len() != self.blocks.len() {
            return Err(Error::Shape(format!("{} blocks supplied, problem has {}", x.len(), self.blocks.len())));
        }
        for (b, (xb, &d)) in x.iter().zip(&self.blocks).enumerate() {
            if xb.dim() != d {
                return Err(Error::Shape(format!("block {b} is {0}x{0}, expected {d}x{d}", xb.dim())));
            }
        }
        Ok(())
    }

    /// `(⟨A_i, X⟩)_i`.
    pub fn constraint_values(&self, x: &[HermitianMatrix]) -> Vec<f64> {
        self.constraints.iter().map(|c| c.terms.iter().map(|(b, a)| a.inner_re(&x[*b])).sum()).collect()
    }

    pub fn objective_value(&self, x: &[HermitianMatrix]) -> f64 {
        self.objective.iter().zip(x).map(|(c, xb)| c.inner_re(xb)).sum()
    }

    /// `Σ_i y_i A_i`, per block.
    pub fn adjoint_map(&self, y: &[f64]) -> Vec<HermitianMatrix> {
        let mut out: Vec<ComplexMatrix> = self.blocks.iter().map(|&d| ComplexMatrix::zeros(d, d)).collect();
        for (c, &yi) in self.constraints.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for (b, a) in &c.terms {
                let dst = &mut out[*b];
                for (z, w) in dst.as_mut_slice().iter_mut().zip(a.as_slice()) {
                    *z += w * yi;
                }
            }
        }
        out.iter().map(HermitianMatrix::symmetrize).collect()
    }

    /// `Σ_i y_i A_i − C`, per block.
    pub fn dual_slack(&self, y: &[f64]) -> Vec<HermitianMatrix> {
        self.adjoint_map(y).iter().zip(&self.objective).map(|(a, c)| a.sub(c)).collect()
    }

    pub(crate) fn sparse_constraints(&self) -> Vec<SparseTerms> {
        self.constraints
            .iter()
            .map(|c| {
                let mut out = Vec::new();
                for (b, a) in &c.terms {
                    let d = a.dim();
                    for r in 0..d {
                        for s in 0..d {
                            let v = a[(r, s)];
                            if v != C64::new(0.0, 0.0) {
                                out.push((*b, r, s, v));
                            }
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// Removes linearly dependent constraints by pivoted Cholesky on the Gram matrix
    /// `G_ij = Σ_b ⟨A_i,b, A_j,b⟩`. Returns the reduced problem and the indices kept (in
    /// original order). A dependent row whose right-hand side disagrees with the
    /// combination of kept rows is an error.
    pub fn presolve(&self) -> Result<(SdpProblem, Vec<usize>)> {
        let m = self.constraints.len();
        let sparse = self.sparse_constraints();
        let maps: Vec<HashMap<(usize, usize, usize), C64>> =
            sparse.iter().map(|t| t.iter().map(|&(b, r, s, v)| ((b, r, s), v)).collect()).collect();
        let mut gram = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let (small, large) = if sparse[i].len() <= sparse[j].len() { (i, j) } else { (j, i) };
                let mut acc = 0.0;
                for &(b, r, s, v) in &sparse[small] {
                    if let Some(w) = maps[large].get(&(b, r, s)) {
                        acc += (v.conj() * w).re;
                    }
                }
                gram[i * m + j] = acc;
                gram[j * m + i] = acc;
            }
        }

        // Pivoted Cholesky: kept rows are chosen greedily by the largest remaining diagonal.
        let diag0: Vec<f64> = (0..m).map(|i| gram[i * m + i]).collect();
        let mut residual_diag = diag0.clone();
        let mut l_cols: Vec<Vec<f64>> = Vec::new();
        let mut kept: Vec<usize> = Vec::new();
        let mut active = vec![true; m];
        loop {
            let pick = (0..m)
                .filter(|&i| active[i] && residual_diag[i] > PRESOLVE_THRESHOLD * diag0[i].max(f64::MIN_POSITIVE))
                .max_by(|&a, &b| residual_diag[a].total_cmp(&residual_diag[b]));
            let Some(p) = pick else { break };
            active[p] = false;
            let piv = residual_diag[p].sqrt();
            let col: Vec<f64> = (0..m)
                .map(|i| {
                    let mut v = gram[i * m + p];
                    for c in &l_cols {
                        v -= c[i] * c[p];
                    }
                    v / piv
                })
                .collect();
            for i in 0..m {
                if active[i] {
                    residual_diag[i] -= col[i] * col[i];
                }
            }
            l_cols.push(col);
            kept.push(p);
        }

        // Consistency of dropped rows: A_d = Σ c_k A_k with G_KK c = G_Kd.
        let rhs = self.rhs();
        let r = kept.len();
        let gkk: Vec<f64> = kept.iter().flat_map(|&a| kept.iter().map(move |&b| (a, b))).map(|(a, b)| gram[a * m + b]).collect();
        for d in (0..m).filter(|i| !kept.contains(i)) {
            let predicted = if r == 0 {
                0.0
            } else {
                let g: Vec<f64> = kept.iter().map(|&k| gram[k * m + d]).collect();
                let c = super::realify::cholesky_solve(r, &gkk, &g)
                    .ok_or_else(|| Error::Singular { min_eigenvalue: 0.0 })?;
                c.iter().zip(&kept).map(|(ci, &k)| ci * rhs[k]).sum()
            };
            let mismatch = (rhs[d] - predicted).abs();
            if mismatch > 1e-8 * (1.0 + rhs[d].abs()) {
                return Err(Error::InconsistentConstraints { index: d, mismatch });
            }
        }
        kept.sort_unstable();
        let mut reduced = Self { constraints: Vec::with_capacity(r), ..self.clone() };
        reduced.constraints = kept.iter().map(|&k| self.constraints[k].clone()).collect();
        Ok((reduced, kept))
    }
}
