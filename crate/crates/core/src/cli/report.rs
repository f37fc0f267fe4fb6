use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::sdp::Certificate;

/// Formats with 9 significant digits, fixed-point for moderate exponents.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-4..9).contains(&exp) {
        format!("{:.*}", (8 - exp) as usize, x)
    } else {
        sci
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateView {
    pub alpha: f64,
    pub beta: f64,
    pub duality_gap: f64,
    pub primal_residual: f64,
    pub primal_min_eig: f64,
    pub dual_min_eig: f64,
    pub weak_duality_ok: bool,
    pub value_interval: [f64; 2],
}

impl From<&Certificate> for CertificateView {
    fn from(c: &Certificate) -> Self {
        Self {
            alpha: c.alpha,
            beta: c.beta,
            duality_gap: c.duality_gap,
            primal_residual: c.primal_residual,
            primal_min_eig: c.primal_min_eig,
            dual_min_eig: c.dual_min_eig,
            weak_duality_ok: c.weak_duality_ok,
            value_interval: [c.value_interval.0, c.value_interval.1],
        }
    }
}

/// One cross-check against an independent computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub value: Option<f64>,
    /// `"pass"`, `"fail"` or `"skipped"`.
    pub verdict: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsView {
    pub epsilon: f64,
    pub r_bound: f64,
    pub degenerate: bool,
    pub norms: [f64; 2],
    pub interior_samples: usize,
    pub interior_verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigView {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

/// Everything a command prints. Every key is present for every command so the JSON
/// schema does not depend on the input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub kind: String,
    pub program: String,
    pub value: Option<f64>,
    pub status: String,
    pub iterations: Option<usize>,
    pub certificate: Option<CertificateView>,
    pub diagnostics: Option<DiagnosticsView>,
    pub oracles: Vec<OracleCheck>,
    pub config: ConfigView,
    pub elapsed_seconds: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(s, "command: {}", self.command)?;
        writeln!(s, "kind: {}", self.kind)?;
        writeln!(s, "program: {}", self.program)?;
        if let Some(v) = self.value {
            writeln!(s, "value: {}", sig9(v))?;
        }
        writeln!(s, "status: {}", self.status)?;
        if let Some(it) = self.iterations {
            writeln!(s, "iterations: {it}")?;
        }
        if let Some(c) = &self.certificate {
            writeln!(s, "certificate:")?;
            writeln!(s, "  alpha: {}", sig9(c.alpha))?;
            writeln!(s, "  beta: {}", sig9(c.beta))?;
            writeln!(s, "  duality_gap: {}", sig9(c.duality_gap))?;
            writeln!(s, "  primal_residual: {}", sig9(c.primal_residual))?;
            writeln!(s, "  primal_min_eig: {}", sig9(c.primal_min_eig))?;
            writeln!(s, "  dual_min_eig: {}", sig9(c.dual_min_eig))?;
            writeln!(s, "  weak_duality: {}", if c.weak_duality_ok { "ok" } else { "violated" })?;
            writeln!(s, "  value_interval: [{}, {}]", sig9(c.value_interval[0]), sig9(c.value_interval[1]))?;
        }
        if let Some(d) = &self.diagnostics {
            writeln!(s, "epsilon: {}", sig9(d.epsilon))?;
            writeln!(s, "r_bound: {}", sig9(d.r_bound))?;
            writeln!(s, "norms: [{}, {}]", sig9(d.norms[0]), sig9(d.norms[1]))?;
            writeln!(s, "degenerate: {}", d.degenerate)?;
            writeln!(s, "interior_point: {} ({} samples)", d.interior_verdict, d.interior_samples)?;
        }
        if !self.oracles.is_empty() {
            writeln!(s, "oracles:")?;
            for o in &self.oracles {
                match o.value {
                    Some(v) => writeln!(s, "  {}: {} {} ({})", o.name, sig9(v), o.verdict, o.detail)?,
                    None => writeln!(s, "  {}: {} ({})", o.name, o.verdict, o.detail)?,
                }
            }
        }
        writeln!(s, "config: tol={:e} max_iter={} seed={}", self.config.tol, self.config.max_iter, self.config.seed)?;
        write!(s, "elapsed: {:.3}s", self.elapsed_seconds)?;
        f.write_str(&s)
    }
}
