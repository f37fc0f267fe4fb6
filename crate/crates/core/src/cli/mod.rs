//! Command-line front end.
//!
//! Exit codes: 0 when the solve is certified optimal, 1 for usage or input errors,
//! 2 for numerical non-convergence.

pub mod input;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::channels::{ChannelRep, ChoiMatrix};
use crate::diagnostics::{solvability_report, verify_interior_point_with, DEFAULT_SAMPLES};
use crate::linalg::fidelity_direct;
use crate::oracles::{cp_diamond_oracle, is_completely_positive, rank_one_ascent, AscentConfig};
use crate::programs::{cb_spectral_norm_with, diamond_norm_with, fidelity_sdp_with, NormResult, ProgramInput};
use crate::sdp::{SolveStatus, SolverConfig};

pub use input::{DocumentKind, InputDocument, InputError};
pub use report::{sig9, CertificateView, ConfigView, DiagnosticsView, OracleCheck, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cbnorm", version, about = "Diamond norms, CB spectral norms and fidelities via semidefinite programs")]
pub struct Cli {
    /// Solver tolerance on residuals and relative gap.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 200)]
    pub max_iter: usize,
    /// Seed for the randomized oracles and diagnostics.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write one line per solver iteration to stderr.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fidelity of a density pair.
    Fidelity { file: PathBuf },
    /// Diamond norm of a map given by a Choi matrix or a Stinespring pair.
    Diamond {
        file: PathBuf,
        /// Also run the rank-one ascent and, for CP maps, the closed-form oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// CB spectral norm, computed as the diamond norm of the adjoint.
    CbSpectral {
        file: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Interior-ball radius and dual trace bound of the program for a map.
    Diagnose { file: PathBuf },
}

/// Runs one command. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{e}");
                EXIT_INPUT
            };
        }
    };
    let echo = std::iter::once("cbnorm".to_string())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    match execute(&cli, echo, err) {
        Ok((report, code)) => {
            let text = if cli.json { report.to_json() } else { report.to_string() };
            let _ = writeln!(out, "{text}");
            code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn execute(cli: &Cli, command: String, err: &mut dyn Write) -> Result<(Report, i32), String> {
    let start = Instant::now();
    let cfg = SolverConfig::new(cli.tol, cli.max_iter).map_err(|e| e.to_string())?;
    let config = ConfigView { tol: cli.tol, max_iter: cli.max_iter, seed: cli.seed };
    let ascent = AscentConfig::with_seed(cli.seed);
    let lib = |e: crate::Error| e.to_string();

    let (doc, name) = match &cli.command {
        Command::Fidelity { file } => (load(file)?, "fidelity"),
        Command::Diamond { file, .. } => (load(file)?, "diamond"),
        Command::CbSpectral { file, .. } => (load(file)?, "cb-spectral"),
        Command::Diagnose { file } => (load(file)?, "diagnose"),
    };
    let kind = doc.kind();
    let mut report = Report {
        command,
        kind: kind.as_str().into(),
        program: String::new(),
        value: None,
        status: String::new(),
        iterations: None,
        certificate: None,
        diagnostics: None,
        oracles: Vec::new(),
        config,
        elapsed_seconds: 0.0,
    };

    let code = match (&cli.command, doc) {
        (Command::Fidelity { .. }, InputDocument::DensityPair { p, q }) => {
            let res = fidelity_sdp_with(&p, &q, &cfg, sink(cli.trace, err)).map_err(lib)?;
            let direct = fidelity_direct(&p, &q).map_err(lib)?;
            let agree = (res.value - direct).abs() <= oracle_tol(cli.tol) * (1.0 + direct);
            report.oracles.push(OracleCheck {
                name: "fidelity_direct".into(),
                value: Some(direct),
                verdict: verdict(agree),
                detail: "trace norm of sqrt(P) sqrt(Q)".into(),
            });
            fill(&mut report, &res)
        }
        (Command::Diamond { oracle, .. }, doc @ (InputDocument::Choi(_) | InputDocument::Stinespring(_))) => {
            let rep = channel(doc);
            let res = diamond_norm_with(&rep, &cfg, sink(cli.trace, err)).map_err(lib)?;
            if *oracle {
                report.oracles = sandwich(&rep.to_choi(), res.value, cli.tol, &ascent);
            }
            fill(&mut report, &res)
        }
        (Command::CbSpectral { oracle, .. }, doc @ (InputDocument::Choi(_) | InputDocument::Stinespring(_))) => {
            let rep = channel(doc);
            let res = cb_spectral_norm_with(&rep, &cfg, sink(cli.trace, err)).map_err(lib)?;
            if *oracle {
                report.oracles = sandwich(&rep.adjoint().to_choi(), res.value, cli.tol, &ascent);
            }
            fill(&mut report, &res)
        }
        (Command::Diagnose { .. }, doc @ (InputDocument::Choi(_) | InputDocument::Stinespring(_))) => {
            let input = match doc {
                InputDocument::Choi(j) => ProgramInput::Choi(j),
                InputDocument::Stinespring(s) => ProgramInput::Stinespring(s),
                InputDocument::DensityPair { .. } => unreachable!("matched above"),
            };
            let sr = solvability_report(&input).map_err(lib)?;
            let ok = verify_interior_point_with(&input, sr.epsilon, DEFAULT_SAMPLES, cli.seed).map_err(lib)?;
            report.program = sr.program.as_str().into();
            report.status = verdict(ok);
            report.diagnostics = Some(DiagnosticsView {
                epsilon: sr.epsilon,
                r_bound: sr.r_bound,
                degenerate: sr.degenerate,
                norms: [sr.inputs_digest.norms.0, sr.inputs_digest.norms.1],
                interior_samples: DEFAULT_SAMPLES,
                interior_verdict: verdict(ok),
            });
            if ok {
                EXIT_OK
            } else {
                EXIT_NONCONVERGENCE
            }
        }
        (_, doc) => {
            let expected = if name == "fidelity" { "`density-pair`" } else { "`choi` or `stinespring`" };
            return Err(format!("`{name}` expects kind {expected}, but the file has kind `{}`", doc.kind().as_str()));
        }
    };
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok((report, code))
}

fn load(file: &std::path::Path) -> Result<InputDocument, String> {
    InputDocument::from_path(file).map_err(|e| format!("{}: {e}", file.display()))
}

fn channel(doc: InputDocument) -> ChannelRep {
    match doc {
        InputDocument::Choi(j) => j.into(),
        InputDocument::Stinespring(s) => s.into(),
        InputDocument::DensityPair { .. } => unreachable!("callers match channel kinds"),
    }
}

fn fill(report: &mut Report, res: &NormResult) -> i32 {
    report.program = res.program.as_str().into();
    report.value = Some(res.value);
    report.status = res.status.as_str().into();
    report.iterations = Some(res.solution.iterations);
    report.certificate = Some(CertificateView::from(&res.certificate));
    if res.status == SolveStatus::Optimal {
        EXIT_OK
    } else {
        EXIT_NONCONVERGENCE
    }
}

fn sink<'a>(trace: bool, err: &'a mut dyn Write) -> Option<&'a mut dyn Write> {
    trace.then_some(err)
}

fn oracle_tol(tol: f64) -> f64 {
    (100.0 * tol).max(1e-6)
}

fn verdict(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.into()
}

/// Lower bound from the rank-one ascent and, for CP maps, the exact value.
fn sandwich(j: &ChoiMatrix, value: f64, tol: f64, ascent: &AscentConfig) -> Vec<OracleCheck> {
    let slack = oracle_tol(tol) * (1.0 + value.abs());
    let lower = rank_one_ascent(j, ascent).lower_bound;
    let mut checks = vec![OracleCheck {
        name: "rank_one_ascent".into(),
        value: Some(lower),
        verdict: verdict(lower <= value + slack),
        detail: format!("lower bound, gap to value {}", sig9(value - lower)),
    }];
    if is_completely_positive(j) {
        let exact = cp_diamond_oracle(j).ok();
        checks.push(OracleCheck {
            name: "cp_diamond".into(),
            value: exact,
            verdict: verdict(exact.map_or(false, |e| (e - value).abs() <= slack)),
            detail: "spectral norm of the output partial trace".into(),
        });
    } else {
        checks.push(OracleCheck {
            name: "cp_diamond".into(),
            value: None,
            verdict: "skipped".into(),
            detail: "map is not completely positive".into(),
        });
    }
    checks
}
