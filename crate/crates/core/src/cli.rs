//! Command-line front end. JSON goes to `out`, the human summary to `err`.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input
//! error, 3 internal numerical error.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus::{self, PolyEntry};
use crate::error::Error;
use crate::jalgebra::{build_u0_rank2_signed, build_u0_rank3, IsometricMap};
use crate::pv;
use crate::report::{SuiteReport, Tolerances};
use crate::suites::{self, ConeSuite, TubeSuite};

#[derive(Parser, Debug)]
#[command(name = "specgeo", version, about = "Verification kernel for homogeneous special geometry")]
struct Cli {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed of the sampling generator.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Isometries, product structure and metric pull-backs of a tube domain.
    TubeCheck {
        /// Polynomial file, or the name of a shipped corpus polynomial.
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum)]
        suite: TubeArg,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Lagrangean cone, the form gamma, g^c = g^s and the 4h(Y) identity.
    ConeCheck {
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum)]
        suite: ConeArg,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Normal J-algebras.
    Jalg {
        #[command(subcommand)]
        command: JalgCommand,
    },
    /// Prehomogeneous modules and key algebras.
    Pv {
        #[command(subcommand)]
        command: PvCommand,
    },
    /// Every suite over the shipped corpus.
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TubeArg {
    Isometries,
    Product,
    Pullback,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConeArg {
    Lagrangean,
    Gamma,
    GcGs,
    Lemma4h,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Rank2,
    Rank3,
}

#[derive(Subcommand, Debug)]
enum JalgCommand {
    /// Build one family member and verify it.
    Build {
        #[arg(long, value_enum)]
        family: Family,
        /// dim x12 for rank 2.
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Degree minus one for rank 2.
        #[arg(long, default_value_t = 2)]
        s: u32,
        /// Sign of the x12 scalar product for rank 2.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i64,
        /// Isometric map file for rank 3, or a shipped map name.
        #[arg(long)]
        psi: Option<String>,
        /// Signs s23,s12,s13 multiplying the three Gram matrices of psi.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gram_signs: Option<Vec<i64>>,
    },
    /// Verify every listed family and the negative controls.
    Verify {
        #[arg(long)]
        all: bool,
    },
}

#[derive(Subcommand, Debug)]
enum PvCommand {
    /// List catalog entries.
    List,
    /// Check one catalog entry.
    Check {
        #[arg(long)]
        entry: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Sums of key algebras with invariant degree at most D.
    EnumerateKeys {
        #[arg(long, default_value_t = 3)]
        dmax: u64,
    },
}

#[derive(Serialize)]
struct Output<T: Serialize> {
    command: String,
    seed: u64,
    tolerance_scale: f64,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<T>,
    suites: Vec<SuiteReport>,
}

/// Exit code for a library error.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::RouteMismatch { .. }
        | Error::ZeroLevel
        | Error::NonpositiveLevel(_)
        | Error::ConeExit(_)
        | Error::Pole(_)
        | Error::ImproperCone(_)
        | Error::Domain(_)
        | Error::DegenerateMetric(_) => 3,
        _ => 2,
    }
}

fn load_poly(spec: &str) -> Result<PolyEntry, Error> {
    let path = PathBuf::from(spec);
    if path.exists() {
        return PolyEntry::load(&path);
    }
    let name = spec.trim_end_matches(".json");
    let name = name.rsplit('/').next().unwrap_or(name);
    corpus::polynomial(name).ok_or_else(|| Error::Io(format!("no polynomial file or corpus entry {spec:?}")))
}

/// `zero(2,2)` -> `zero_2_2`, matching the shipped file names.
fn slug(name: &str) -> String {
    let s: String = name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    s.split('_').filter(|p| !p.is_empty()).collect::<Vec<_>>().join("_")
}

fn load_psi(spec: &str) -> Result<IsometricMap, Error> {
    let path = PathBuf::from(spec);
    if path.exists() {
        return IsometricMap::from_json(&std::fs::read_to_string(path)?);
    }
    let name = spec.trim_end_matches(".json");
    let name = name.rsplit('/').next().unwrap_or(name);
    corpus::isometric_maps()
        .into_iter()
        .find(|m| m.name == name || format!("psi_{}", slug(&m.name)) == name)
        .ok_or_else(|| Error::Io(format!("no isometric map file or corpus entry {spec:?}")))
}

type Outcome = (Option<serde_json::Value>, Vec<SuiteReport>);

fn execute(cli: &Cli, tol: Tolerances) -> Result<Outcome, Error> {
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::TubeCheck { poly, suite, points } => {
            let e = load_poly(poly)?;
            let s = match suite {
                TubeArg::Isometries => TubeSuite::Isometries,
                TubeArg::Product => TubeSuite::Product,
                TubeArg::Pullback => TubeSuite::Pullback,
            };
            (None, vec![suites::tube_check(&e, s, *points, seed, tol)?])
        }
        Command::ConeCheck { poly, suite, points } => {
            let e = load_poly(poly)?;
            let s = match suite {
                ConeArg::Lagrangean => ConeSuite::Lagrangean,
                ConeArg::Gamma => ConeSuite::Gamma,
                ConeArg::GcGs => ConeSuite::GcGs,
                ConeArg::Lemma4h => ConeSuite::Lemma4h,
            };
            (None, vec![suites::cone_check(&e, s, *points, seed, tol)?])
        }
        Command::Jalg { command: JalgCommand::Build { family, p, s, sign, psi, gram_signs } } => {
            let a = match family {
                Family::Rank2 => build_u0_rank2_signed(*p, *s, *sign)?,
                Family::Rank3 => {
                    let spec = psi.as_deref().ok_or_else(|| Error::Precondition("rank3 needs --psi".into()))?;
                    let mut m = load_psi(spec)?;
                    if let Some(g) = gram_signs {
                        let [a, b, c] = g[..] else {
                            return Err(Error::Precondition("--gram-signs takes three signs".into()));
                        };
                        m = m.with_signs(a, b, c);
                    }
                    build_u0_rank3(&m)?
                }
            };
            let info = serde_json::json!({
                "name": a.name,
                "dim": a.algebra.dim(),
                "labels": a.algebra.labels(),
                "degree": a.degree(),
                "h": a.h.to_string(),
                "warnings": a.warnings,
            });
            (Some(info), vec![suites::jalg_family(&a, tol)?])
        }
        Command::Jalg { command: JalgCommand::Verify { all } } => {
            if !all {
                return Err(Error::Precondition("jalg verify needs --all".into()));
            }
            (None, suites::jalg_verify_all(tol)?)
        }
        Command::Pv { command: PvCommand::List } => (Some(serde_json::to_value(suites::pv_list())?), Vec::new()),
        Command::Pv { command: PvCommand::Check { entry, samples } } => {
            (None, vec![suites::pv_check(entry, *samples, seed, tol)?])
        }
        Command::Pv { command: PvCommand::EnumerateKeys { dmax } } => {
            (Some(serde_json::to_value(pv::enumerate_key_solutions(*dmax))?), Vec::new())
        }
        Command::All => (None, suites::all(seed, tol)?),
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::TubeCheck { .. } => "tube-check",
        Command::ConeCheck { .. } => "cone-check",
        Command::Jalg { command: JalgCommand::Build { .. } } => "jalg build",
        Command::Jalg { command: JalgCommand::Verify { .. } } => "jalg verify",
        Command::Pv { command: PvCommand::List } => "pv list",
        Command::Pv { command: PvCommand::Check { .. } } => "pv check",
        Command::Pv { command: PvCommand::EnumerateKeys { .. } } => "pv enumerate-keys",
        Command::All => "all",
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let tol = match Tolerances::from_env() {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let start = Instant::now();
    let (data, reports) = match execute(&cli, tol) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return error_code(&e);
        }
    };
    let failed = reports.iter().any(|r| !r.passed());
    let doc = Output {
        command: command_name(&cli.command).to_string(),
        seed: cli.seed,
        tolerance_scale: tol.scale,
        status: if failed { "fail" } else { "pass" },
        data,
        suites: reports,
    };
    match cli.format {
        Format::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            for r in &doc.suites {
                let _ = write!(err, "{r}");
            }
        }
        Format::Text => {
            if let Some(d) = &doc.data {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(d).expect("serializable"));
            }
            for r in &doc.suites {
                let _ = write!(out, "{r}");
            }
        }
    }
    let n_fail: usize = doc.suites.iter().map(|r| r.failures().count()).sum();
    let _ = writeln!(
        err,
        "{}: {} suites, {} failed checks, {:.2}s",
        doc.status,
        doc.suites.len(),
        n_fail,
        start.elapsed().as_secs_f64()
    );
    i32::from(failed)
}
