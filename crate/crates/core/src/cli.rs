//! Command-line front end. [`run`] does all the work and returns the exit
//! code and output streams so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 validation findings, 2 input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::certify::{certify, format_interval, lambda_min_bound, sig6, CertifyOptions, EfQuery};
use crate::scenarios::{self, IDS};
use crate::sim::json::parse_experiment;
use crate::sim::{random_instance, random_mixed_instance, simulate};
use crate::table::{parse_table, to_json, BehaviorTable, Level, ValidationReport, Violation};
use crate::tol::{Tolerances, DEFAULT_EPSILON_P};

#[derive(Debug, Parser)]
#[command(
    name = "bellcert",
    version,
    about = "Bounds on the shared state of a Bell experiment from its correlation table"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check ranges, normalization and optionally no-signaling.
    Validate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = LevelArg::Basic)]
        level: LevelArg,
        #[command(flatten)]
        common: Common,
    },
    /// Compute every bound for a table.
    Certify {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ef: EfArgs,
    },
    /// Produce the correlation table of an experiment spec or a random instance.
    Simulate {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        input: Option<PathBuf>,
        /// Random pure-state instance with sizes D,NX,NY,NA,NB.
        #[arg(long, value_name = "D,NX,NY,NA,NB", value_parser = parse_sizes)]
        random: Option<[usize; 5]>,
        /// With --random, draw a mixed state of this rank instead.
        #[arg(long, requires = "random")]
        mixed_rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the bounds report; the table goes to --out when given.
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ef: EfArgs,
    },
    /// Write one of the built-in tables.
    Scenario {
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximally-entangled and two-qubit exclusion verdicts.
    Exclude {
        input: PathBuf,
        /// Largest local dimension to test.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Basic,
    NoSignaling,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::Basic => Level::Basic,
            LevelArg::NoSignaling => Level::NoSignaling,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_EPSILON_P, value_parser = non_negative)]
    pub epsilon_p: f64,
    #[arg(long, value_parser = positive)]
    pub tol_norm: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_ns: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_zero: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_ceil: Option<f64>,
}

impl Common {
    fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            norm: self.tol_norm.unwrap_or(d.norm),
            no_signaling: self.tol_ns.unwrap_or(d.no_signaling),
            zero: self.tol_zero.unwrap_or(d.zero),
            ceil: self.tol_ceil.unwrap_or(d.ceil),
        }
    }
}

#[derive(Debug, Args)]
pub struct EfArgs {
    /// Purity deficit for the entanglement-of-formation bound.
    #[arg(long, requires = "dim")]
    pub eta: Option<f64>,
    /// Local dimension for the entanglement-of-formation bound.
    #[arg(long, requires = "eta")]
    pub dim: Option<usize>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a non-negative number, got {s:?}")),
    }
}

fn parse_sizes(s: &str) -> Result<[usize; 5], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let mut out = [0usize; 5];
    if parts.len() != 5 {
        return Err("expected five comma-separated sizes D,NX,NY,NA,NB".into());
    }
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = match p.parse() {
            Ok(n) if n > 0 => n,
            _ => return Err(format!("size {p:?} is not a positive integer")),
        };
    }
    Ok(out)
}

/// Exit code with captured output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        Self {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    execute(config)
}

pub fn execute(config: RunConfig) -> Outcome {
    let result = match config.command {
        Command::Validate {
            input,
            level,
            common,
        } => cmd_validate(&input, level.into(), &common),
        Command::Certify { input, common, ef } => {
            read_table(&input).and_then(|t| emit(&common.out, certify_text(&t, &common, &ef)))
        }
        Command::Simulate {
            input,
            random,
            mixed_rank,
            seed,
            certify,
            common,
            ef,
        } => cmd_simulate(
            input.as_deref(),
            random,
            mixed_rank,
            seed,
            certify,
            &common,
            &ef,
        ),
        Command::Scenario { id, out } => cmd_scenario(&id, &out),
        Command::Exclude { input, dim, common } => {
            read_table(&input).and_then(|t| emit(&common.out, exclude_text(&t, dim, &common)))
        }
    };
    result.unwrap_or_else(Outcome::input_error)
}

fn read_text(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| format!("stdin: {e}"))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_table(path: &Path) -> Result<BehaviorTable, String> {
    let text = read_text(path)?;
    parse_table(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Send `text` to `out` if given, else to stdout.
fn emit(out: &Option<PathBuf>, text: String) -> Result<Outcome, String> {
    match out {
        Some(p) => {
            write_file(p, &text)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn cmd_validate(input: &Path, level: Level, common: &Common) -> Result<Outcome, String> {
    let table = read_table(input)?;
    let report = table.validate(level, &common.tolerances());
    let text = match common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => validation_text(&report),
    };
    let mut outcome = emit(&common.out, text)?;
    if !report.is_clean() {
        outcome.code = 1;
    }
    Ok(outcome)
}

fn validation_text(r: &ValidationReport) -> String {
    let mut out = String::new();
    let level = match r.level {
        Level::Basic => "basic",
        Level::NoSignaling => "no-signaling",
    };
    let _ = writeln!(
        out,
        "level: {level}\ntable: {}\nviolations: {}",
        if r.complete { "complete" } else { "partial" },
        r.violations.len()
    );
    for v in &r.violations {
        let line = match v {
            Violation::Range { at, value } => format!("range: p{at} = {value} outside [0, 1]"),
            Violation::Normalization { x, y, sum, complete } => {
                if *complete {
                    format!("normalization: block (x={x}, y={y}) sums to {sum}")
                } else {
                    format!("normalization: partial block (x={x}, y={y}) already sums to {sum} > 1")
                }
            }
            Violation::NoSignaling {
                party,
                setting,
                outcome,
                reference_other,
                other,
                deviation,
            } => format!(
                "no-signaling: {party:?} marginal for setting {setting}, outcome {outcome} differs by {deviation:e} between the other party's settings {reference_other} and {other}"
            ),
        };
        let _ = writeln!(out, "  {line}");
    }
    out
}

fn options(common: &Common, ef: &EfArgs) -> CertifyOptions {
    CertifyOptions {
        tolerances: common.tolerances(),
        epsilon_p: common.epsilon_p,
        ef: match (ef.eta, ef.dim) {
            (Some(eta), Some(dim)) => Some(EfQuery { eta, dim }),
            _ => None,
        },
    }
}

fn certify_text(table: &BehaviorTable, common: &Common, ef: &EfArgs) -> String {
    let report = certify(table, &options(common, ef));
    match common.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}

fn cmd_simulate(
    input: Option<&Path>,
    random: Option<[usize; 5]>,
    mixed_rank: Option<usize>,
    seed: u64,
    with_certify: bool,
    common: &Common,
    ef: &EfArgs,
) -> Result<Outcome, String> {
    let spec = match (input, random) {
        (_, Some([d, nx, ny, na, nb])) => match mixed_rank {
            Some(r) => random_mixed_instance(d, r, nx, ny, na, nb, seed),
            None => random_instance(d, nx, ny, na, nb, seed),
        },
        (Some(path), None) => {
            let text = read_text(path)?;
            parse_experiment(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, None) => return Err("either an experiment file or --random is required".into()),
    };
    let table = simulate(&spec).map_err(|e| e.to_string())?;
    if !with_certify {
        return emit(&common.out, to_json(&table));
    }
    if let Some(p) = &common.out {
        write_file(p, &to_json(&table))?;
    }
    Ok(Outcome::ok(certify_text(&table, common, ef)))
}

fn cmd_scenario(id: &str, out: &Option<PathBuf>) -> Result<Outcome, String> {
    let s = scenarios::by_id(id)
        .ok_or_else(|| format!("unknown scenario {id:?}; known: {}", IDS.join(", ")))?;
    emit(out, to_json(&s.table))
}

fn exclude_text(table: &BehaviorTable, max_dim: usize, common: &Common) -> String {
    let tol = common.tolerances();
    let bound = lambda_min_bound(table, common.epsilon_p);
    let verdicts: Vec<(usize, bool)> = (2..=max_dim.max(2))
        .map(|d| (d, bound.excludes_maximally_entangled(d, tol.zero)))
        .collect();
    let interval = bound.two_qubit_exclusion();
    let exact = bound.exact().map(crate::table::format_ratio);
    match common.format {
        Format::Json => {
            let doc = json!({
                "lambda_min_bound": match bound.value() {
                    Some(v) => json!(v),
                    None => json!("vacuous"),
                },
                "lambda_min_bound_exact": exact,
                "maximally_entangled": verdicts
                    .iter()
                    .map(|(d, e)| json!({ "dim": d, "excluded": e }))
                    .collect::<Vec<_>>(),
                "two_qubit_exclusion": interval,
                "epsilon_p": common.epsilon_p,
                "tol_zero": tol.zero,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            let lm = match (bound.value(), &exact) {
                (None, _) => "vacuous".to_string(),
                (Some(v), Some(e)) => format!("{} (= {e})", sig6(v)),
                (Some(v), None) => sig6(v),
            };
            let _ = writeln!(out, "smallest Schmidt coefficient bound: {lm}");
            for (d, e) in &verdicts {
                let _ = writeln!(
                    out,
                    "maximally entangled, local dimension {d}: {}",
                    if *e { "excluded" } else { "not excluded" }
                );
            }
            let _ = match &interval {
                Some(iv) => writeln!(out, "excluded two-qubit weights: {}", format_interval(iv)),
                None => writeln!(out, "excluded two-qubit weights: none"),
            };
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sizes() {
        assert_eq!(parse_sizes("2,1,1,2,2"), Ok([2, 1, 1, 2, 2]));
        assert!(parse_sizes("2,1,1,2").is_err());
        assert!(parse_sizes("2,0,1,2,2").is_err());
    }

    #[test]
    fn rejects_non_positive_tolerances() {
        for bad in ["0", "-1e-9", "nan", "x"] {
            assert!(positive(bad).is_err());
        }
        let o = run(["bellcert", "validate", "x.json", "--tol-norm", "0"]);
        assert_eq!(o.code, 2);
    }

    #[test]
    fn help_and_unknown_scenario() {
        let o = run(["bellcert", "--help"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("certify"));
        let o = run(["bellcert", "scenario", "unknown-name"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("magic-square"));
        assert_eq!(run(["bellcert"]).code, 2);
    }

    #[test]
    fn eta_requires_dim() {
        assert_eq!(
            run(["bellcert", "certify", "t.json", "--eta", "0.1"]).code,
            2
        );
    }

    #[test]
    fn missing_file_is_input_error() {
        let o = run(["bellcert", "certify", "/nonexistent/table.json"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("/nonexistent/table.json"));
    }

    #[test]
    fn random_simulation_is_deterministic() {
        let args = [
            "bellcert",
            "simulate",
            "--random",
            "3,2,2,2,2",
            "--seed",
            "9",
        ];
        let a = run(args);
        assert_eq!(a.code, 0);
        assert_eq!(a, run(args));
        let t = parse_table(&a.stdout).unwrap();
        assert!(t
            .validate(Level::NoSignaling, &Tolerances::default())
            .is_clean());
    }
}
