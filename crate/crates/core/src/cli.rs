//! Command-line front end.
//!
//! Exit codes: 0 success, 1 property violation (or disagreeing d-vector
//! routes), 2 bad input, 3 resource cap exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::dvector::{dvec_along_walk, dvec_from_expansion, DVector};
use crate::error::Error;
use crate::explorer::{
    bfs_distance, run_exhaustive, run_fuzz, CampaignReport, FuzzConfig, FuzzPreset, MatrixMode,
    SuiteConfig, TrialStatus,
};
use crate::input::{CoeffSpec, MatrixFile, NamedPreset};
use crate::laurent::DEFAULT_TERM_CAP;
use crate::seed::{ExchangeMatrix, Seed, TermLimits, DEFAULT_SEED_TERM_CAP};
use crate::walk::MutationWalk;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "cluster",
    version,
    about = "Seed mutation, Laurent expansions and d-vectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mutate along a walk and print the endpoint seed.
    Mutate {
        #[command(flatten)]
        input: MatrixArgs,
        /// Comma-separated 1-based directions.
        #[arg(long, default_value = "", value_parser = parse_walk)]
        path: MutationWalk,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the d-vectors at the end of a walk.
    Dvec {
        #[command(flatten)]
        input: MatrixArgs,
        #[arg(long, default_value = "", value_parser = parse_walk)]
        path: MutationWalk,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the invariant suite on every reduced walk of the given length.
    Check {
        #[command(flatten)]
        input: MatrixArgs,
        #[arg(long)]
        depth: usize,
        /// Accept skew-symmetrizable matrices; d-vector positivity failures
        /// are then reported as findings.
        #[arg(long)]
        allow_symmetrizable: bool,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the invariant suite on random matrices and walks.
    Fuzz {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        rank: u64,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        bmax: i64,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Symmetric)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = PresetArg::Trivial)]
        coeffs: PresetArg,
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Bounded distance from a cluster to the nearest cluster containing a
    /// variable.
    Dist {
        #[command(flatten)]
        input: MatrixArgs,
        /// Walk to a cluster containing the variable.
        #[arg(long, default_value = "", value_parser = parse_walk)]
        z_path: MutationWalk,
        /// 1-based position of the variable in that cluster.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        z_position: u64,
        /// Walk to the cluster to measure from.
        #[arg(long, default_value = "", value_parser = parse_walk)]
        t_path: MutationWalk,
        #[arg(long)]
        bound: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug)]
struct MatrixArgs {
    /// Matrix JSON file.
    #[arg(long)]
    matrix: PathBuf,
    /// Override the coefficient system given in the file.
    #[arg(long, value_enum)]
    coeffs: Option<PresetArg>,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Cap on terms per polynomial.
    #[arg(long, env = "CLUSTER_TERM_CAP", default_value_t = DEFAULT_TERM_CAP,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    term_cap: usize,
    /// Cap on total terms per seed.
    #[arg(long, env = "CLUSTER_SEED_TERM_CAP", default_value_t = DEFAULT_SEED_TERM_CAP,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    seed_term_cap: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl CommonArgs {
    fn limits(&self) -> TermLimits {
        TermLimits {
            per_polynomial: self.term_cap,
            per_seed: self.seed_term_cap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Expansion,
    Recurrence,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[value(alias = "skew-symmetric")]
    Symmetric,
    #[value(alias = "skew-symmetrizable")]
    Symmetrizable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PresetArg {
    Trivial,
    Principal,
}

fn parse_walk(s: &str) -> Result<MutationWalk, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Outcome of a subcommand: exit code plus the text for the output sink.
struct Outcome {
    code: i32,
    text: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_resource_exceeded() {
            EXIT_RESOURCE
        } else {
            EXIT_BAD_INPUT
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let output = match &cli.command {
        Command::Mutate { common, .. }
        | Command::Dvec { common, .. }
        | Command::Check { common, .. }
        | Command::Fuzz { common, .. }
        | Command::Dist { common, .. } => common.output.clone(),
    };
    match dispatch(cli.command, err) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.text, output.as_deref(), out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_BAD_INPUT;
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    }
}

fn load_matrix(input: &MatrixArgs) -> Result<ExchangeMatrix, Failure> {
    let mut file = MatrixFile::load(&input.matrix)?;
    if let Some(p) = input.coeffs {
        file.coeffs = CoeffSpec::Named(match p {
            PresetArg::Trivial => NamedPreset::Trivial,
            PresetArg::Principal => NamedPreset::Principal,
        });
    }
    Ok(file.to_matrix()?)
}

fn dispatch(command: Command, err: &mut dyn Write) -> Result<Outcome, Failure> {
    match command {
        Command::Mutate {
            input,
            path,
            common,
        } => cmd_mutate(&input, &path, &common),
        Command::Dvec {
            input,
            path,
            method,
            common,
        } => cmd_dvec(&input, &path, method, &common),
        Command::Check {
            input,
            depth,
            allow_symmetrizable,
            timings,
            common,
        } => {
            let matrix = load_matrix(&input)?;
            if !matrix.is_skew_symmetric() && !allow_symmetrizable {
                return Err(Failure {
                    code: EXIT_BAD_INPUT,
                    message: "matrix is not skew-symmetric (pass --allow-symmetrizable to check it anyway)"
                        .into(),
                });
            }
            let cfg = SuiteConfig {
                limits: common.limits(),
                timings,
                ..Default::default()
            };
            let report = run_exhaustive(&Seed::root(matrix), depth, &cfg);
            Ok(campaign_outcome(&report, common.format, err))
        }
        Command::Fuzz {
            rank,
            bmax,
            depth,
            trials,
            seed,
            mode,
            coeffs,
            timings,
            common,
        } => {
            let cfg = FuzzConfig {
                rank: rank as usize,
                b_max: bmax,
                depth,
                trials: trials as usize,
                seed,
                mode: match mode {
                    ModeArg::Symmetric => MatrixMode::SkewSymmetric,
                    ModeArg::Symmetrizable => MatrixMode::SkewSymmetrizable,
                },
                preset: match coeffs {
                    PresetArg::Trivial => FuzzPreset::Trivial,
                    PresetArg::Principal => FuzzPreset::Principal,
                },
                suite: SuiteConfig {
                    limits: common.limits(),
                    timings,
                    ..Default::default()
                },
            };
            let report = run_fuzz(&cfg);
            Ok(campaign_outcome(&report, common.format, err))
        }
        Command::Dist {
            input,
            z_path,
            z_position,
            t_path,
            bound,
            common,
        } => {
            let matrix = load_matrix(&input)?;
            let limits = common.limits();
            let root = Seed::root(matrix);
            let pos = z_position as usize;
            if pos > root.rank() {
                return Err(Failure {
                    code: EXIT_BAD_INPUT,
                    message: format!("position {pos} out of range 1..={}", root.rank()),
                });
            }
            t_path.check_rank(root.rank())?;
            let z = root.apply_walk(&z_path, &limits)?.var(pos - 1).clone();
            let d = bfs_distance(&root, &z, &t_path, bound, &limits)?;
            let text = match common.format.unwrap_or(Format::Pretty) {
                Format::Json => format!("{}\n", json!({ "distance": d })),
                Format::Tsv | Format::Pretty => format!("{d}\n"),
            };
            Ok(Outcome {
                code: EXIT_OK,
                text,
            })
        }
    }
}

fn cmd_mutate(
    input: &MatrixArgs,
    path: &MutationWalk,
    common: &CommonArgs,
) -> Result<Outcome, Failure> {
    let matrix = load_matrix(input)?;
    let seed = Seed::root(matrix).apply_walk(path, &common.limits())?;
    let vars: Vec<String> = seed.vars().iter().map(|v| v.to_string()).collect();
    let text = match common.format.unwrap_or(Format::Pretty) {
        Format::Json => {
            let y: Vec<Vec<i64>> = seed.y().iter().map(|e| e.exponents().to_vec()).collect();
            let v = json!({
                "path": path,
                "n": seed.rank(),
                "m": seed.matrix().frozen(),
                "matrix": seed.matrix().rows(),
                "y": y,
                "vars": vars,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Tsv => vars
            .iter()
            .enumerate()
            .map(|(l, v)| format!("{}\t{}\n", l + 1, v))
            .collect(),
        Format::Pretty => {
            let mut s = format!("path: {}\nmatrix:\n{}", display_walk(path), seed.matrix());
            if seed.matrix().frozen() > 0 {
                for (j, y) in seed.y().iter().enumerate() {
                    s += &format!("y{} = {}\n", j + 1, y);
                }
            }
            for (l, v) in vars.iter().enumerate() {
                s += &format!("vars[{}] = {}\n", l + 1, v);
            }
            s
        }
    };
    Ok(Outcome {
        code: EXIT_OK,
        text,
    })
}

fn cmd_dvec(
    input: &MatrixArgs,
    path: &MutationWalk,
    method: Method,
    common: &CommonArgs,
) -> Result<Outcome, Failure> {
    let matrix = load_matrix(input)?;
    let n = matrix.rank();
    path.check_rank(n)?;
    let recurrence = match method {
        Method::Expansion => None,
        _ => Some(dvec_along_walk(&matrix, path)?),
    };
    let expansion = match method {
        Method::Recurrence => None,
        _ => {
            let seed = Seed::root(matrix).apply_walk(path, &common.limits())?;
            Some(
                seed.vars()
                    .iter()
                    .map(|v| dvec_from_expansion(v, n))
                    .collect::<Result<Vec<DVector>, _>>()?,
            )
        }
    };
    let matches: Option<Vec<bool>> = match (&expansion, &recurrence) {
        (Some(e), Some(r)) => Some(e.iter().zip(r).map(|(a, b)| a == b).collect()),
        _ => None,
    };
    let all_match = matches.as_ref().map_or(true, |m| m.iter().all(|&b| b));

    let text = match common.format.unwrap_or(Format::Pretty) {
        Format::Json => {
            let positions: Vec<_> = (0..n)
                .map(|l| {
                    let mut o = serde_json::Map::new();
                    o.insert("position".into(), json!(l + 1));
                    if let Some(e) = &expansion {
                        o.insert("expansion".into(), json!(e[l]));
                    }
                    if let Some(r) = &recurrence {
                        o.insert("recurrence".into(), json!(r[l]));
                    }
                    if let Some(m) = &matches {
                        o.insert("match".into(), json!(m[l]));
                    }
                    serde_json::Value::Object(o)
                })
                .collect();
            let mut v = json!({ "path": path, "positions": positions });
            if matches.is_some() {
                v["match"] = json!(all_match);
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Tsv => (0..n)
            .map(|l| {
                let cell = |d: &Option<Vec<DVector>>| {
                    d.as_ref().map_or(String::new(), |d| d[l].to_string())
                };
                let m = matches.as_ref().map_or(String::new(), |m| m[l].to_string());
                format!(
                    "{}\t{}\t{}\t{}\n",
                    l + 1,
                    cell(&expansion),
                    cell(&recurrence),
                    m
                )
            })
            .collect(),
        Format::Pretty => (0..n)
            .map(|l| match (&expansion, &recurrence) {
                (Some(e), Some(r)) => format!(
                    "position {}: expansion={} recurrence={} match={}\n",
                    l + 1,
                    e[l],
                    r[l],
                    e[l] == r[l]
                ),
                (Some(d), None) | (None, Some(d)) => format!("position {}: {}\n", l + 1, d[l]),
                (None, None) => unreachable!(),
            })
            .collect(),
    };
    let code = if all_match { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Outcome { code, text })
}

fn display_walk(w: &MutationWalk) -> String {
    if w.is_empty() {
        "(root)".into()
    } else {
        w.to_string()
    }
}

fn campaign_outcome(
    report: &CampaignReport,
    format: Option<Format>,
    err: &mut dyn Write,
) -> Outcome {
    let s = &report.summary;
    let _ = writeln!(
        err,
        "trials={} pass={} violations={} resource_exceeded={} findings={}",
        s.trials, s.pass, s.violations, s.resource_exceeded, s.findings
    );
    if let Some(t) = report.first_violation() {
        if let Some(w) = &t.witness {
            let _ = writeln!(
                err,
                "violation in trial {} (walk {}):\n{}",
                t.index,
                t.walk,
                serde_json::to_string_pretty(w).expect("json")
            );
        }
    }
    let code = if s.violations > 0 {
        EXIT_VIOLATION
    } else if s.trials > 0 && s.resource_exceeded == s.trials {
        EXIT_RESOURCE
    } else {
        EXIT_OK
    };
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(report).expect("json")),
        Format::Tsv => {
            let mut t = String::from("index\tstatus\twalk\tmatrix\n");
            for r in &report.trials {
                t += &format!(
                    "{}\t{}\t{}\t{}\n",
                    r.index,
                    serde_json::to_string(&r.status)
                        .expect("json")
                        .trim_matches('"'),
                    r.walk,
                    serde_json::to_string(&r.matrix).expect("json")
                );
            }
            t
        }
        Format::Pretty => {
            let mut t = format!(
                "trials: {}\npass: {}\nviolations: {}\nresource_exceeded: {}\nfindings: {}\n",
                s.trials, s.pass, s.violations, s.resource_exceeded, s.findings
            );
            for r in report
                .trials
                .iter()
                .filter(|r| r.status == TrialStatus::Violation)
            {
                t += &format!("violation: trial {} walk {}\n", r.index, r.walk);
            }
            t
        }
    };
    Outcome { code, text }
}
