use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kronecker::criteria::{decide, is_factor, Mode, Representation, Verdict};
use kronecker::extract::extract_invariants;
use kronecker::hom::{hom_basis, structured_generic_hom};
use kronecker::invariants::{InvariantsJson, KroneckerInvariants};
use kronecker::pencil::{canonical_pencil, Pencil};
use kronecker::rank::{rank_block_triangular, rank_ii, rank_pp, rank_rr, Component, OracleConfig};
use kronecker::verify::{run_suite, SUITES};
use kronecker::Error;

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_UNAVAILABLE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "kronecker", version, about = "Kronecker quiver representations and matrix pencils")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the canonical pencil of a set of invariants.
    Canonical {
        #[arg(long)]
        invariants: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Compute the invariants of a pencil.
    Invariants {
        #[arg(long)]
        pencil: PathBuf,
    },
    /// Decide whether one representation is a subrepresentation of another.
    Embeds {
        #[arg(long)]
        sub: PathBuf,
        #[arg(long)]
        into: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Decide whether one representation is a factor representation of another.
    Factor {
        #[arg(long)]
        quotient: PathBuf,
        #[arg(long)]
        of: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Dimension of the homomorphism space.
    Homdim {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
    /// Evaluate a closed-form rank.
    Rank {
        #[arg(long, value_enum)]
        kind: RankKind,
        /// JSON arguments, inline or `@file`.
        #[arg(long)]
        args: String,
    },
    /// Run an agreement suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long = "max-dim")]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct OracleArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = kronecker::linalg::DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OracleArgs {
    fn config(&self) -> OracleConfig {
        OracleConfig {
            trials: self.trials,
            prime: self.prime,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Theorem,
    Generic,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Theorem => Mode::Theorem,
            ModeArg::Generic => Mode::Generic,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RankKind {
    Pp,
    Pp1,
    Ii,
    Ii2,
    Rr,
    Blocktri,
}

/// Failure carrying the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::CriterionUnavailable(_)) => EXIT_UNAVAILABLE,
            Some(Error::Disagreement { .. }) | Some(Error::InternalInconsistency(_)) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_YES });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Canonical { invariants, output } => {
            let inv = read_invariants(&invariants)?;
            let text = canonical_pencil(&inv).to_json();
            match output {
                Some(path) => fs::write(&path, text + "\n")
                    .with_context(|| format!("writing {}", path.display()))?,
                None => println!("{text}"),
            }
            Ok(EXIT_YES)
        }
        Command::Invariants { pencil } => {
            let p = read_pencil(&pencil)?;
            let inv = extract_invariants(&p)?;
            println!("{}", inv.to_json());
            Ok(EXIT_YES)
        }
        Command::Embeds { sub, into, oracle } => {
            let n = read_representation(&sub)?;
            let m = read_representation(&into)?;
            let verdict = decide(&n, &m, oracle.mode.into(), &oracle.config())?;
            Ok(print_verdict(&verdict))
        }
        Command::Factor { quotient, of, oracle } => {
            let n = read_representation(&quotient)?;
            let m = read_representation(&of)?;
            let verdict = is_factor(&n, &m, oracle.mode.into(), &oracle.config())?;
            Ok(print_verdict(&verdict))
        }
        Command::Homdim { from, to } => {
            let n = read_representation(&from)?;
            let m = read_representation(&to)?;
            let dim = hom_basis(&n.pencil(), &m.pencil()).dim();
            let structured = match (n.invariants(), m.invariants()) {
                (Ok(a), Ok(b)) => {
                    let g = structured_generic_hom(&a, &b);
                    json!({
                        "structured_params": g.param_count().ok(),
                        "unstructured_cells": g.unstructured_cells(),
                    })
                }
                _ => json!({ "structured_params": null, "unstructured_cells": null }),
            };
            let mut out = json!({ "hom_dim": dim });
            merge(&mut out, structured);
            println!("{out}");
            Ok(EXIT_YES)
        }
        Command::Rank { kind, args } => {
            let text = match args.strip_prefix('@') {
                Some(path) => read(Path::new(path))?,
                None => args,
            };
            let value: Value = serde_json::from_str(&text).context("parsing --args")?;
            let rank = evaluate_rank(kind, &value)?;
            println!("{}", json!({ "rank": rank }));
            Ok(EXIT_YES)
        }
        Command::Verify { suite, max_dim, seed } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(Error::Parse(format!(
                    "unknown suite {suite:?}; expected one of {}",
                    SUITES.join(", ")
                ))
                .into());
            }
            let summary = run_suite(&suite, max_dim, seed)?;
            let mut out = serde_json::to_value(&summary).expect("serializable");
            merge(&mut out, json!({ "passed": summary.passed(), "seed": seed }));
            println!("{out}");
            Ok(if summary.passed() { EXIT_YES } else { EXIT_NO })
        }
    }
}

fn merge(into: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, extra) {
        a.extend(b);
    }
}

fn print_verdict(v: &Verdict) -> u8 {
    let out = json!({
        "embeds": v.embeds,
        "mode": v.mode,
        "criterion": v.criterion,
        "theorem": v.theorem,
        "report": v.oracle,
    });
    println!("{out}");
    if v.embeds {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_invariants(path: &Path) -> anyhow::Result<KroneckerInvariants> {
    let text = read(path)?;
    KroneckerInvariants::from_json(&text).with_context(|| format!("in {}", path.display()))
}

fn read_pencil(path: &Path) -> anyhow::Result<Pencil> {
    let text = read(path)?;
    Pencil::from_json(&text).with_context(|| format!("in {}", path.display()))
}

/// A file holding either a pencil (`E`/`H` keys) or invariants.
fn read_representation(path: &Path) -> anyhow::Result<Representation> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(e.to_string()))
        .with_context(|| format!("in {}", path.display()))?;
    let is_pencil = value.get("E").is_some() || value.get("H").is_some();
    let rep = if is_pencil {
        Representation::Pencil(Pencil::from_json(&text).with_context(|| format!("in {}", path.display()))?)
    } else {
        Representation::Invariants(
            KroneckerInvariants::from_json(&text).with_context(|| format!("in {}", path.display()))?,
        )
    };
    Ok(rep)
}

fn list(value: &Value, field: &str) -> anyhow::Result<Vec<usize>> {
    let v = value.get(field).with_context(|| format!("missing field {field}"))?;
    serde_json::from_value(v.clone()).with_context(|| format!("field {field}: expected a list of sizes"))
}

fn regular(value: &Value, field: &str) -> anyhow::Result<KroneckerInvariants> {
    let v = value.get(field).with_context(|| format!("missing field {field}"))?;
    let entries = serde_json::from_value(v.clone())
        .with_context(|| format!("field {field}: expected a list of {{\"point\", \"sizes\"}} entries"))?;
    let inv = InvariantsJson {
        regular: entries,
        ..InvariantsJson::default()
    }
    .into_invariants()
    .with_context(|| format!("field {field}"))?;
    Ok(inv)
}

fn evaluate_rank(kind: RankKind, value: &Value) -> anyhow::Result<usize> {
    let rank = match kind {
        RankKind::Pp => rank_pp(&list(value, "a")?, &list(value, "d")?, Component::Two)?,
        RankKind::Pp1 => rank_pp(&list(value, "a")?, &list(value, "d")?, Component::One)?,
        RankKind::Ii => rank_ii(&list(value, "c")?, &list(value, "f")?, Component::One)?,
        RankKind::Ii2 => rank_ii(&list(value, "c")?, &list(value, "f")?, Component::Two)?,
        RankKind::Rr => {
            let target = regular(value, "target")?;
            let source = regular(value, "source")?;
            rank_rr(target.regular(), source.regular())
        }
        RankKind::Blocktri => rank_block_triangular(&list(value, "rows")?, &list(value, "cols")?)?,
    };
    Ok(rank)
}
