//! The `ulm` command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::backforth::{condition_report, oracle_vs_symbolic_sweep, BfVerdict, ClauseStatus, GameConfig};
use crate::ordinal::Ordinal;
use crate::pgroup::{lemma2_check, GroupSpec, Subgroup};
use crate::profile::{ProfileError, UlmProfile};
use crate::scott::{annotate, build_phi_g, classify, complexity_of, ScottError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNREALIZABLE: i32 = 3;
pub const EXIT_UNDECIDED: i32 = 4;
pub const EXIT_PRIME_MISMATCH: i32 = 5;
pub const EXIT_VERIFICATION: i32 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "ulm",
    version,
    about = "Ulm invariants, back-and-forth relations and Scott complexity of reduced abelian p-groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound the Scott complexity of a profile.
    Classify {
        profile: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide the back-and-forth relations between two profiles.
    Compare {
        profile_a: PathBuf,
        profile_b: PathBuf,
        #[arg(long)]
        level: Ordinal,
    },
    /// Print the finite group with a given profile.
    Realize {
        profile: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the Scott sentence of a profile.
    Sentence {
        profile: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
    /// Compare the game oracle with the symbolic decision on all small groups.
    OracleCheck {
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=6))]
        max_order_exp: u32,
        #[arg(long)]
        max_level: u32,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Test the u-map / proper-element equivalence on random instances.
    Lemma2Fuzz {
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=6))]
        max_order_exp: u32,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn profile_failure(e: ProfileError) -> Failure {
    match e {
        ProfileError::Unrealizable | ProfileError::NotFinite(_) => Failure::new(EXIT_UNREALIZABLE, e.to_string()),
        ProfileError::PrimeMismatch(..) => Failure::new(EXIT_PRIME_MISMATCH, e.to_string()),
        _ => Failure::new(EXIT_PARSE, e.to_string()),
    }
}

impl From<ScottError> for Failure {
    fn from(e: ScottError) -> Self {
        match e {
            ScottError::Profile(p) => profile_failure(p),
            ScottError::PrimeMismatch { .. } => Failure::new(EXIT_PRIME_MISMATCH, e.to_string()),
            other => Failure::new(EXIT_VERIFICATION, other.to_string()),
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::new(EXIT_VERIFICATION, format!("cannot write output: {e}"))
}

fn read_profile(path: &Path) -> Result<UlmProfile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

/// Runs one command, writing results to `out` and diagnostics to `err`;
/// returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Classify { profile, json } => {
            let p = read_profile(&profile)?;
            let c = classify(&p)?;
            if json {
                let v = json!({ "profile": p, "length": p.length(), "classification": c });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable")).map_err(io_failure)?;
            } else {
                writeln!(out, "length: {}", p.length()).map_err(io_failure)?;
                writeln!(out, "{c}").map_err(io_failure)?;
            }
            Ok(EXIT_OK)
        }
        Command::Compare { profile_a, profile_b, level } => {
            let a = read_profile(&profile_a)?;
            let b = read_profile(&profile_b)?;
            if a.prime() != b.prime() {
                return Err(profile_failure(ProfileError::PrimeMismatch(a.prime(), b.prime())));
            }
            let mut verdicts = Vec::new();
            for (name, x, y) in [("A <= B", &a, &b), ("B <= A", &b, &a)] {
                let report = condition_report(x, y, &level).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
                let v = report.verdict();
                writeln!(out, "{name} at level {level}: {v}").map_err(io_failure)?;
                for c in &report.clauses {
                    let status = match c.status {
                        ClauseStatus::Pass => "pass",
                        ClauseStatus::Fail => "fail",
                        ClauseStatus::Unknown => "unknown",
                    };
                    writeln!(out, "  {:<16} {:<8} {}", c.clause, status, c.detail).map_err(io_failure)?;
                }
                verdicts.push(v);
            }
            let equiv = match (&verdicts[0], &verdicts[1]) {
                (BfVerdict::Holds, BfVerdict::Holds) => BfVerdict::Holds,
                (BfVerdict::Fails(c), _) | (_, BfVerdict::Fails(c)) => BfVerdict::Fails(c.clone()),
                (BfVerdict::Unknown(c), _) | (_, BfVerdict::Unknown(c)) => BfVerdict::Unknown(c.clone()),
            };
            writeln!(out, "A == B at level {level}: {equiv}").map_err(io_failure)?;
            Ok(if equiv.decided().is_some() { EXIT_OK } else { EXIT_UNDECIDED })
        }
        Command::Realize { profile, json } => {
            let p = read_profile(&profile)?;
            let g = p.realize().map_err(profile_failure)?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&g).expect("serializable")).map_err(io_failure)?;
            } else {
                writeln!(out, "{g}").map_err(io_failure)?;
            }
            Ok(EXIT_OK)
        }
        Command::Sentence { profile, emit } => {
            let p = read_profile(&profile)?;
            let phi = build_phi_g(&p)?;
            match emit {
                Emit::Text => {
                    writeln!(out, "complexity: {}", complexity_of(&phi)?).map_err(io_failure)?;
                    writeln!(out, "{phi}").map_err(io_failure)?;
                }
                Emit::Json => {
                    let v = annotate(&phi)?;
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable")).map_err(io_failure)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::OracleCheck { p, max_order_exp, max_level, jobs } => {
            let corpus = GroupSpec::all_up_to(p, max_order_exp).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let cfg = GameConfig { max_level, ..GameConfig::default() };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let report = pool
                .install(|| oracle_vs_symbolic_sweep(&corpus, max_level, &cfg))
                .map_err(|e| Failure::new(EXIT_VERIFICATION, e.to_string()))?;
            out.write_all(report.to_jsonl().as_bytes()).map_err(io_failure)?;
            let bad = report.disagreements().len();
            let unknown = report.unknowns().len();
            writeln!(
                err,
                "{} groups, {} records, {bad} disagreements, {unknown} undecided",
                corpus.len(),
                report.records.len()
            )
            .map_err(io_failure)?;
            Ok(if bad == 0 && unknown == 0 { EXIT_OK } else { EXIT_VERIFICATION })
        }
        Command::Lemma2Fuzz { p, max_order_exp, trials, seed } => {
            let failures =
                lemma2_fuzz(p, max_order_exp, trials, seed, false).map_err(|e| Failure::new(EXIT_PARSE, e))?;
            for f in &failures {
                writeln!(out, "{f}").map_err(io_failure)?;
            }
            writeln!(err, "{trials} trials, {} counterexamples", failures.len()).map_err(io_failure)?;
            Ok(if failures.is_empty() { EXIT_OK } else { EXIT_VERIFICATION })
        }
    }
}

/// Samples `trials` random triples `(G, S, α)` with `|G| ≤ p^max_order_exp`,
/// `S` generated by at most two random elements and `α < length(G)`, and
/// returns a description of each triple where "the u-map onto
/// `P_α/P_{α+1}` is onto" differs from "no proper element of height `α`
/// lies outside `S`". `invert` flips the expected relation, for testing the
/// harness itself.
pub fn lemma2_fuzz(p: u64, max_order_exp: u32, trials: u64, seed: u64, invert: bool) -> Result<Vec<String>, String> {
    let groups: Vec<GroupSpec> = GroupSpec::all_up_to(p, max_order_exp)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|g| g.length() > 0)
        .collect();
    if groups.is_empty() && trials > 0 {
        return Err(format!("no nontrivial groups of order at most {p}^{max_order_exp}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let g = &groups[rng.gen_range(0..groups.len())];
        let order = g.order().ok_or("group too large")? as usize;
        let gens: Vec<_> = (0..rng.gen_range(0..=2)).map(|_| g.element_at(rng.gen_range(0..order))).collect();
        let alpha = rng.gen_range(0..g.length());
        let s = Subgroup::generated(g, gens.clone()).map_err(|e| e.to_string())?;
        let outcome = lemma2_check(g, &s, alpha).map_err(|e| e.to_string())?;
        if (outcome.range_full == !outcome.exists_proper) == invert {
            let gens: Vec<String> = gens.iter().map(ToString::to_string).collect();
            failures.push(format!(
                "trial {trial}: G = {g}, S = <{}>, alpha = {alpha}, range_full = {}, exists_proper = {}",
                gens.join(", "),
                outcome.range_full,
                outcome.exists_proper
            ));
        }
    }
    Ok(failures)
}
