//! The `polyterm` command-line driver.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use polyterm_core::print::Printer;
use polyterm_core::{Ty, Tm};
use polyterm_interp::{normalize_with, Options, Strategy};
use polyterm_ordering::{ground_compare, Comparator, GroundOutcome, OracleConfig, Verdict};
use polyterm_pfs::{check_system, load_system, PfsError, System};
use polyterm_prover::{load_interpretation, rule_removal, suggest_hint, Interpretation, ProverError, Status};
use polyterm_text::{Env, TextError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Pfs { path: PathBuf, source: PfsError },
    #[error("{path}: {source}")]
    Prover { path: PathBuf, source: ProverError },
    #[error(transparent)]
    Proof(#[from] ProverError),
    #[error("{what}: {source}")]
    Text { what: String, source: TextError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Interp(#[from] polyterm_interp::InterpError),
    #[error("{0}")]
    Ordering(#[from] polyterm_ordering::OrderingError),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Success, a completed run whose answer is negative, or an error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "polyterm", version, about = "Termination proofs for polymorphic functional systems")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Relation {
    Gt,
    Ge,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Symbolic,
    Oracle,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Outermost,
    Innermost,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validates a system file and, optionally, interpretations for it.
    Check {
        system: PathBuf,
        #[arg(long = "interp")]
        interps: Vec<PathBuf>,
    },
    /// Normalizes an interpretation term.
    Normalize {
        term: String,
        /// Free variable declarations `name:type`.
        #[arg(long = "free", short = 'f')]
        frees: Vec<String>,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long, value_enum, default_value = "outermost")]
        strategy: StrategyArg,
        #[arg(long)]
        unicode: bool,
    },
    /// Runs rule removal with the given interpretations, one per round.
    Prove {
        system: PathBuf,
        #[arg(required = true)]
        interps: Vec<PathBuf>,
        #[arg(long, env = "POLYTERM_SEED", default_value_t = 0)]
        seed: u64,
        /// Closures sampled per oracle check.
        #[arg(long, default_value_t = 200)]
        oracle_budget: usize,
        /// Writes the structured transcript to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Shows the compared polynomials.
        #[arg(long)]
        polynomials: bool,
    },
    /// Compares two interpretation terms of the same type.
    Compare {
        lhs: String,
        rhs: String,
        #[arg(long = "free", short = 'f')]
        frees: Vec<String>,
        #[arg(long, value_enum, default_value = "gt")]
        relation: Relation,
        #[arg(long, value_enum, default_value = "both")]
        mode: Mode,
        #[arg(long, env = "POLYTERM_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        closures: usize,
        #[arg(long)]
        unicode: bool,
    },
    /// Suggests checked hint scripts for the rules of a system.
    Hint {
        system: PathBuf,
        interp: PathBuf,
        #[arg(long = "rule")]
        rules: Vec<String>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn system(path: &Path) -> Result<System> {
    load_system(&read(path)?).map_err(|source| CliError::Pfs { path: path.to_path_buf(), source })
}

fn interpretation(path: &Path, sys: &System) -> Result<Interpretation> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    load_interpretation(&read(path)?, &name, &sys.sig).map_err(|source| CliError::Prover { path: path.to_path_buf(), source })
}

fn interp_env(frees: &[String]) -> Result<Env> {
    let mut env = Env::interp();
    for d in frees {
        let (n, t) = d.split_once(':').ok_or_else(|| CliError::Usage(format!("expected `name:type`, got `{d}`")))?;
        let (ty, _) = env.parse_type(t).map_err(|source| CliError::Text { what: format!("type of {n}"), source })?;
        env.free_tms.insert(n.trim().to_string(), ty);
    }
    Ok(env)
}

fn parse(env: &Env, what: &str, src: &str) -> Result<(Tm, Ty)> {
    env.parse_term(src, None).map_err(|source| CliError::Text { what: what.to_string(), source })
}

fn printer(unicode: bool) -> Printer<'static> {
    if unicode {
        Printer::unicode()
    } else {
        Printer::default()
    }
}

/// Runs one command, writing its report to `out`, and returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.cmd {
        Command::Check { system: path, interps } => {
            let (sys, errs) = check_system(&read(&path)?);
            for e in &errs {
                writeln!(out, "error: {}: {e}", path.display())?;
            }
            if !errs.is_empty() {
                return Ok(EXIT_ERROR);
            }
            writeln!(
                out,
                "{}: {} type constants, {} symbols, {} rules",
                path.display(),
                sys.sig.consts.len(),
                sys.sig.symbols.len(),
                sys.rules.len()
            )?;
            for r in &sys.rules {
                writeln!(out, "  {}", r.display(false))?;
            }
            let mut code = EXIT_OK;
            for p in interps {
                match interpretation(&p, &sys) {
                    Ok(i) => writeln!(out, "{}: {} type maps, {} symbol maps, {} hints", p.display(), i.tm.len(), i.j.len(), i.hints.len())?,
                    Err(e) => {
                        writeln!(out, "error: {e}")?;
                        code = EXIT_ERROR;
                    }
                }
            }
            Ok(code)
        }
        Command::Normalize { term, frees, trace, fuel, strategy, unicode } => {
            let env = interp_env(&frees)?;
            let (t, _) = parse(&env, "term", &term)?;
            let strategy = match strategy {
                StrategyArg::Outermost => Strategy::LeftmostOutermost,
                StrategyArg::Innermost => Strategy::LeftmostInnermost,
            };
            let (nf, tr, _) = normalize_with(&t, Options { strategy, fuel, trace })?;
            let p = printer(unicode);
            if trace {
                writeln!(out, "   {}", p.term(&t))?;
                for s in &tr.0 {
                    writeln!(out, "~>{} at {}: {}", s.rule, polyterm_core::term::format_pos(&s.pos), p.term(&s.after))?;
                }
            }
            writeln!(out, "{}", p.term(&nf))?;
            Ok(EXIT_OK)
        }
        Command::Prove { system: path, interps, seed, oracle_budget, json, polynomials } => {
            let sys = system(&path)?;
            let is = interps.iter().map(|p| interpretation(p, &sys)).collect::<Result<Vec<_>>>()?;
            let cfg = OracleConfig { seed, closures: oracle_budget, ..Default::default() };
            let tr = rule_removal(&sys, &is, &cfg)?;
            write!(out, "{}", tr.render(polynomials))?;
            if let Some(j) = json {
                std::fs::write(&j, tr.to_json()).map_err(|source| CliError::Io { path: j.clone(), source })?;
            }
            Ok(match tr.status {
                Status::Terminating => EXIT_OK,
                Status::Stuck(_) => EXIT_NEGATIVE,
            })
        }
        Command::Compare { lhs, rhs, frees, relation, mode, seed, closures, unicode } => {
            let env = interp_env(&frees)?;
            let (l, lt) = parse(&env, "left term", &lhs)?;
            let (r, rt) = parse(&env, "right term", &rhs)?;
            if lt != rt {
                return Err(CliError::Usage(format!(
                    "the terms have different types, {} and {}",
                    printer(unicode).ty(&lt),
                    printer(unicode).ty(&rt)
                )));
            }
            let metas = env.core_metas();
            let claim = match relation {
                Relation::Gt => Verdict::Strict,
                Relation::Ge => Verdict::Weak,
            };
            let mut ok = true;
            if matches!(mode, Mode::Symbolic | Mode::Both) {
                let c = Comparator::new(&metas).compare(&l, &r, &lt);
                let p = printer(unicode);
                writeln!(out, "symbolic: {}", c.verdict)?;
                writeln!(out, "  at {}", p.ty(&c.base))?;
                writeln!(out, "  lhs {}", p.term(&c.lhs.denote(&c.base)))?;
                writeln!(out, "  rhs {}", p.term(&c.rhs.denote(&c.base)))?;
                ok &= c.verdict == Verdict::Strict || (claim == Verdict::Weak && c.verdict == Verdict::Weak);
            }
            if matches!(mode, Mode::Oracle | Mode::Both) {
                let cfg = OracleConfig { seed, closures, ..Default::default() };
                match ground_compare(&l, &r, &lt, &metas, claim, &cfg)? {
                    GroundOutcome::Consistent(n) => writeln!(out, "oracle: consistent on {n} samples")?,
                    GroundOutcome::Refuted(w) => {
                        writeln!(out, "oracle: refuted")?;
                        writeln!(out, "  witness {}", w.describe())?;
                        ok = false;
                    }
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Hint { system: path, interp, rules } => {
            let sys = system(&path)?;
            let i = interpretation(&interp, &sys)?;
            for r in &sys.rules {
                if !rules.is_empty() && !rules.contains(&r.name) {
                    continue;
                }
                let h = suggest_hint(r, &i)?;
                if !h.steps.is_empty() {
                    writeln!(out, "hint {}: {h}", r.name)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}
