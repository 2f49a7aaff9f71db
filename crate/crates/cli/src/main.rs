//! `elas`: parse, model-check, translate, search and prove from the command line.
//!
//! Exit codes: 0 for success, true or expectations met; 1 for false or an
//! unmet expectation; 2 for usage, parse and validation errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use elas::modelsearch::suites::{corpus_suite, prop24_suite, validity_table_suite, VALIDITY_SEED};
use elas::modelsearch::{
    find_countermodel_with, find_witness_with, random_countermodel, SearchBounds, SearchOptions, Verdict,
};
use elas::proofkit::soundness::soundness_suite;
use elas::proofkit::{check_proof, parse_script};
use elas::semantics::{eval, validate_model, KripkeModel, PointedModel, VarAssignment};
use elas::syntax::{free_vars, parse_formula, print_formula, Formula};
use elas::translation::{translate, translate_universal};
use serde_json::json;

#[derive(Parser)]
#[command(name = "elas", version, about = "Epistemic logic with assignments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it with its free variables.
    Parse {
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a formula at a world of a model file.
    Check {
        /// Model JSON; a pointed model file also supplies world and sigma.
        model: PathBuf,
        formula: String,
        #[arg(long)]
        world: Option<String>,
        /// Assignment such as `?x=i,?y=j`.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Search for a countermodel within bounds.
    Valid(SearchArgs),
    /// Search for a satisfying model within bounds.
    Sat(SearchArgs),
    /// Print the first-order translation.
    Translate {
        formula: String,
        #[arg(long, value_enum, default_value = "exists")]
        form: Form,
        /// Name of the world variable.
        #[arg(long, default_value = "w")]
        world_var: String,
    },
    /// Check a proof script step by step.
    Prove {
        script: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run a built-in reproduction suite.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
        /// Formula size limit for the distinguisher search.
        #[arg(long, default_value_t = 9)]
        max_size: usize,
        /// Random trials (validity-table: per valid entry; soundness: instances).
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, default_value_t = 3)]
    worlds: usize,
    #[arg(long, default_value_t = 3)]
    agents: usize,
    /// Search arbitrary frames instead of equivalence relations.
    #[arg(long, conflicts_with = "epistemic")]
    any_frames: bool,
    /// Search epistemic frames only (the default).
    #[arg(long)]
    epistemic: bool,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
}

impl BoundArgs {
    fn bounds(&self) -> SearchBounds {
        SearchBounds::new(self.worlds, self.agents, !self.any_frames)
    }

    fn options(&self) -> SearchOptions {
        SearchOptions {
            jobs: self.jobs as usize,
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    formula: String,
    #[command(flatten)]
    bounds: BoundArgs,
    /// Random models to sample after the exhaustive search comes up empty.
    #[arg(long, default_value_t = 0)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Exists,
    Forall,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    ValidityTable,
    Prop24,
    Soundness,
    Corpus,
}

/// `println!` that ignores a closed stdout, so piping into `head` is quiet.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

/// An error reported on stderr with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Parse { formula, json } => cmd_parse(&formula, json),
        Command::Check {
            model,
            formula,
            world,
            sigma,
            json,
        } => cmd_check(&model, &formula, world, sigma, json),
        Command::Valid(args) => cmd_search(&args, false),
        Command::Sat(args) => cmd_search(&args, true),
        Command::Translate {
            formula,
            form,
            world_var,
        } => {
            let phi = formula_arg(&formula)?;
            let fol = match form {
                Form::Exists => translate(&phi, &world_var),
                Form::Forall => translate_universal(&phi, &world_var),
            };
            out!("{fol}");
            Ok(true)
        }
        Command::Prove { script, json } => cmd_prove(&script, json),
        Command::Suite {
            name,
            max_size,
            trials,
            seed,
            bounds,
            json,
        } => cmd_suite(name, max_size, trials, seed, &bounds, json),
    }
}

fn formula_arg(text: &str) -> Result<Formula, Failure> {
    parse_formula(text).map_err(|e| Failure(format!("{e}\n  {text}\n  {:>width$}", "^", width = e.pos + 1)))
}

fn free_text(phi: &Formula) -> Vec<String> {
    free_vars(phi).iter().map(|v| format!("?{v}")).collect()
}

fn cmd_parse(text: &str, json: bool) -> Outcome {
    let phi = formula_arg(text)?;
    let free = free_text(&phi);
    if json {
        out!("{}", json!({ "formula": print_formula(&phi), "free": free }));
    } else {
        out!("{}", print_formula(&phi));
        out!("free: {{{}}}", free.join(", "));
    }
    Ok(true)
}

fn load_model(path: &Path) -> Result<(KripkeModel, Option<String>, VarAssignment), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let (model, world, sigma) = if value.get("world").is_some() {
        let p: PointedModel = serde_json::from_value(value).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        (p.model, Some(p.world), p.sigma)
    } else {
        let m: KripkeModel = serde_json::from_value(value).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        (m, None, VarAssignment::new())
    };
    let violations = validate_model(&model);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure(format!("invalid model: {}", list.join("; "))));
    }
    Ok((model, world, sigma))
}

fn cmd_check(path: &Path, text: &str, world: Option<String>, sigma: Option<String>, json: bool) -> Outcome {
    let phi = formula_arg(text)?;
    let (model, file_world, file_sigma) = load_model(path)?;
    let world = world
        .or(file_world)
        .ok_or_else(|| Failure("no world given; use --world".into()))?;
    let sigma = match sigma {
        Some(s) => VarAssignment::parse(&s).map_err(Failure)?,
        None => file_sigma,
    };
    let value = eval(&PointedModel::new(model, &world, sigma.clone()), &phi)?;
    if json {
        out!(
            "{}",
            json!({ "formula": print_formula(&phi), "world": world, "sigma": sigma.to_string(), "value": value })
        );
    } else {
        out!("{value}");
    }
    Ok(value)
}

/// `valid` succeeds when no countermodel turns up, `sat` when a witness does.
fn cmd_search(args: &SearchArgs, sat: bool) -> Outcome {
    let phi = formula_arg(&args.formula)?;
    let bounds = args.bounds.bounds();
    let opts = args.bounds.options();
    let mut verdict = if sat {
        find_witness_with(&phi, &bounds, opts)?
    } else {
        find_countermodel_with(&phi, &bounds, opts)?
    };
    let mut sampled = None;
    if args.trials > 0 && verdict.model().is_none() {
        let random = bounds.with_trials(args.trials);
        let target = if sat { Formula::not(phi.clone()) } else { phi.clone() };
        sampled = Some(args.trials);
        if let Some(model) = random_countermodel(&target, &random, args.seed)? {
            verdict = if sat {
                Verdict::Witness { model }
            } else {
                Verdict::Countermodel { model }
            };
        }
    }
    let success = matches!(verdict, Verdict::Witness { .. } | Verdict::NoCountermodelUpTo { .. });
    if args.json {
        let mut out = serde_json::to_value(&verdict)?;
        out["formula"] = json!(print_formula(&phi));
        out["random_trials"] = json!(sampled.unwrap_or(0));
        out!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        let mut line = verdict.describe();
        if let (Some(n), None) = (sampled, verdict.model()) {
            line.push_str(&format!("; none in {n} random models"));
        }
        out!("{line}");
        if let Some(m) = verdict.model() {
            out!("{}", m.to_json_pretty());
        }
    }
    Ok(success)
}

fn cmd_prove(path: &Path, json: bool) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let script = parse_script(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let report = check_proof(&script);
    if json {
        out!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        out!("{report}");
    }
    Ok(report.accepted)
}

fn cmd_suite(name: SuiteName, max_size: usize, trials: usize, seed: Option<u64>, b: &BoundArgs, json: bool) -> Outcome {
    let (text, value, passed) = match name {
        SuiteName::ValidityTable => {
            let r = validity_table_suite(&b.bounds(), trials, seed.unwrap_or(VALIDITY_SEED), b.options())?;
            (r.to_text(), serde_json::to_value(&r)?, r.passed)
        }
        SuiteName::Prop24 => {
            let r = prop24_suite(max_size)?;
            (r.to_text(), serde_json::to_value(&r)?, r.passed)
        }
        SuiteName::Corpus => {
            let r = corpus_suite(&b.bounds(), b.options())?;
            (r.to_text(), serde_json::to_value(&r)?, r.passed)
        }
        SuiteName::Soundness => {
            let r = soundness_suite(trials, seed.unwrap_or(7))?;
            (r.to_text(), serde_json::to_value(&r)?, r.passed)
        }
    };
    if json {
        out!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        out!("{}", text.trim_end());
    }
    Ok(passed)
}
