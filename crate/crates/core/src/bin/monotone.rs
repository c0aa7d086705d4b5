use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use monotone_core::document::{emit_operator, format_point, format_scalar, parse_operator, parse_point};
use monotone_core::generate::{
    gen_linear_relation, gen_maximal_monotone, gen_mixed, gen_monotone_linear, gen_psd,
    gen_self_cancelling, gen_skew, gen_vertical,
};
use monotone_core::suite::{run_suite, SuiteConfig};
use monotone_core::{
    decide_non_enlargeable, fitz_finite, fitz_linear, in_enlargement_def, in_enlargement_fitz,
    is_self_cancelling, is_skew, ArithMode, Error, Operator, Rational, Scalar, Subspace, Verdict,
};

#[derive(Parser)]
#[command(name = "monotone", version, about = "Monotone linear relations, Fitzpatrick functions and ε-enlargements")]
struct Cli {
    /// Arithmetic mode. Defaults to $MONOTONE_ARITH, else exact (float for `suite`).
    #[arg(long, global = true)]
    mode: Option<ArithMode>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the monotone, maximal, self-cancelling and skew flags.
    Check { file: PathBuf },
    /// Print the ⊢-complement of the (linear part of the) operator.
    Vdash { file: PathBuf },
    /// Evaluate the Fitzpatrick function at a point `x1,..,xn,x*1,..,x*n`.
    Fitz {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Test membership of a point in the ε-enlargement by both routes.
    Enlarge {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        eps: String,
    },
    /// Decide non-enlargeability of a maximal monotone affine operator.
    Decide { file: PathBuf },
    /// Run the property suite and print a JSON report.
    Suite {
        #[arg(long, default_value_t = monotone_core::suite::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run in exact rational arithmetic.
        #[arg(long)]
        exact: bool,
    },
    /// Print a random operator document.
    Generate {
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dimension for `self-cancelling`.
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Skew,
    Psd,
    Mixed,
    Vertical,
    SelfCancelling,
    MaximalMonotone,
    Monotone,
    Linear,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let default = match cli.command {
        Command::Suite { exact: true, .. } => ArithMode::Exact,
        Command::Suite { .. } => ArithMode::from_env_or(ArithMode::Float)?,
        _ => ArithMode::from_env_or(ArithMode::Exact)?,
    };
    let mode = match (&cli.command, cli.mode) {
        (Command::Suite { exact: true, .. }, _) => ArithMode::Exact,
        (_, Some(m)) => m,
        _ => default,
    };
    match mode {
        ArithMode::Exact => dispatch::<Rational>(cli.command),
        ArithMode::Float => dispatch::<f64>(cli.command),
    }
}

fn load<S: Scalar>(path: &Path) -> Result<Operator<S>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let parsed = parse_operator::<S>(&text)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.operator)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn membership(b: bool) -> &'static str {
    if b {
        "member"
    } else {
        "non-member"
    }
}

fn dispatch<S: Scalar>(command: Command) -> Result<u8, Error> {
    match command {
        Command::Check { file } => {
            let op = load::<S>(&file)?;
            println!("monotone: {}", yes_no(op.is_monotone()));
            match op.linear_part() {
                Some(l) => {
                    println!("maximal_monotone: {}", yes_no(op.is_maximal_monotone_linear()?));
                    println!("self_cancelling: {}", yes_no(is_self_cancelling(l)));
                    println!("skew: {}", yes_no(is_skew(l)));
                }
                None => {
                    println!("maximal_monotone: undecidable (finite samples)");
                    println!("self_cancelling: undecidable (finite samples)");
                    println!("skew: undecidable (finite samples)");
                }
            }
            Ok(0)
        }
        Command::Vdash { file } => {
            let op = load::<S>(&file)?;
            let b = match &op {
                Operator::Finite(f) => Subspace::span_points(f.points(), f.n())?,
                _ => op.linear_part().expect("linear or affine").clone(),
            };
            print!("{}", emit_operator(&Operator::Linear(b.vdash())));
            Ok(0)
        }
        Command::Fitz { file, point } => {
            let op = load::<S>(&file)?;
            let p = parse_point::<S>(&point, op.n())?;
            match &op {
                Operator::Finite(f) => println!("{}", format_scalar(&fitz_finite(f, &p)?)),
                _ => match fitz_linear(&op, &p)? {
                    monotone_core::ExtReal::Finite(v) => println!("{}", format_scalar(&v)),
                    other => println!("{other}"),
                },
            }
            Ok(0)
        }
        Command::Enlarge { file, point, eps } => {
            let op = load::<S>(&file)?;
            let p = parse_point::<S>(&point, op.n())?;
            let eps = monotone_core::scalar::parse_rational(&eps)
                .map(|r| S::from_rational(&r))
                .ok_or_else(|| Error::Parse(format!("eps: malformed number '{eps}'")))?;
            let def = in_enlargement_def(&op, &p, &eps)?;
            println!("definition: {}", membership(def));
            if matches!(op, Operator::Finite(_)) {
                println!("fitzpatrick: unavailable (finite samples)");
                println!("{} (definition route)", membership(def));
                return Ok(0);
            }
            let fitz = in_enlargement_fitz(&op, &p, &eps)?;
            println!("fitzpatrick: {}", membership(fitz));
            if def == fitz {
                println!("{} (both routes)", membership(def));
                Ok(0)
            } else {
                println!("routes disagree");
                Ok(1)
            }
        }
        Command::Decide { file } => {
            let op = load::<S>(&file)?;
            match decide_non_enlargeable(&op)? {
                Verdict::NonEnlargeable { predual, base_point } => {
                    println!("verdict: non-enlargeable");
                    println!("base_point: {}", format_point(&base_point));
                    println!("predual:");
                    print!("{}", emit_operator(&Operator::Linear(predual)));
                }
                Verdict::Enlargeable { witness, witness_eps, proof } => {
                    println!("verdict: enlargeable");
                    println!("witness: {}", format_point(&witness));
                    println!("eps: {}", format_scalar(&witness_eps));
                    println!("fitzpatrick: {}", format_scalar(&proof.fitzpatrick));
                    println!("duality: {}", format_scalar(&proof.duality));
                }
            }
            Ok(0)
        }
        Command::Suite { trials, seed, .. } => {
            let report = run_suite(&SuiteConfig { trials, seed, mode: S::MODE });
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Generate { family, n, seed, k } => {
            let l: Subspace<S> = match family {
                Family::Skew => gen_skew(n, seed)?,
                Family::Psd => Subspace::graph_i64(&gen_psd(n, seed)?)?,
                Family::Mixed => Subspace::graph_i64(&gen_mixed(n, seed)?)?,
                Family::Vertical => gen_vertical(n)?,
                Family::SelfCancelling => gen_self_cancelling(n, k.unwrap_or(n), seed)?,
                Family::MaximalMonotone => gen_maximal_monotone(n, seed)?,
                Family::Monotone => gen_monotone_linear(n, seed)?,
                Family::Linear => gen_linear_relation(n, seed)?,
            };
            print!("{}", emit_operator(&Operator::Linear(l)));
            Ok(0)
        }
    }
}
