//! Command-line interface.
//!
//! Exit codes: 0 full success, 1 usage error, 2 validation failure,
//! 3 precision or budget failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use crate::linforms::{self, StageId};
use crate::realcore::PrecisionPolicy;
use crate::reduction::{self, ConvergentTable};
use crate::sequences::RecurrencePair;
use crate::Equation;

use super::{
    search, verify_theorem, PairConfig, PipelineError, VerifyOptions, REPLAY_CONVERGENT_INDEX,
};

#[derive(Parser, Debug)]
#[command(
    name = "fibpell",
    version,
    about = "Certified solver for F_k = P_m·P_n and P_k = F_m·F_n",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full bound-reduce-search verification and emit a certificate.
    Verify(VerifyArgs),
    /// Exact enumeration of solutions below explicit budgets.
    Search(SearchArgs),
    /// Stage 1 only: the linear-form coefficients and absolute bounds.
    Bounds(BoundsArgs),
    /// Expert access to one reduction campaign.
    Reduce(ReduceArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Equation to verify: fpp, ffp, or both.
    #[arg(long)]
    equation: String,
    /// Write the certificate here (stdout if omitted).
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Working precision in decimal digits.
    #[arg(long, default_value_t = 256)]
    precision: u32,
    #[arg(long, default_value_t = 400)]
    k_max: usize,
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    /// Custom pair config; only the built-in pair passes the full pipeline.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Equation tag (fpp or ffp); decides which built-in pair is searched
    /// when no config is given.
    #[arg(long)]
    equation: String,
    #[arg(long)]
    k_max: usize,
    #[arg(long)]
    n_max: usize,
    /// Custom pair config (U_k = V_m·V_n with the configured sequences).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Emit JSON instead of a text table.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    equation: String,
    #[arg(long, default_value_t = 256)]
    precision: u32,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    /// Which pair's τ to expand: fpp or ffp (both give log α/log γ).
    #[arg(long)]
    tau_pair: String,
    /// Campaign stage: lambda1, lambda2, lambda3 or lambda4.
    #[arg(long)]
    stage: String,
    /// Use the mirrored (negative-Γ) instance.
    #[arg(long)]
    mirrored: bool,
    /// Family member index (required for lambda2/lambda4).
    #[arg(long)]
    m: Option<usize>,
    /// Select the first admissible convergent instead of the replay index.
    #[arg(long)]
    first_admissible: bool,
    #[arg(long, default_value_t = 256)]
    precision: u32,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are successes; malformed flags exit 1.
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn parse_equation(s: &str) -> Result<Equation, PipelineError> {
    s.parse::<Equation>().map_err(PipelineError::Validation)
}

fn dispatch(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Search(args) => cmd_search(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Reduce(args) => cmd_reduce(args),
    }
}

fn builtin_config_for(eq: Equation) -> PairConfig {
    use super::RecurrenceConfig;
    let fib = RecurrenceConfig { name: "fibonacci".into(), a: 1, b: 1, u0: 0, u1: 1 };
    let pell = RecurrenceConfig { name: "pell".into(), a: 2, b: 1, u0: 0, u1: 1 };
    match eq {
        Equation::Fpp => PairConfig { u: fib, v: pell },
        Equation::Ffp => PairConfig { u: pell, v: fib },
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), PipelineError> {
    let equations: Vec<Equation> = match args.equation.as_str() {
        "both" => Equation::BOTH.to_vec(),
        other => vec![parse_equation(other)?],
    };
    let options = VerifyOptions {
        digits: args.precision,
        k_max: args.k_max,
        n_max: args.n_max,
        ..VerifyOptions::default()
    };
    for &eq in &equations {
        if let Some(path) = &args.config {
            // The certified chain is specialized to the built-in pair;
            // custom pairs are validated, then rejected before any stage.
            let cfg = PairConfig::load(path)?;
            cfg.build()?;
            let builtin = builtin_config_for(eq);
            let same = serde_json::to_string(&cfg).expect("serializable")
                == serde_json::to_string(&builtin).expect("serializable");
            if !same {
                return Err(PipelineError::Validation(
                    "the verification pipeline is specialized to the built-in \
                     Fibonacci/Pell pair; use `search` for custom pairs"
                        .to_string(),
                ));
            }
        }
        let cert = verify_theorem(eq, &options)?;
        let json = cert.to_json();
        match &args.certificate {
            Some(path) => {
                let target = if equations.len() == 2 {
                    with_equation_suffix(path, eq)
                } else {
                    path.clone()
                };
                let mut f = std::fs::File::create(&target)?;
                f.write_all(json.as_bytes())?;
                f.write_all(b"\n")?;
                eprintln!("certificate written to {}", target.display());
            }
            None => println!("{json}"),
        }
        eprintln!(
            "{eq}: verified; solutions k in {:?}",
            cert.stage3.k_set
        );
    }
    Ok(())
}

fn with_equation_suffix(path: &std::path::Path, eq: Equation) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("certificate");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("json");
    path.with_file_name(format!("{stem}-{eq}.{ext}"))
}

fn cmd_search(args: SearchArgs) -> Result<(), PipelineError> {
    let equation = parse_equation(&args.equation)?;
    let pair = match &args.config {
        Some(path) => PairConfig::load(path)?.build()?,
        None => RecurrencePair::for_equation(equation),
    };
    let solutions = search(&pair, equation, args.k_max, args.n_max);
    if args.json {
        let rows: Vec<serde_json::Value> = solutions
            .iter()
            .map(|t| {
                serde_json::json!({
                    "k": t.k, "m": t.m, "n": t.n, "value": t.value.to_string()
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows).expect("serializable"));
    } else {
        println!("{} solutions with k <= {}, m <= n <= {}:", solutions.len(), args.k_max, args.n_max);
        for t in &solutions {
            println!("  k={:<4} m={:<4} n={:<4} value={}", t.k, t.m, t.n, t.value);
        }
    }
    Ok(())
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), PipelineError> {
    let equation = parse_equation(&args.equation)?;
    let report = linforms::stage1_report(equation, args.precision)?;
    println!("equation: {equation}");
    println!(
        "first form {}: coefficient {} (radius {})",
        report.first_stage.id,
        report.first_coefficient.approx_decimal(10),
        report.first_coefficient.radius_decimal()
    );
    println!(
        "m-bound: {} with C = {}",
        report.m_bound.label,
        report.m_bound.coefficient.approx_decimal(10)
    );
    println!(
        "second form {}: coefficient {}",
        report.second_stage.id,
        report.second_coefficient.approx_decimal(10)
    );
    println!("absolute n-bound: {}", report.absolute_n_bound());
    Ok(())
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), PipelineError> {
    let equation = parse_equation(&args.tau_pair)?;
    let stage_id = match args.stage.as_str() {
        "lambda1" => StageId::Lambda1,
        "lambda2" => StageId::Lambda2,
        "lambda3" => StageId::Lambda3,
        "lambda4" => StageId::Lambda4,
        other => {
            return Err(PipelineError::Validation(format!(
                "unknown stage `{other}` (expected lambda1..lambda4)"
            )))
        }
    };
    let expected_eq = match stage_id {
        StageId::Lambda1 | StageId::Lambda2 => Equation::Fpp,
        _ => Equation::Ffp,
    };
    if equation != expected_eq {
        return Err(PipelineError::Validation(format!(
            "stage {stage_id} belongs to equation {expected_eq}"
        )));
    }
    let pair = RecurrencePair::for_equation(equation);
    let policy = PrecisionPolicy { start_digits: args.precision, ..PrecisionPolicy::default() };
    let m_bound = linforms::stage1_m_bound(equation, args.precision)?;
    let needs_member = matches!(stage_id, StageId::Lambda2 | StageId::Lambda4);
    let stage = if needs_member {
        linforms::build_stage(stage_id, &pair, Some(&m_bound), args.precision)?
    } else {
        linforms::build_stage(stage_id, &pair, None, args.precision)?
    };
    let member = if needs_member {
        Some(args.m.ok_or_else(|| {
            PipelineError::Validation(format!("stage {stage_id} needs --m <member index>"))
        })?)
    } else {
        None
    };
    let mut inst =
        reduction::gamma_to_lemma_form(&stage, &pair, args.mirrored, member, args.precision)?;
    if !args.first_admissible {
        inst.pinned_index = Some(REPLAY_CONVERGENT_INDEX);
    }
    let min_q: BigInt = if args.first_admissible {
        BigInt::from(6) * reduction::campaign_big_m()
    } else {
        super::replay_min_q()
    };
    let mut table = ConvergentTable::expand(reduction::campaign_tau(), &min_q, &policy)?;
    let outcome = reduction::dp_reduce(&inst, &mut table, &policy)?;
    println!("instance: {}", outcome.label);
    println!("A = {} (derived bound {})", outcome.a_used.approx_decimal(6), outcome.a_derived.approx_decimal(6));
    println!("convergent index: {}", outcome.convergent_index);
    println!("q = {}", outcome.q);
    println!("epsilon = {} (radius {})", outcome.epsilon.approx_decimal(10), outcome.epsilon.radius_decimal());
    println!("exponent bound: {}", outcome.exponent_bound);
    println!("effective bound: {}", outcome.effective_bound);
    Ok(())
}
