//! Command-line front end: bound verification, parameter sweeps, the
//! master-equation order check and fixed-COP time allocation.
//!
//! Exit codes: 0 success, 1 bound violation, 2 usage, 3 I/O, 4 numerical
//! failure.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tricycle::error::Error;
use tricycle::oracle;
use tricycle::run::{
    run_optimize, run_sweep, write_optimize_csv, write_optimize_jsonl, write_sweep_csv,
    write_sweep_jsonl, OutputFormat, RangeSpec, RowStatus, RunConfig,
};

const EXIT_BOUND_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

/// Margin below which a feasible row counts as violating the bound.
const BOUND_TOL: f64 = -1e-10;

#[derive(Parser)]
#[command(
    name = "tricycle",
    about = "Finite-time three-reservoir refrigeration cycles in the slow-driving regime",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// JSON configuration file; flags below override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<String>,
    /// Comma-separated spectral exponents, e.g. 0.8,1.2.
    #[arg(long, value_name = "LIST")]
    alpha: Option<String>,
    /// Cold-branch duration range, start:stop:step.
    #[arg(long = "tau-c", value_name = "RANGE")]
    tau_c: Option<String>,
    /// Auxiliary-branch duration range, start:stop:step.
    #[arg(long = "tau-p", value_name = "RANGE")]
    tau_p: Option<String>,
    /// COP target for fixed-COP optimization.
    #[arg(long = "cop-target", value_name = "X")]
    cop_target: Option<f64>,
    /// Quadrature nodes (odd).
    #[arg(long, value_name = "N")]
    nodes: Option<usize>,
    /// Output path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<CliFormat>,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum CliFormat {
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the grid and check LH − RH ≥ 0 at every feasible point.
    VerifyBound(CommonOpts),
    /// Emit the full sweep dataset.
    Sweep(CommonOpts),
    /// Verify the 1/τ order of the slow-driving expansion against the
    /// integrated master equation.
    OracleCheck {
        #[command(flatten)]
        common: CommonOpts,
        /// Comma-separated duration ladder (at least 3 entries).
        #[arg(long, value_name = "LIST")]
        ladder: Option<String>,
    },
    /// Fixed-COP time allocation over the τ_c range.
    Optimize(CommonOpts),
}

fn parse_list(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("cannot parse '{t}' as a number")))
        })
        .collect()
}

fn load_config(common: &CommonOpts) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Usage(format!("cannot read config {path}: {e}")))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(alpha) = &common.alpha {
        cfg.alpha = parse_list(alpha)?;
    }
    if let Some(r) = &common.tau_c {
        cfg.tau_c = RangeSpec::parse(r)?;
    }
    if let Some(r) = &common.tau_p {
        cfg.tau_p = RangeSpec::parse(r)?;
    }
    if let Some(target) = common.cop_target {
        cfg.cop_target = Some(target);
    }
    if let Some(nodes) = common.nodes {
        cfg.nodes = nodes;
    }
    if let Some(out) = &common.out {
        cfg.out = Some(out.clone());
    }
    if let Some(format) = common.format {
        cfg.format = match format {
            CliFormat::Csv => OutputFormat::Csv,
            CliFormat::Jsonl => OutputFormat::Jsonl,
        };
    }
    Ok(cfg)
}

fn init_thread_pool() -> Result<(), Error> {
    let Ok(raw) = std::env::var("TRICYCLE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.parse().map_err(|_| {
        Error::Usage(format!(
            "TRICYCLE_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    if n == 0 {
        return Err(Error::Usage("TRICYCLE_THREADS must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Usage(format!("cannot size thread pool: {e}")))
}

fn emit<F>(cfg: &RunConfig, write: F) -> Result<(), u8>
where
    F: Fn(&mut dyn Write) -> std::io::Result<()>,
{
    let io_fail = |e: std::io::Error| {
        eprintln!("tricycle: output failed: {e}");
        EXIT_IO
    };
    match &cfg.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(io_fail)?;
            let mut w = std::io::BufWriter::new(file);
            write(&mut w).map_err(io_fail)?;
            w.flush().map_err(io_fail)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            write(&mut w).map_err(io_fail)?;
        }
    }
    Ok(())
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Domain { .. } | Error::InvalidConfig { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn cmd_sweep(common: &CommonOpts, check_bound: bool) -> u8 {
    let cfg = match load_config(common) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("tricycle: {e}");
            return EXIT_USAGE;
        }
    };
    let rows = match run_sweep(&cfg) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("tricycle: {e}");
            return classify(&e);
        }
    };
    let emitted = emit(&cfg, |w| match cfg.format {
        OutputFormat::Csv => write_sweep_csv(&rows, w),
        OutputFormat::Jsonl => write_sweep_jsonl(&rows, w),
    });
    if let Err(code) = emitted {
        return code;
    }
    if check_bound {
        let violations: Vec<_> = rows
            .iter()
            .filter(|r| r.bound_margin().is_some_and(|m| m < BOUND_TOL))
            .collect();
        if !violations.is_empty() {
            for v in &violations {
                eprintln!(
                    "tricycle: bound violated at tau_c={}, tau_p={}, alpha={}: lh - rh = {:e}",
                    v.tau_c,
                    v.tau_p,
                    v.alpha,
                    v.bound_margin().unwrap()
                );
            }
            return EXIT_BOUND_VIOLATION;
        }
    }
    0
}

fn cmd_oracle_check(common: &CommonOpts, ladder: &Option<String>) -> u8 {
    let cfg = match load_config(common) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("tricycle: {e}");
            return EXIT_USAGE;
        }
    };
    let ladder = match ladder {
        Some(text) => match parse_list(text) {
            Ok(l) => l,
            Err(e) => {
                eprintln!("tricycle: {e}");
                return EXIT_USAGE;
            }
        },
        None => cfg.oracle.tau_ladder.clone(),
    };
    if ladder.len() < 3 {
        eprintln!(
            "tricycle: the duration ladder needs at least 3 entries, got {}",
            ladder.len()
        );
        return EXIT_USAGE;
    }
    let alpha = *cfg.alpha.first().unwrap_or(&0.8);
    let base = match cfg.cycle_config(alpha) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("tricycle: {e}");
            return EXIT_USAGE;
        }
    };
    let spec = match cfg.quadrature() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("tricycle: {e}");
            return EXIT_USAGE;
        }
    };
    let report =
        match oracle::perturbation_order_check_with_steps(&base, &ladder, spec, cfg.oracle.steps) {
            Ok(r) => r,
            Err(e @ Error::Usage(_)) => {
                eprintln!("tricycle: {e}");
                return EXIT_USAGE;
            }
            Err(e) => {
                eprintln!("tricycle: integrator failure: {e}");
                return EXIT_NUMERICAL;
            }
        };

    println!("# slow-driving order check, alpha = {alpha}");
    println!("tau,state_error,heat_error");
    for e in &report.entries {
        println!("{},{:e},{:e}", e.tau, e.state_error, e.heat_error);
    }
    match (report.state_slope, report.heat_slope) {
        (Some(se), Some(he)) => {
            let ok = (-2.5..=-1.5).contains(&se) && (-2.5..=-1.5).contains(&he);
            println!("state_slope,{se:.6}");
            println!("heat_slope,{he:.6}");
            println!("result,{}", if ok { "PASS" } else { "FAIL" });
            if !ok {
                return EXIT_NUMERICAL;
            }
        }
        _ => {
            println!("state_slope,exact");
            println!("heat_slope,exact");
            println!("result,PASS");
        }
    }
    0
}

fn cmd_optimize(common: &CommonOpts) -> u8 {
    let cfg = match load_config(common) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("tricycle: {e}");
            return EXIT_USAGE;
        }
    };
    let rows = match run_optimize(&cfg) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("tricycle: {e}");
            return classify(&e);
        }
    };
    match emit(&cfg, |w| match cfg.format {
        OutputFormat::Csv => write_optimize_csv(&rows, w),
        OutputFormat::Jsonl => write_optimize_jsonl(&rows, w),
    }) {
        Err(code) => code,
        Ok(()) => {
            if rows.iter().all(|r| r.status == RowStatus::Infeasible) {
                eprintln!("tricycle: every grid point was infeasible for the requested COP");
            }
            0
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_thread_pool() {
        eprintln!("tricycle: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let code = match &cli.command {
        Command::VerifyBound(common) => cmd_sweep(common, true),
        Command::Sweep(common) => cmd_sweep(common, false),
        Command::OracleCheck { common, ladder } => cmd_oracle_check(common, ladder),
        Command::Optimize(common) => cmd_optimize(common),
    };
    ExitCode::from(code)
}
