//! `hilbert`: transforms, Calderón–Zygmund decompositions and bound checks
//! for signals stored as `x,value` CSV files.
//!
//! Exit status is 0 on success, 1 when a check fails and 2 on bad usage or
//! unreadable input.

mod output;

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hilbert_core::analysis::{full_report, Check, ReportConfig};
use hilbert_core::czd::cz_decompose;
use hilbert_core::grid::distribution_function;
use hilbert_core::io::{read_signal_csv, write_columns};
use hilbert_core::transform::{
    hilbert_closed_form, hilbert_pv, hilbert_spectral, hilbert_step, ClosedFormKind, PVConfig, SpectralConfig,
};
use hilbert_core::{BoundReport, Signal};
use serde::Serialize;

use output::{write_atomic, write_to};

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(name = "hilbert", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert transform of a signal
    Transform(TransformArgs),
    /// Calderón–Zygmund decomposition of a nonnegative signal
    Czd(CzdArgs),
    /// Run the verification battery and report every bound
    Verify(VerifyArgs),
    /// Distribution function α ↦ |{|f| ≥ α}|
    Dist(DistArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Pv,
    Spectral,
    Step,
    ClosedForm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Indicator,
    Cosine,
    Sine,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long, value_enum, default_value = "spectral")]
    method: Method,
    #[arg(long)]
    input: PathBuf,
    /// Output CSV; standard output if omitted
    #[arg(long)]
    output: Option<PathBuf>,
    /// Largest ε of the PV schedule
    #[arg(long, default_value_t = 1.0)]
    epsilon_start: f64,
    /// Number of ε values (halving each time); by default, down to the spacing
    #[arg(long)]
    epsilon_steps: Option<usize>,
    /// Outer cutoff R of the PV integral; by default wide enough to be exact
    #[arg(long)]
    cutoff: Option<f64>,
    /// PV convergence tolerance
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Zero-padding factor of the spectral method
    #[arg(long, default_value_t = 4)]
    padding: usize,
    /// Closed-form reference to evaluate on the input grid
    #[arg(long, value_enum, default_value = "indicator")]
    kind: Kind,
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
}

#[derive(Args)]
struct CzdArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    input: PathBuf,
    /// Directory for good.csv, bad_<k>.csv and intervals.json
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated check names, or `all`
    #[arg(long, default_value = "all")]
    checks: String,
    /// Write the reports as a JSON array
    #[arg(long)]
    json: Option<PathBuf>,
    /// Zero-padding factor of the spectral method
    #[arg(long, default_value_t = 16)]
    padding: usize,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Number of thresholds, uniformly spaced on (0, ‖f‖∞]
    #[arg(long, default_value_t = 64)]
    points: usize,
    /// Explicit comma-separated thresholds instead of a uniform sweep
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
    /// Distribution of the spectral transform of the signal instead
    #[arg(long)]
    hilbert: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means a check failed.
fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Transform(args) => transform(args),
        Command::Czd(args) => czd(args),
        Command::Verify(args) => verify(args),
        Command::Dist(args) => dist(args),
    }
}

fn read_input(path: &Path) -> CliResult<Signal> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_signal_csv(BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn pv_config(args: &TransformArgs, f: &Signal) -> CliResult<PVConfig> {
    let grid = f.grid();
    let cutoff = args.cutoff.unwrap_or_else(|| PVConfig::covering_cutoff(grid, grid));
    let config = match args.epsilon_steps {
        Some(steps) => {
            let eps = (0..steps).map(|k| args.epsilon_start * 0.5f64.powi(k as i32)).collect();
            PVConfig::new(eps, cutoff, args.tolerance)?
        }
        None => PVConfig::dyadic(args.epsilon_start, grid.spacing(), cutoff, args.tolerance)?,
    };
    Ok(config)
}

fn transform(args: TransformArgs) -> CliResult<bool> {
    let f = read_input(&args.input)?;
    let grid = *f.grid();
    let emit = |w: &mut dyn Write| -> CliResult<()> {
        match args.method {
            Method::Pv => {
                let r = hilbert_pv(&f, &grid, &pv_config(&args, &f)?)?;
                let converged: Vec<f64> = r.converged.iter().map(|&c| c as u8 as f64).collect();
                write_columns(
                    w,
                    &grid,
                    &[
                        ("value", f.values()),
                        ("h_value", r.transform.values()),
                        ("converged", &converged),
                        ("est_error", &r.estimated_error),
                    ],
                )?;
            }
            Method::Spectral => {
                let h = hilbert_spectral(&f, &SpectralConfig::new(args.padding)?)?;
                write_columns(w, &grid, &[("value", f.values()), ("h_value", h.values())])?;
            }
            Method::Step => {
                let h = hilbert_step(&f)?;
                write_columns(w, &grid, &[("value", f.values()), ("h_value", h.values())])?;
            }
            Method::ClosedForm => {
                let kind = match args.kind {
                    Kind::Indicator => ClosedFormKind::Indicator { a: args.a, b: args.b },
                    Kind::Cosine => ClosedFormKind::Cosine { omega: args.omega },
                    Kind::Sine => ClosedFormKind::Sine { omega: args.omega },
                };
                let cf = hilbert_closed_form(kind, &grid)?;
                let values: Vec<f64> = cf
                    .values
                    .values()
                    .iter()
                    .zip(&cf.singular)
                    .map(|(&v, &s)| if s { f64::NAN } else { v })
                    .collect();
                let singular: Vec<f64> = cf.singular.iter().map(|&s| s as u8 as f64).collect();
                write_columns(
                    w,
                    &grid,
                    &[("value", f.values()), ("h_value", &values), ("singular", &singular)],
                )?;
            }
        }
        Ok(())
    };
    write_to(args.output.as_deref(), emit)?;
    Ok(true)
}

#[derive(Serialize)]
struct IntervalRecord {
    left: f64,
    length: f64,
    generation: u32,
    average: f64,
}

fn czd(args: CzdArgs) -> CliResult<bool> {
    let f = read_input(&args.input)?;
    let d = cz_decompose(&f, args.lambda)?;
    let records: Vec<IntervalRecord> = d
        .selected()
        .iter()
        .map(|i| IntervalRecord {
            left: i.left,
            length: i.length,
            generation: i.generation,
            average: i.average,
        })
        .collect();
    let json = serde_json::to_string_pretty(&records)?;
    match &args.emit {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            write_atomic(&dir.join("intervals.json"), |w| Ok(writeln!(w, "{json}")?))?;
            let grid = *d.grid();
            write_atomic(&dir.join("good.csv"), |w| {
                Ok(write_columns(w, &grid, &[("value", d.good().values())])?)
            })?;
            for (k, b) in d.bad_parts().iter().enumerate() {
                write_atomic(&dir.join(format!("bad_{}.csv", k + 1)), |w| {
                    Ok(write_columns(w, &grid, &[("value", b.values())])?)
                })?;
            }
        }
        None => println!("{json}"),
    }
    let reports = d.verify_invariants(&f)?;
    report_failures(&reports);
    eprintln!(
        "{} interval(s), |Ω| = {}, λ = {}",
        d.selected().len(),
        d.omega_length(),
        args.lambda
    );
    Ok(reports.iter().all(|r| r.pass))
}

fn parse_checks(list: &str) -> CliResult<Vec<Check>> {
    if list.trim() == "all" {
        return Ok(Check::ALL.to_vec());
    }
    list.split(',')
        .map(|s| s.trim().parse::<Check>().map_err(Into::into))
        .collect()
}

fn verify(args: VerifyArgs) -> CliResult<bool> {
    let checks = parse_checks(&args.checks)?;
    if !(args.tolerance.is_finite() && args.tolerance > 0.0) {
        return Err(format!("tolerance must be positive, got {}", args.tolerance).into());
    }
    let f = read_input(&args.input)?;
    let config = ReportConfig {
        checks,
        spectral: SpectralConfig::new(args.padding)?,
        tolerance: args.tolerance,
        ..ReportConfig::default()
    };
    let report = full_report(&f, &config)?;
    let mut out = io::stdout().lock();
    for r in &report.checks {
        writeln!(
            out,
            "{} {:<24} lhs={:.6e} rhs={:.6e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.lhs,
            r.rhs
        )?;
    }
    if let Some(path) = &args.json {
        let json = serde_json::to_string_pretty(&report)?;
        write_atomic(path, |w| Ok(writeln!(w, "{json}")?))?;
    }
    Ok(report.passed())
}

fn dist(args: DistArgs) -> CliResult<bool> {
    let f = read_input(&args.input)?;
    let target = if args.hilbert {
        hilbert_spectral(&f, &SpectralConfig::default())?
    } else {
        f
    };
    let thresholds = match args.thresholds {
        Some(t) => t,
        None => {
            if args.points == 0 {
                return Err("--points must be positive".into());
            }
            let top = target.sup_norm();
            if top == 0.0 {
                return Err("signal is identically zero; give --thresholds explicitly".into());
            }
            (1..=args.points).map(|i| top * i as f64 / args.points as f64).collect()
        }
    };
    let curve = distribution_function(&target, &thresholds)?;
    write_to(args.output.as_deref(), |w| {
        writeln!(w, "alpha,measure")?;
        for (a, m) in curve.thresholds.iter().zip(&curve.measures) {
            writeln!(w, "{a},{m}")?;
        }
        Ok(())
    })?;
    Ok(true)
}

fn report_failures(reports: &[BoundReport]) {
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!("FAIL {}: lhs {} > rhs {}", r.name, r.lhs, r.rhs);
    }
}
