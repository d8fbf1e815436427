//! `promiscuity`: single-point reports, parameter sweeps, qudit reports and
//! the verification suite.

mod config;
mod render;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use promiscuity::contangle::{ModePair, Probe};
use promiscuity::four_mode::{self, EntanglementReport};
use promiscuity::qudit;
use promiscuity::verify::{self, Fault, Grid, VerifyOptions};
use promiscuity::SqueezingParams;

use config::Config;
use render::{fmt_num, QuditReportView};

const THREADS_ENV: &str = "PROMISCUITY_THREADS";

const SWEEP_HEADER: [&str; 11] = [
    "a",
    "s",
    "tau_12",
    "tau_23",
    "tau_14",
    "tau_pairblock",
    "tau_1_rest",
    "tau_res",
    "tau_tri_bound",
    "monogamy_ok",
    "strong_monogamy_ok",
];

/// Largest qudit dimension accepted by `qudit report`.
const MAX_QUDIT_D: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "promiscuity",
    version,
    about = "Entanglement sharing in four-mode Gaussian states and GHZ/W qudits"
)]
struct Cli {
    /// key = value file overriding grid defaults (a_min, a_max, s_min, s_max, steps, grid_density, qudit_max_d)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Four-mode Gaussian state built from three two-mode squeezers
    Fourmode {
        #[command(subcommand)]
        command: FourmodeCommand,
    },
    /// GHZ⊗W qudit family
    Qudit {
        #[command(subcommand)]
        command: QuditCommand,
    },
    /// Run every property suite; exit status 1 on any failure
    Verify {
        /// Grid points per axis
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=1000))]
        grid_density: Option<u64>,
        /// Print the grid and every failing suite's first failure
        #[arg(long)]
        verbose: bool,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Debug, Subcommand)]
enum FourmodeCommand {
    /// Every entanglement quantity at one (a, s)
    Report {
        /// Intrapair squeezing (pairs 1,2 and 3,4)
        #[arg(long, allow_negative_numbers = true, value_parser = nonnegative)]
        a: f64,
        /// Interpair squeezing (pair 2,3)
        #[arg(long, allow_negative_numbers = true, value_parser = nonnegative)]
        s: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// CSV of contangles over a rectangular (a, s) grid, row-major in a then s
    Sweep {
        /// MIN:MAX for a [default: 0:2.5]
        #[arg(long, allow_negative_numbers = true, value_parser = range)]
        a_range: Option<(f64, f64)>,
        /// MIN:MAX for s [default: 0:2.5]
        #[arg(long, allow_negative_numbers = true, value_parser = range)]
        s_range: Option<(f64, f64)>,
        /// Points per axis [default: 26]
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=10_000))]
        steps: Option<u64>,
        /// Output file; standard output when absent
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum QuditCommand {
    /// Tangles, non-Gaussianity and squashed-entanglement bounds of |Ψ_d⟩
    Report {
        /// Local dimension d = 2N with N even
        #[arg(long, value_parser = qudit_dimension)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    WrongLogBase,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::WrongLogBase => Fault::WrongLogBase,
        }
    }
}

fn nonnegative(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|_| format!("{s:?} is not a decimal number"))?;
    if !v.is_finite() || v < 0.0 {
        return Err("must be finite and nonnegative".into());
    }
    Ok(v)
}

fn range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("{s:?} is not of the form MIN:MAX"))?;
    let (lo, hi) = (nonnegative(lo.trim())?, nonnegative(hi.trim())?);
    if hi < lo {
        return Err(format!("range {s:?} is reversed"));
    }
    Ok((lo, hi))
}

fn qudit_dimension(s: &str) -> Result<usize, String> {
    let d: usize = s
        .parse()
        .map_err(|_| format!("{s:?} is not a positive integer"))?;
    qudit::check_qudit_dimension(d).map_err(|e| e.to_string())?;
    if d > MAX_QUDIT_D {
        return Err(format!(
            "d = {d} exceeds the supported maximum {MAX_QUDIT_D}"
        ));
    }
    Ok(d)
}

/// Bad input discovered after parsing: usage message, exit status 2.
fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

enum Outcome {
    Ok,
    Failed(String),
}

fn configure_threads() {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return;
    };
    let n = match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => n,
        _ => usage_error(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        )),
    };
    // Only fails if a global pool already exists, which cannot happen here.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
}

fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn params(a: f64, s: f64) -> SqueezingParams {
    SqueezingParams::new(a, s).unwrap_or_else(|e| usage_error(e))
}

fn fourmode_report(a: f64, s: f64, format: Format) -> Result<Outcome> {
    let report = four_mode::full_report(params(a, s))?;
    let rounded = render::round_report(&report);
    emit(&match format {
        Format::Json => render::to_json(&rounded)?,
        Format::Csv => render::to_csv_record(&rounded)?,
    })?;
    Ok(if report.consistent {
        Outcome::Ok
    } else {
        Outcome::Failed(format!(
            "closed-form and spectral routes disagree at a={a}, s={s} (discrepancy {})",
            fmt_num(report.max_route_discrepancy)
        ))
    })
}

fn sweep_grid(
    cfg: &Config,
    a_range: Option<(f64, f64)>,
    s_range: Option<(f64, f64)>,
    steps: Option<u64>,
) -> Grid {
    let d = Grid::default();
    let (a_min, a_max) =
        a_range.unwrap_or((cfg.a_min.unwrap_or(d.a_min), cfg.a_max.unwrap_or(d.a_max)));
    let (s_min, s_max) =
        s_range.unwrap_or((cfg.s_min.unwrap_or(d.s_min), cfg.s_max.unwrap_or(d.s_max)));
    let grid = Grid {
        a_min,
        a_max,
        s_min,
        s_max,
        steps: steps.map(|n| n as usize).or(cfg.steps).unwrap_or(d.steps),
    };
    grid.validate().unwrap_or_else(|e| usage_error(e));
    grid
}

fn sweep_row(r: &EntanglementReport) -> [String; 11] {
    let pair = |p: ModePair| r.pairwise_contangle[&p.to_string()];
    let probe1 = Probe::ALL[0].to_string();
    [
        fmt_num(r.a),
        fmt_num(r.s),
        fmt_num(pair(ModePair::ALL[0])),
        fmt_num(pair(ModePair::ALL[3])),
        fmt_num(pair(ModePair::ALL[2])),
        fmt_num(r.interpair_contangle),
        fmt_num(r.one_vs_rest_contangle[&probe1]),
        fmt_num(r.residual),
        fmt_num(r.tripartite_bound),
        r.monogamy_ok.to_string(),
        r.strong_monogamy_ok.to_string(),
    ]
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            Ok(out.flush()?)
        }
    }
}

fn fourmode_sweep(grid: Grid, out: Option<&Path>) -> Result<Outcome> {
    let points = grid.points()?;
    let reports = points
        .par_iter()
        .map(|&p| four_mode::full_report(p))
        .collect::<promiscuity::Result<Vec<_>>>()?;

    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    for r in &reports {
        w.write_record(sweep_row(r))?;
    }
    write_output(out, &w.into_inner()?)?;

    Ok(match reports.iter().find(|r| !r.consistent) {
        None => Outcome::Ok,
        Some(r) => Outcome::Failed(format!(
            "closed-form and spectral routes disagree at a={}, s={}",
            r.a, r.s
        )),
    })
}

fn qudit_report(d: usize, format: Format) -> Result<Outcome> {
    let report = qudit::tangle_report(d)?;
    let sq = qudit::squashed_bounds(d)?;
    let view = QuditReportView::new(
        &report,
        sq.pairwise_form,
        sq.w_pair_negativity,
        sq.w_pair_log_negativity,
    );
    emit(&match format {
        Format::Json => render::to_json(&view)?,
        Format::Csv => render::to_csv_record(&view)?,
    })?;
    Ok(if *report.exact.monogamy_gap.numer() == 0 {
        Outcome::Ok
    } else {
        Outcome::Failed(format!(
            "monogamy gap {} is not zero",
            report.exact.monogamy_gap
        ))
    })
}

fn run_verify(
    cfg: &Config,
    grid_density: Option<u64>,
    verbose: bool,
    fault: Option<FaultArg>,
) -> Result<Outcome> {
    let steps = grid_density
        .or(cfg.grid_density.map(|n| n as u64))
        .unwrap_or(Grid::default().steps as u64);
    let grid = sweep_grid(cfg, None, None, Some(steps));
    let qudit_max_d = cfg
        .qudit_max_d
        .unwrap_or(VerifyOptions::default().qudit_max_d);
    qudit::check_qudit_dimension(qudit_max_d).unwrap_or_else(|e| usage_error(e));
    let opts = VerifyOptions {
        grid,
        qudit_max_d,
        fault: fault.map(Fault::from),
    };

    let mut text = String::new();
    if verbose {
        text.push_str(&format!(
            "grid: a in [{}, {}], s in [{}, {}], {}x{} points; qudit d <= {}\n",
            fmt_num(grid.a_min),
            fmt_num(grid.a_max),
            fmt_num(grid.s_min),
            fmt_num(grid.s_max),
            grid.steps,
            grid.steps,
            qudit_max_d
        ));
    }
    let mut first: Option<(&str, String)> = None;
    let (mut passed, mut total_checks) = (0, 0);
    for (name, suite) in verify::SUITES {
        let o = suite(&opts)?;
        total_checks += o.checks;
        let status = if o.passed() { "PASS" } else { "FAIL" };
        text.push_str(&format!(
            "{name:<30} checks={:<7} failures={:<5} {status}\n",
            o.checks, o.failures
        ));
        if o.passed() {
            passed += 1;
        } else if let Some(detail) = o.first_failure {
            if verbose {
                text.push_str(&format!("  first failure: {detail}\n"));
            }
            first.get_or_insert((name, detail));
        }
    }
    let n = verify::SUITES.len();
    text.push_str(&format!(
        "verify: {passed}/{n} suites passed, {total_checks} checks\n"
    ));
    if let Some((name, detail)) = &first {
        text.push_str(&format!("first failing point ({name}): {detail}\n"));
    }
    emit(&text)?;

    Ok(match first {
        None if passed == n => Outcome::Ok,
        None => Outcome::Failed("verification failed".into()),
        Some((name, _)) => Outcome::Failed(format!("suite {name} failed")),
    })
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path).unwrap_or_else(|e| usage_error(format!("{e:#}"))),
        None => Config::default(),
    };
    match cli.command {
        Command::Fourmode {
            command: FourmodeCommand::Report { a, s, format },
        } => fourmode_report(a, s, format),
        Command::Fourmode {
            command:
                FourmodeCommand::Sweep {
                    a_range,
                    s_range,
                    steps,
                    out,
                },
        } => fourmode_sweep(sweep_grid(&cfg, a_range, s_range, steps), out.as_deref()),
        Command::Qudit {
            command: QuditCommand::Report { d, format },
        } => qudit_report(d, format),
        Command::Verify {
            grid_density,
            verbose,
            inject_fault,
        } => run_verify(&cfg, grid_density, verbose, inject_fault),
    }
}

/// Usage line of the deepest subcommand named on the command line.
fn usage_for(args: &[String]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let mut current = &mut cmd;
    for arg in args.iter().skip(1) {
        let name = current
            .get_subcommands()
            .find(|c| c.get_name() == arg.as_str())
            .map(|c| c.get_name().to_string());
        match name {
            Some(n) => current = current.find_subcommand_mut(&n).expect("subcommand exists"),
            None if arg.starts_with('-') => continue,
            None => break,
        }
    }
    current.render_usage().to_string()
}

fn parse_args() -> Cli {
    let args: Vec<String> = std::env::args().collect();
    match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if e.exit_code() == 2 && e.kind() == ErrorKind::ValueValidation => {
            let _ = e.print();
            eprintln!("\n{}", usage_for(&args));
            std::process::exit(2);
        }
        Err(e) => e.exit(),
    }
}

fn main() -> ExitCode {
    let cli = parse_args();
    configure_threads();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
