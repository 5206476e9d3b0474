use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};

use ep2d::io::{parse_config, write_timeseries, OutputDir, RunConfig};
use ep2d::lab::{
    cross_check, default_lemma_cases, parse_lemma_cases, run_kg_decay, run_lemma_suite,
    shock_demo, simulate, KgDecayConfig, ShockVerdict, CROSS_TOLERANCE,
};
use ep2d::nonlocal::CartesianGrid;
use ep2d::radial::RunStatus;
use ep2d::Error;

const EXIT_BLOWUP: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;
const EXIT_PRECONDITION: u8 = 5;

/// Decay exponents accepted by `kg-decay`.
const DECAY_EXPONENT_RANGE: (f64, f64) = (0.85, 1.15);

#[derive(Debug, Parser)]
#[command(name = "ep2d", version, about = "Radial 2D Euler-Poisson laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one configuration and write diagnostics, snapshots and a manifest.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the Riesz projection and radial-embedding identities.
    VerifyLemmas {
        /// Points per side, a power of two.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long = "box", default_value_t = 40.0)]
        box_length: f64,
        /// Case file; the built-in suite when absent.
        #[arg(long)]
        cases: Option<PathBuf>,
    },
    /// Fit the sup-norm decay of the linear Klein-Gordon flow.
    KgDecay {
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long = "box", default_value_t = 320.0)]
        box_length: f64,
        #[arg(long, default_value_t = 1.0)]
        m0: f64,
        #[arg(long, default_value_t = 120.0)]
        tmax: f64,
        /// Fit window `A,B`.
        #[arg(long, default_value = "20,120", value_parser = parse_window)]
        window: (f64, f64),
        /// Write the sampled `t,sup_w` series here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the fluid and rescaled formulations on the same data.
    CrossCheck {
        #[arg(long)]
        config: PathBuf,
        /// Number of matched comparison times.
        #[arg(long, default_value_t = 4)]
        checkpoints: usize,
    },
    /// Run the same data with the field off and on and contrast the outcome.
    ShockDemo {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_window(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected `A,B`, got `{text}`"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Instability { .. } => EXIT_NUMERICAL,
        Error::Vacuum { .. }
        | Error::Neutrality { .. }
        | Error::OriginRegularity { .. }
        | Error::DomainTooSmall { .. }
        | Error::Precondition(_) => EXIT_PRECONDITION,
        _ => EXIT_USAGE,
    }
}

fn load_config(path: &Path) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

fn status_code(status: RunStatus) -> u8 {
    match status {
        RunStatus::Completed => 0,
        RunStatus::BlowupDetected => EXIT_BLOWUP,
        RunStatus::NanDetected => EXIT_NUMERICAL,
        RunStatus::Vacuum => EXIT_PRECONDITION,
    }
}

fn run_simulate(config: &Path, out: &Path) -> Result<u8, Error> {
    let config = load_config(config)?;
    let out = OutputDir::create(out)?;
    let report = simulate(&config, &out)?;
    if let Some(beta) = report.neutralizing_weight {
        println!("neutralizing annulus added with weight {beta:.6e}");
    }
    let last = report.diagnostics.last().expect("a run records its initial state");
    println!(
        "status {} after {} steps at t = {:.6}",
        report.status.as_str(),
        report.steps,
        last.time
    );
    if let Some(message) = &report.message {
        println!("{message}");
    }
    println!("wrote {}", out.root().display());
    Ok(status_code(report.status))
}

fn run_verify(points: usize, box_length: f64, cases: Option<&Path>) -> Result<u8, Error> {
    let grid = CartesianGrid::new(points, box_length)?;
    let cases = match cases {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
            parse_lemma_cases(&text)?
        }
        None => default_lemma_cases(),
    };
    let outcomes = run_lemma_suite(&cases, &grid)?;
    let mut all_good = true;
    for case in &outcomes {
        let label = match (case.expected_fail(), case.passed) {
            (false, true) => "pass",
            (false, false) => "FAIL",
            (true, true) => "expected-fail",
            (true, false) => "CONTROL DID NOT FAIL",
        };
        let bound = if case.expected_fail() { ">=" } else { "<=" };
        let refined = case
            .refined
            .map_or(String::new(), |r| format!(", doubled grid {r:.3e}"));
        println!(
            "{:<12} {:<42} residual {:.3e} ({bound} {:.0e}{refined}) {label}",
            case.kind.as_str(),
            case.name,
            case.residual,
            case.tolerance
        );
        all_good &= case.passed;
    }
    Ok(if all_good { 0 } else { EXIT_NUMERICAL })
}

fn run_decay(config: KgDecayConfig, out: Option<&Path>) -> Result<u8, Error> {
    let report = run_kg_decay(&config)?;
    if let Some(path) = out {
        std::fs::write(path, report.csv()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    let fit = &report.fit;
    println!(
        "exponent {:.4} amplitude {:.4e} rms {:.4e} window [{}, {}] samples {}",
        fit.exponent, fit.amplitude, fit.residual, fit.window.0, fit.window.1, fit.samples
    );
    println!("relative energy drift {:.3e}", report.energy_drift);
    let (lo, hi) = DECAY_EXPONENT_RANGE;
    Ok(if fit.exponent >= lo && fit.exponent <= hi {
        0
    } else {
        println!("exponent outside [{lo}, {hi}]");
        EXIT_NUMERICAL
    })
}

fn run_cross(config: &Path, checkpoints: usize) -> Result<u8, Error> {
    let config = load_config(config)?;
    let report = cross_check(&config, checkpoints)?;
    for s in &report.samples {
        println!(
            "t = {:.6}: |dm| {:.3e} |dv| {:.3e} |dg| {:.3e}",
            s.time, s.diff_m, s.diff_v, s.diff_g
        );
    }
    let worst = report.max_diff();
    println!("max sup-difference {worst:.3e} (tolerance {CROSS_TOLERANCE:.0e})");
    if !report.constants_consistent {
        println!("constants differ from A = m_e = e = kappa = 1, which the rescaled system assumes");
        return Ok(EXIT_PRECONDITION);
    }
    Ok(if worst <= CROSS_TOLERANCE { 0 } else { EXIT_NUMERICAL })
}

fn run_shock(config: &Path, out: &Path) -> Result<u8, Error> {
    let config = load_config(config)?;
    let report = shock_demo(&config)?;
    let root = OutputDir::create(out)?;
    for (name, run) in [
        ("field_off", &report.field_off),
        ("field_on", &report.field_on),
        ("field_on_unfiltered", &report.unfiltered),
    ] {
        write_timeseries(&root.file(&format!("{name}.csv")), &run.diagnostics)?;
    }
    let summary = report.summary();
    let path = root.file("summary");
    std::fs::write(&path, &summary).map_err(|source| Error::Io { path, source })?;
    print!("{summary}");
    Ok(match report.verdict {
        ShockVerdict::Contrast => 0,
        ShockVerdict::Inconclusive => EXIT_PRECONDITION,
        ShockVerdict::FieldOnBlowup => EXIT_BLOWUP,
        ShockVerdict::Instability => EXIT_NUMERICAL,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return ExitCode::from(if informational { 0 } else { EXIT_USAGE });
        }
    };
    let result = match &cli.command {
        Command::Simulate { config, out } => run_simulate(config, out),
        Command::VerifyLemmas {
            grid,
            box_length,
            cases,
        } => run_verify(*grid, *box_length, cases.as_deref()),
        Command::KgDecay {
            grid,
            box_length,
            m0,
            tmax,
            window,
            out,
        } => run_decay(
            KgDecayConfig {
                points_per_side: *grid,
                box_length: *box_length,
                m0: *m0,
                t_max: *tmax,
                window: *window,
                ..KgDecayConfig::default()
            },
            out.as_deref(),
        ),
        Command::CrossCheck {
            config,
            checkpoints,
        } => run_cross(config, *checkpoints),
        Command::ShockDemo { config, out } => run_shock(config, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code(&error))
        }
    }
}
