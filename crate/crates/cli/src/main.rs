use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use layered_qed_cli::config::{parse_config, ConfigError, RunConfig};
use layered_qed_cli::presets::{preset, PRESETS};
use layered_qed_cli::{run_sweep, run_validation, summarize, write_csv, Options};

#[derive(Parser)]
#[command(name = "lqed", version, about = "Photon number and thermal balance profiles in layered media")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the requested quantities on the position/energy grid
    Sweep {
        #[command(flatten)]
        source: Source,
        /// CSV destination (overrides `output_path`; `-` for stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary JSON destination (defaults to `<out>.summary.json`)
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Worker threads (1 = serial)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the built-in consistency checks
    Validate {
        #[command(flatten)]
        source: Source,
        /// Relative tolerance for the closed-form vs quadrature comparison
        #[arg(long)]
        tol: Option<f64>,
        /// Put every layer at this temperature (K) first
        #[arg(long)]
        equilibrium: Option<f64>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, hide = true)]
        corrupt_fresnel: bool,
    },
    /// List the built-in presets
    Presets,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// TOML run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scene (see `lqed presets`)
    #[arg(long)]
    preset: Option<String>,
}

enum Failure {
    Config(anyhow::Error),
    Numerical(anyhow::Error),
}

fn load(source: &Source) -> Result<RunConfig, Failure> {
    let cfg = match (&source.config, &source.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.display().to_string(), source: e });
            let (cfg, warnings) = text.and_then(|t| parse_config(&t)).map_err(|e| Failure::Config(e.into()))?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            cfg
        }
        (None, Some(name)) => preset(name).map_err(|e| Failure::Config(e.into()))?,
        (None, None) => unreachable!("clap enforces one source"),
    };
    Ok(cfg)
}

fn summary_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".summary.json");
    out.with_file_name(name)
}

fn sweep(source: &Source, out: Option<PathBuf>, summary: Option<PathBuf>, jobs: Option<usize>) -> Result<(), Failure> {
    let cfg = load(source)?;
    let out = out.or_else(|| cfg.output_path.as_ref().map(PathBuf::from)).filter(|p| p.as_os_str() != "-");
    let result = run_sweep(&cfg, jobs).map_err(|e| Failure::Numerical(e.into()))?;
    let io_err = |e: anyhow::Error| Failure::Numerical(e);
    match &out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display())).map_err(io_err)?;
            write_csv(BufWriter::new(file), &cfg.outputs, &result).context("writing CSV").map_err(io_err)?;
        }
        None => write_csv(io::stdout().lock(), &cfg.outputs, &result).context("writing CSV").map_err(io_err)?,
    }
    if let Some(path) = summary.or_else(|| out.as_deref().map(summary_path)) {
        let s = summarize(&cfg, &result).map_err(|e| Failure::Numerical(e.into()))?;
        let mut text = serde_json::to_string_pretty(&s).context("serializing summary").map_err(io_err)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display())).map_err(io_err)?;
    }
    Ok(())
}

fn validate(source: &Source, opts: Options, report: Option<PathBuf>) -> Result<bool, Failure> {
    let cfg = load(source)?;
    if let Some(t) = opts.tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(Failure::Config(anyhow::anyhow!("--tol: must lie in (0, 1)")));
        }
    }
    if let Some(t) = opts.equilibrium {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Failure::Config(anyhow::anyhow!("--equilibrium: temperature must be non-negative")));
        }
    }
    let r = run_validation(&cfg, &opts).map_err(|e| Failure::Numerical(e.into()))?;
    for c in &r.checks {
        eprintln!(
            "{} {}: max error {:.2e} (tolerance {:.0e}); {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.max_error,
            c.tolerance,
            c.detail
        );
    }
    let mut text = serde_json::to_string_pretty(&r).context("serializing report").map_err(Failure::Numerical)?;
    text.push('\n');
    match report {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing report"),
    }
    .map_err(Failure::Numerical)?;
    Ok(r.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Sweep { source, out, summary, jobs } => sweep(&source, out, summary, jobs).map(|_| true),
        Command::Validate { source, tol, equilibrium, report, corrupt_fresnel } => {
            validate(&source, Options { tol, equilibrium, corrupt_fresnel }, report)
        }
        Command::Presets => {
            for p in &PRESETS {
                println!("{:<6} {}", p.name, p.description);
            }
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
