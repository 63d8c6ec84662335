//! The `bandkern` command line: `run` executes an experiment from a JSON
//! config, `plot` splits a series into per-quantity data files.

pub mod config;
pub mod experiments;
pub mod output;
pub mod plot;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{ExperimentConfig, ExperimentKind};
pub use experiments::{run_experiment, Outcome};
pub use output::{fmt_g17, Diagnostic, Summary};
pub use plot::emit_plot_data;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "bandkern", version, about = "Experiments on finite-bandwidth reproducing kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output path prefix; overrides the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for column generation.
        #[arg(long, env = "BANDKERN_THREADS")]
        threads: Option<usize>,
    },
    /// Write one "x value" data file per quantity of a series CSV.
    Plot {
        series: PathBuf,
        /// Directory for the data files; defaults to the series' directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Domain { .. } => EXIT_CONFIG,
        Error::Truncation(_)
        | Error::IllConditioned { .. }
        | Error::SearchFailure { .. }
        | Error::Precondition(_)
        | Error::Internal(_) => EXIT_NUMERICAL,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Run { config, out, threads } => run(&config, out.as_deref(), threads),
        Command::Plot { series, out_dir } => match emit_plot_data(&series, out_dir.as_deref()) {
            Ok(files) => {
                for f in files {
                    println!("{}", f.display());
                }
                EXIT_OK
            }
            Err(e) => report(&e, None),
        },
    }
}

/// Prints a JSON diagnostic to stderr, writes it next to the outputs when a
/// prefix is known, and returns the exit code.
fn report(err: &Error, prefix: Option<&Path>) -> i32 {
    let code = exit_code(err);
    let diag = Diagnostic::new(err, code);
    if let Some(p) = prefix {
        let _ = output::write_json(&output::error_path(p), &diag);
    }
    eprintln!("{}", serde_json::to_string(&diag).unwrap_or_else(|_| err.to_string()));
    code
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// `bandkern run`.
pub fn run(config_path: &Path, out: Option<&Path>, threads: Option<usize>) -> i32 {
    let text = match std::fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            let err = Error::config(format!("cannot read {}: {e}", config_path.display()));
            return report(&err, out);
        }
    };
    let cfg = match ExperimentConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => return report(&e, out),
    };
    let prefix: PathBuf = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| config_path.with_extension(""));
    let threads = threads.unwrap_or_else(default_threads).max(1);

    let outcome = match run_experiment(&cfg, threads) {
        Ok(o) => o,
        Err(e) => return report(&e, Some(&prefix)),
    };
    let summary = Summary {
        tool: "bandkern".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        experiment: cfg.experiment.name().into(),
        config: cfg.clone(),
        verdict: outcome.verdict.clone(),
        verdicts: outcome.verdicts.clone(),
        constants: outcome.constants.clone(),
        notes: outcome.notes.clone(),
        results: outcome.results.clone(),
    };
    let written = output::write_json(&output::summary_path(&prefix), &summary)
        .and_then(|_| output::write_series(&output::series_path(&prefix), cfg.experiment.name(), &outcome.rows));
    if let Err(e) = written {
        return report(&e, None);
    }
    println!(
        "{}: {} -> {}",
        cfg.experiment.name(),
        outcome.verdict,
        output::summary_path(&prefix).display()
    );
    if cfg.assert && outcome.has_open_verdict() {
        let open: Vec<String> = outcome
            .verdicts
            .iter()
            .filter(|(_, v)| *v == experiments::INCONCLUSIVE || *v == experiments::FAIL)
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        eprintln!(
            "{}",
            serde_json::json!({
                "error": "assertion",
                "message": format!("open verdicts: {}", open.join(", ")),
                "exit_code": EXIT_INCONCLUSIVE,
            })
        );
        return EXIT_INCONCLUSIVE;
    }
    EXIT_OK
}
