//! `lab`: runs scenario files and bundled presets, writing JSON reports.
//!
//! Exit codes: 0 when every task passes, 1 when any task fails, 2 for
//! usage, parse or validation errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twistlab::scenario::{self, RunReport, Scenario, PRESETS, TASK_ORDER};

#[derive(Parser)]
#[command(name = "lab", version, about = "Exact checks for twisted homogeneous coordinate rings and their point subalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file, or a bundled preset by name.
    Run {
        /// Path to a scenario JSON file, or a preset name.
        scenario: String,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the orbit window.
        #[arg(long)]
        window: Option<usize>,
        /// Override the largest position-certificate degree.
        #[arg(long)]
        dmax: Option<usize>,
        /// Also write every degree row as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// List bundled presets.
    Presets {
        /// Write each preset as `<name>.json` into this directory.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Describe what a task checks.
    Explain {
        task: String,
    },
}

/// A usage or input problem, reported with exit code 2.
struct UsageError(String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {}", e.0);
        return ExitCode::from(2);
    }
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(2)
        }
    }
}

/// `LAB_THREADS` caps the worker pool.
fn configure_threads() -> Result<(), UsageError> {
    let Ok(v) = std::env::var("LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| UsageError(format!("LAB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| UsageError(e.to_string()))
}

fn dispatch(cmd: Command) -> Result<u8, UsageError> {
    match cmd {
        Command::Run { scenario, out, window, dmax, csv } => run(&scenario, out.as_deref(), window, dmax, csv.as_deref()),
        Command::Presets { write } => {
            for p in &PRESETS {
                println!("{:<20} {}", p.name, p.description());
            }
            if let Some(dir) = write {
                fs::create_dir_all(&dir).map_err(|e| UsageError(format!("{}: {e}", dir.display())))?;
                for p in &PRESETS {
                    let path = dir.join(format!("{}.json", p.name));
                    fs::write(&path, p.text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                }
            }
            Ok(0)
        }
        Command::Explain { task } => match scenario::explain(&task) {
            Some(text) => {
                println!("{task}: {text}");
                Ok(0)
            }
            None => Err(UsageError(format!("unknown task {task:?}; tasks are {}", TASK_ORDER.join(", ")))),
        },
    }
}

fn load(source: &str) -> Result<Scenario, UsageError> {
    let path = Path::new(source);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{source}: {e}")))?;
        return Scenario::parse(&text).map_err(|e| UsageError(format!("{source}: {e}")));
    }
    match scenario::preset(source) {
        Ok(p) => Ok(p.scenario()),
        Err(_) => Err(UsageError(format!("{source}: no such file or preset"))),
    }
}

fn run(source: &str, out: Option<&Path>, window: Option<usize>, dmax: Option<usize>, csv: Option<&Path>) -> Result<u8, UsageError> {
    let sc = load(source)?.with_overrides(window, dmax);
    let report = scenario::run(&sc).map_err(|e| UsageError(format!("{source}: {e}")))?;
    summarize(&report);
    let json = report.to_json();
    match out {
        Some(path) => fs::write(path, json + "\n").map_err(|e| UsageError(format!("{}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    if let Some(path) = csv {
        write_csv(&report, path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    }
    Ok(report.exit_code() as u8)
}

/// One line per task on standard error, plus the failing rows.
fn summarize(report: &RunReport) {
    for t in &report.tasks {
        eprintln!("{:<14} {}", t.task, if t.pass { "pass" } else { "FAIL" });
        for f in &t.failures {
            eprintln!("    {f}");
        }
    }
    eprintln!("{}: {}", report.scenario.name, if report.pass { "all tasks passed" } else { "some tasks failed" });
}

fn write_csv(report: &RunReport, path: &Path) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["task", "report", "degree", "predicted", "computed", "pass"])?;
    for t in &report.tasks {
        for r in &t.reports {
            for row in &r.rows {
                w.write_record([
                    t.task.as_str(),
                    r.name.as_str(),
                    &row.degree.to_string(),
                    &row.predicted.to_string(),
                    &row.computed.to_string(),
                    &row.pass.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
