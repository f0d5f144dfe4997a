//! `jensen-lab <command> --job <file.json> [options]`
//!
//! Runs one job file, prints the report as JSON on stdout and diagnostics on
//! stderr. The exit status follows the report: 0 holds/certified/completed,
//! 1 hypothesis failed or not certified, 2 violated, 3 bad input, 4 numerical
//! non-convergence.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use jensen_lab::job::{self, Command, Job, JobError, Overrides, ReportResult};
use jensen_lab::json::to_string_stable;

const EXIT_INPUT: u8 = 3;

fn parse_command(name: &str) -> Result<Command, String> {
    Command::ALL.into_iter().find(|c| c.name() == name).ok_or_else(|| {
        let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Parser)]
#[command(name = "jensen-lab", version, about = "Certify SP measures and check Jensen-type inequalities")]
struct Cli {
    /// Must match the `command` field of the job file.
    #[arg(value_parser = parse_command)]
    command: Command,
    /// Job file (JSON).
    #[arg(long)]
    job: PathBuf,
    /// Write the profile curve (certify-sp) or margin curve (check-shape) as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Quadrature panels per segment.
    #[arg(long)]
    panels: Option<usize>,
    /// Grid size for shape checks.
    #[arg(long)]
    grid: Option<usize>,
    /// Tolerance applied to every check.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    /// Write a mined counterexample as a replayable check-jensen job.
    #[arg(long)]
    witness: Option<PathBuf>,
}

fn fail(message: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("jensen-lab: {message}");
    ExitCode::from(code)
}

fn write_csv(path: &Path, job: &Job) -> Result<(), String> {
    let Some(curve) = job::curve(job).map_err(|e| e.to_string())? else {
        return Err(format!("--csv is not available for {}", job.command.name()));
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    w.write_record(&curve.columns).map_err(|e| e.to_string())?;
    for row in &curve.rows {
        w.write_record(row.iter().map(|v| format!("{v:.16e}")))
            .map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

fn write_witness(path: &Path, result: &ReportResult) -> Result<(), String> {
    let ReportResult::Counterexample(r) = result else {
        return Err("--witness applies to mine-counterexample only".into());
    };
    let Some(job) = &r.witness else {
        eprintln!("jensen-lab: no witness found, {} not written", path.display());
        return Ok(());
    };
    let text = job.to_json().map_err(|e| e.to_string())?;
    fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))
}

fn report_failure(e: &JobError) -> ExitCode {
    if let Some(partial) = &e.partial {
        match to_string_stable(partial) {
            Ok(text) => eprintln!("partial certificate:\n{text}"),
            Err(err) => eprintln!("partial certificate not serializable: {err}"),
        }
    }
    fail(&e.error, u8::try_from(e.exit_code()).unwrap_or(EXIT_INPUT))
}

fn run(cli: Cli) -> ExitCode {
    let text = match fs::read_to_string(&cli.job) {
        Ok(t) => t,
        Err(e) => return fail(format_args!("{}: {e}", cli.job.display()), EXIT_INPUT),
    };
    let overrides = Overrides {
        panels: cli.panels,
        grid: cli.grid,
        tol: cli.tol,
        seed: cli.seed,
        budget: cli.budget,
    };
    let job = match job::parse_job_with(&text, &overrides) {
        Ok(j) => j,
        Err(e) => return fail(format_args!("{}: {e}", cli.job.display()), EXIT_INPUT),
    };
    let wanted = cli.command;
    if job.command != wanted {
        return fail(
            format_args!("command line says {} but the job file says {}", wanted.name(), job.command.name()),
            EXIT_INPUT,
        );
    }

    let report = match job::execute(&job) {
        Ok(r) => r,
        Err(e) => return report_failure(&e),
    };
    match report.to_json() {
        Ok(text) => {
            // A reader that hangs up early (`| head`) is not an error of the job.
            let mut out = io::stdout().lock();
            if let Err(e) = writeln!(out, "{text}").and_then(|()| out.flush()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    return fail(format_args!("writing the report: {e}"), EXIT_INPUT);
                }
            }
        }
        Err(e) => return fail(e, EXIT_INPUT),
    }
    if let Some(path) = &cli.csv {
        if let Err(e) = write_csv(path, &job) {
            return fail(e, EXIT_INPUT);
        }
    }
    if let Some(path) = &cli.witness {
        if let Err(e) = write_witness(path, &report.result) {
            return fail(e, EXIT_INPUT);
        }
    }
    ExitCode::from(u8::try_from(report.exit_code()).unwrap_or(EXIT_INPUT))
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors.
            if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
