use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use oh_verify::spec::{DEFAULT_GROUP, DEFAULT_MEASURE, DEFAULT_YOUNG};
use oh_verify::{
    emit_report, exit_code, run_specs, CheckSpec, Format, Report, Status, Suite, VerifyError,
    CATALOG,
};

#[derive(Parser)]
#[command(
    name = "verify",
    version,
    about = "Run numerical checks on finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    /// Report path; `-` writes to stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    /// Constant timestamp and zero runtimes, for byte-stable reports.
    #[arg(long)]
    fixed_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite file.
    Run {
        #[arg(long)]
        suite: PathBuf,
        /// Overrides every seed in the suite.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Run a single check.
    Check {
        #[arg(long)]
        id: String,
        #[arg(long, default_value = DEFAULT_GROUP)]
        group: String,
        /// Young function spec: power:p, npower:p, linear, expm1, table:<path>.
        #[arg(long, default_value = DEFAULT_YOUNG)]
        phi: String,
        /// Measure spec: dirac:t, uniform, random:<seed>, density:<path>, or
        /// `random` for a fresh measure per trial.
        #[arg(long, default_value = DEFAULT_MEASURE)]
        mu: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// List the check catalog.
    List,
}

fn print_summary(results: &[oh_verify::CheckResult]) {
    for r in results {
        let note = r
            .note
            .as_deref()
            .map(|n| format!("  ({n})"))
            .unwrap_or_default();
        println!(
            "{:<5} {:<20} {:<30} {:<12} residual={:.3e} tol={:.0e}{note}",
            r.status, r.id, r.group, r.young, r.residual, r.tol
        );
    }
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    println!(
        "{} pass, {} fail, {} skip",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skip)
    );
}

fn finish(results: Vec<oh_verify::CheckResult>, output: &Output) -> Result<u8, VerifyError> {
    let format: Format = output.format.parse()?;
    let code = exit_code(&results) as u8;
    match &output.report {
        Some(path) => {
            if path.as_os_str() != "-" {
                print_summary(&results);
            }
            emit_report(&Report::new(results, output.fixed_timestamp), format, path)?;
        }
        None => print_summary(&results),
    }
    Ok(code)
}

fn run(cli: Cli) -> Result<u8, VerifyError> {
    match cli.command {
        Command::List => {
            for c in CATALOG {
                println!("{:<20} tol={:<6.0e} {}", c.id, c.tol, c.summary);
            }
            Ok(0)
        }
        Command::Run {
            suite,
            seed,
            output,
        } => {
            let suite = Suite::load(&suite)?;
            finish(run_specs(&suite.expand(seed)), &output)
        }
        Command::Check {
            id,
            group,
            phi,
            mu,
            trials,
            seed,
            tol,
            output,
        } => {
            let mut spec = CheckSpec::new(&id, &group, &phi)
                .measure(&mu)
                .trials(trials)
                .seed(seed);
            spec.tol = tol;
            let result = oh_verify::run_check(&spec)?;
            finish(vec![result], &output)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("verify: {e}");
            ExitCode::from(2)
        }
    }
}
