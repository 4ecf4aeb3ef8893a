use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use reflector_cli::{parse_scenario, render, CliError, Command, Planner, RunSettings};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlannerArg {
    Mr,
    Fr,
}

/// Plan positions and tilts of passive wall reflectors.
#[derive(Debug, Parser)]
#[command(name = "reflector", version)]
struct Args {
    /// One of: sweep-mr, sweep-fr, single-target, area-mr, area-fr, plan-mr,
    /// plan-fr, gain-map, cdf, region-sweep, benchmarks, phase-check.
    command: String,
    #[arg(long)]
    scenario: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Receiver grid spacing inside the planners (m); overrides the scenario.
    #[arg(long)]
    grid_step: Option<f64>,
    /// Candidate position spacing (m); overrides the scenario.
    #[arg(long)]
    search_step: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo draws for phase-check.
    #[arg(long, default_value_t = 100_000)]
    draws: usize,
    /// Planner whose layout gain-map evaluates.
    #[arg(long, value_enum, default_value = "mr")]
    planner: PlannerArg,
    /// Worker threads for field evaluation; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let command = Command::from_name(&args.command).ok_or_else(|| CliError::Invalid {
        field: "command",
        reason: format!("unknown subcommand `{}`", args.command),
    })?;
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid { field: "threads", reason: e.to_string() })?;
    }
    let mut scenario = parse_scenario(&args.scenario)?;
    if let Some(g) = args.grid_step {
        scenario.file.options.grid_step_m = g;
    }
    if let Some(s) = args.search_step {
        scenario.file.options.search_step_m = s;
    }
    let settings = RunSettings {
        seed: args.seed,
        draws: args.draws,
        planner: match args.planner {
            PlannerArg::Mr => Planner::Mr,
            PlannerArg::Fr => Planner::Fr,
        },
    };
    let Format::Csv = args.format;
    let (csv, notes) = render(command, &scenario, &settings)?;
    match &args.out {
        Some(path) => std::fs::write(path, csv).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => std::io::stdout()
            .write_all(csv.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?,
    }
    for n in notes {
        eprintln!("{n}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code())
        }
    }
}
