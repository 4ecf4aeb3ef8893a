//! Scenario files, subcommands and CSV output for the `reflector` tool.

pub mod commands;
pub mod error;
pub mod scenario;
pub mod table;

pub use commands::{run, Command, Planner, Report, RunSettings};
pub use error::CliError;
pub use scenario::{parse_scenario, parse_scenario_str, Scenario};

/// The `#` metadata line written above every table. It holds only inputs,
/// never timestamps, so identical runs give identical files.
pub fn metadata(command: Command, s: &Scenario, settings: &RunSettings) -> String {
    let mut line = format!(
        "reflector-cli {} command={} scenario_sha256={} grid_step_m={} search_step_m={}",
        env!("CARGO_PKG_VERSION"),
        command.name(),
        s.hash,
        s.file.options.grid_step_m,
        s.file.options.search_step_m,
    );
    match command {
        Command::PhaseCheck => line.push_str(&format!(" seed={} draws={}", settings.seed, settings.draws)),
        Command::GainMap => {
            line.push_str(match settings.planner {
                Planner::Mr => " planner=mr",
                Planner::Fr => " planner=fr",
            });
        }
        _ => {}
    }
    line.push_str(" lengths=m powers=dBm");
    line
}

/// Runs one subcommand and renders its CSV text.
pub fn render(command: Command, s: &Scenario, settings: &RunSettings) -> Result<(String, Vec<String>), CliError> {
    let report = run(command, s, settings)?;
    Ok((report.table.to_csv(&metadata(command, s, settings)), report.notes))
}
