use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sphere_csf::harness::{checks_table, error_json, exit_code, run_scenario, Format, Scenario, Task};
use sphere_csf::{Error, Result};

#[derive(Parser)]
#[command(name = "sphere-csf", version, about = "Curve shortening flow on the sphere: scenarios and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a generated curve and record its trajectory.
    Simulate(Common),
    /// Sup of r-multiplicity over great circles.
    Multiplicity(Common),
    /// Build and verify a (C, theta)-spacing.
    Spacing(Common),
    /// Track the C^1 deviation of a leafable curve from its great circle.
    Straighten(Common),
    /// Level-set sandwich from offset annuli.
    Levelset(Common),
    /// Evolve a periodic graph under the graph equation.
    Graphflow(Common),
    /// Run acceptance checks; without a config every check runs.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Run only this check (repeatable).
        #[arg(long = "check")]
        checks: Vec<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario config (JSON with a `kind` field).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Artifact root; defaults to the config's `output_dir`, then `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Trajectory format.
    #[arg(long, default_value = "jsonl")]
    format: String,
    /// Print nothing on success.
    #[arg(long)]
    quiet: bool,
}

fn load(common: &Common, kind: &str) -> Result<Scenario> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::ConfigInvalid(format!("config: `{kind}` needs --config <file>")))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::ConfigInvalid(format!("config: {}: {e}", path.display())))?;
    let scenario = Scenario::from_json(&text)?;
    if scenario.kind_name() != kind {
        return Err(Error::ConfigInvalid(format!(
            "kind: config describes `{}` but the subcommand is `{kind}`",
            scenario.kind_name()
        )));
    }
    Ok(scenario)
}

fn run(cli: Cli) -> Result<bool> {
    let (common, mut scenario) = match &cli.command {
        Command::Simulate(c) => (c, load(c, "simulate")?),
        Command::Multiplicity(c) => (c, load(c, "multiplicity")?),
        Command::Spacing(c) => (c, load(c, "spacing")?),
        Command::Straighten(c) => (c, load(c, "straighten")?),
        Command::Levelset(c) => (c, load(c, "levelset")?),
        Command::Graphflow(c) => (c, load(c, "graphflow")?),
        Command::Verify { common, checks } => {
            let scenario = match (&common.config, checks.is_empty()) {
                (Some(_), true) => load(common, "verify")?,
                (Some(_), false) => return Err(Error::ConfigInvalid("check: use either --config or --check".into())),
                (None, _) => {
                    let suite = if checks.is_empty() { vec!["all".to_string()] } else { checks.clone() };
                    Scenario { name: "verify".into(), seed: 0, output_dir: None, task: Task::Verify { suite } }
                }
            };
            (common, scenario)
        }
    };
    if let Some(seed) = common.seed {
        scenario.seed = seed;
    }
    let format: Format = common.format.parse()?;
    let root = common.out.clone().or_else(|| scenario.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let outcome = run_scenario(&scenario, &root, format)?;
    if !common.quiet {
        if let Task::Verify { .. } = scenario.task {
            print!("{}", checks_table(&outcome.checks));
        }
        println!("{} {}", if outcome.ok { "ok" } else { "FAILED" }, outcome.dir.display());
    }
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
