use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use decolab::cli::{
    parse_config, run_scenario, scenario, scenario_summary, CliError, ConfigError, Experiment,
    SCENARIOS,
};

/// Numerical laboratory for environment-induced decoherence.
#[derive(Parser)]
#[command(name = "decolab", version, about)]
struct Cli {
    /// Print the shipped scenario files and exit.
    #[arg(long)]
    list_scenarios: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Cat state damped by localising decoherence.
    Localize(RunArgs),
    /// Free-particle decoherence master equation.
    EvolveFree(RunArgs),
    /// Caldeira–Leggett equation or the decoherence/relaxation ratio.
    EvolveCl(RunArgs),
    /// Wigner functions and density matrices of cat and oscillator states.
    Wigner(RunArgs),
    /// Survival under repeated ideal measurements.
    ZenoAnalytic(RunArgs),
    /// Two-level system coupled to a continuous pointer.
    ZenoPointer(RunArgs),
    /// Chiral two-level molecule under monitoring.
    Chiral(RunArgs),
    /// QED vacuum-polarisation and pair-creation factors.
    Qed(RunArgs),
    /// Gravitational decoherence by a gas.
    Gravity(RunArgs),
    /// Localisation-rate table.
    Table1(RunArgs),
    /// One experiment repeated over a list of parameter values.
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file.
    #[arg(
        long,
        required_unless_present = "scenario",
        conflicts_with = "scenario"
    )]
    config: Option<PathBuf>,

    /// Name of a shipped scenario (see --list-scenarios).
    #[arg(long)]
    scenario: Option<String>,

    /// Output directory; overrides `output_dir` from the scenario.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Command {
    fn split(self) -> (Experiment, RunArgs) {
        match self {
            Command::Localize(a) => (Experiment::Localize, a),
            Command::EvolveFree(a) => (Experiment::EvolveFree, a),
            Command::EvolveCl(a) => (Experiment::EvolveCl, a),
            Command::Wigner(a) => (Experiment::Wigner, a),
            Command::ZenoAnalytic(a) => (Experiment::ZenoAnalytic, a),
            Command::ZenoPointer(a) => (Experiment::ZenoPointer, a),
            Command::Chiral(a) => (Experiment::Chiral, a),
            Command::Qed(a) => (Experiment::Qed, a),
            Command::Gravity(a) => (Experiment::Gravity, a),
            Command::Table1(a) => (Experiment::Table1, a),
            Command::Sweep(a) => (Experiment::Sweep, a),
        }
    }
}

fn execute(experiment: Experiment, args: RunArgs) -> Result<(), CliError> {
    let text = match (&args.config, &args.scenario) {
        (Some(path), _) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        (None, Some(name)) => scenario(name)
            .ok_or_else(|| ConfigError::Validation {
                key: "scenario".into(),
                reason: format!("no shipped scenario named `{name}`"),
            })?
            .to_string(),
        (None, None) => return Err(ConfigError::MissingKey("config".into()).into()),
    };
    let cfg = parse_config(&text)?;
    if cfg.experiment != experiment {
        return Err(ConfigError::Validation {
            key: "experiment".into(),
            reason: format!(
                "scenario runs `{}`, subcommand is `{experiment}`",
                cfg.experiment
            ),
        }
        .into());
    }
    let out = args
        .out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(experiment.tag()));
    let report = run_scenario(&cfg, &out)?;
    println!("{report}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_scenarios {
        for (name, text) in SCENARIOS {
            let experiment = parse_config(text)
                .map(|c| c.experiment.tag())
                .unwrap_or("?");
            println!("{name:<8} {experiment:<14} {}", scenario_summary(text));
        }
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (try --help)");
        return ExitCode::from(2);
    };
    let (experiment, args) = command.split();
    match execute(experiment, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
