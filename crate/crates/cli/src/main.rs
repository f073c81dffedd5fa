use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdplasmon_cli::config::{SolverChoice, SweepConfig};
use qdplasmon_cli::presets::{preset, preset_text, PRESETS};
use qdplasmon_cli::run::{execute, Execution};
use qdplasmon_cli::{load_config, CliError, FlagOverrides, ScenarioConfig, CONFIG_SCHEMA};

/// Quantum dot / plasmon scenario runner.
///
/// Flag values override the config file, which overrides the defaults of the
/// selected parameter set.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario (or the sweep it declares).
    Run(RunArgs),
    /// Run a scenario once per value of a numeric field.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Dotted config path, e.g. gamma2_star or params.g.
        #[arg(long)]
        axis: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// List bundled presets, or print one.
    Presets { name: Option<String> },
    /// Print the config JSON schema.
    Schema,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Bundled config by name (fig1 … fig6).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = parse_solver)]
    solver: Option<SolverChoice>,
    /// Parameter set, 1 or 2.
    #[arg(long = "set")]
    parameter_set: Option<u8>,
}

fn parse_solver(s: &str) -> Result<SolverChoice, String> {
    SolverChoice::parse(s).ok_or_else(|| format!("expected lindblad, nonhermitian or both, got '{s}'"))
}

impl RunArgs {
    fn load(&self) -> Result<ScenarioConfig, CliError> {
        let mut config = match (&self.config, &self.preset) {
            (Some(path), _) => load_config(path)?,
            (None, Some(name)) => preset(name)?,
            (None, None) => unreachable!("clap requires one of --config and --preset"),
        };
        FlagOverrides {
            out: self.out.clone(),
            seed: self.seed,
            solver: self.solver,
            parameter_set: self.parameter_set,
        }
        .apply(&mut config);
        Ok(config)
    }
}

fn report(execution: &Execution) {
    match execution {
        Execution::Single(o) => {
            println!("wrote {} files to {}", o.files.len(), o.resolved.output_dir.display());
            println!("manifest: {}", o.manifest_path.display());
        }
        Execution::Sweep(s) => {
            for e in &s.entries {
                match &e.result {
                    Ok(_) => println!("{}: ok", e.label),
                    Err(err) => println!("{}: failed ({err})", e.label),
                }
            }
            println!("sweep manifest: {}", s.manifest_path.display());
        }
    }
}

fn main_inner(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run(args) => {
            let execution = execute(&args.load()?)?;
            report(&execution);
            Ok(execution.exit_code())
        }
        Command::Sweep { run, axis, values } => {
            let mut config = run.load()?;
            config.sweep = Some(SweepConfig { axis, values });
            let execution = execute(&config)?;
            report(&execution);
            Ok(execution.exit_code())
        }
        Command::Presets { name: None } => {
            for (name, _) in PRESETS {
                println!("{name}");
            }
            Ok(0)
        }
        Command::Presets { name: Some(name) } => {
            let text = preset_text(&name)
                .ok_or_else(|| CliError::Config { path: "presets".into(), message: format!("unknown preset '{name}'") })?;
            print!("{text}");
            Ok(0)
        }
        Command::Schema => {
            print!("{CONFIG_SCHEMA}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
