use clap::{Args, Parser, Subcommand};
use cracktip::config::{has_errors, ConfigError};
use cracktip::{run, RunError, ScenarioConfig, Step, EXIT_CONFIG, EXIT_IO, EXIT_NUMERICAL};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cracktip", version, about = "Crack-tip singularity scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one step, or every configured step with `all`.
    #[command(flatten)]
    Run(RunCommand),
    /// Check a config without running any solver.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum RunCommand {
    /// Finite element solve with the configured boundary data.
    Solve(RunArgs),
    /// Dual potentials of the solved stress.
    Airy(RunArgs),
    /// Blow-up mode fits at the crack tip.
    Blowup(RunArgs),
    /// Scaled energy release over an increment family.
    Err(RunArgs),
    /// Limit functional of a blow-up increment.
    Limit(RunArgs),
    /// Pencil spectrum and Airy mode audit.
    Spectrum(RunArgs),
    /// Solve plus every section present in the config.
    All(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Worker threads for independent sweeps.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory; overrides `output` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn diag(kind: &str, message: impl std::fmt::Display) {
    eprintln!("{}", json!({"severity": "error", "kind": kind, "message": message.to_string()}));
}

fn load(path: &Path) -> Result<ScenarioConfig, ExitCode> {
    ScenarioConfig::load(path).map_err(|e| {
        match &e {
            ConfigError::Read { .. } => diag("io", &e),
            ConfigError::Parse { .. } => diag("config", &e),
        }
        ExitCode::from(if matches!(e, ConfigError::Read { .. }) { EXIT_IO } else { EXIT_CONFIG })
    })
}

fn validate(path: &Path) -> ExitCode {
    let diagnostics = match ScenarioConfig::load(path) {
        Ok(cfg) => cfg.validate(),
        Err(e) => vec![cracktip::Diagnostic { severity: cracktip::Severity::Error, field: String::new(), message: e.to_string() }],
    };
    let report = json!({"valid": !has_errors(&diagnostics), "diagnostics": diagnostics});
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    ExitCode::SUCCESS
}

fn execute(step: Step, args: RunArgs) -> ExitCode {
    let cfg = match load(&args.config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let diagnostics = cfg.validate();
    for d in &diagnostics {
        eprintln!("{}", serde_json::to_string(d).expect("diagnostic serializes"));
    }
    if has_errors(&diagnostics) {
        return ExitCode::from(EXIT_CONFIG);
    }
    let out = args.out.unwrap_or_else(|| PathBuf::from(&cfg.output));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            diag("config", format!("cannot start {} workers: {e}", args.jobs));
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match pool.install(|| run(step, &cfg, &out)) {
        Ok(m) => {
            println!("{}", serde_json::to_string_pretty(&m.summary).expect("summary serializes"));
            ExitCode::SUCCESS
        }
        Err(e @ RunError::Numerical { .. }) => {
            diag("numerical", &e);
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(e @ RunError::Io { .. }) => {
            diag("io", &e);
            ExitCode::from(EXIT_IO)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Validate { config } => validate(&config),
        Command::Run(cmd) => {
            let (step, args) = match cmd {
                RunCommand::Solve(a) => (Step::Solve, a),
                RunCommand::Airy(a) => (Step::Airy, a),
                RunCommand::Blowup(a) => (Step::Blowup, a),
                RunCommand::Err(a) => (Step::Err, a),
                RunCommand::Limit(a) => (Step::Limit, a),
                RunCommand::Spectrum(a) => (Step::Spectrum, a),
                RunCommand::All(a) => (Step::All, a),
            };
            execute(step, args)
        }
    }
}
