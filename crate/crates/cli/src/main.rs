use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use scirs::integrator::{IntegrationConfig, DEFAULT_CONVERGENCE_TOL, DEFAULT_STEP, DEFAULT_T_END};
use scirs::stability::DEFAULT_SEARCH_BUDGET;
use scirs_cli::commands::{self, SweepSimulation};
use scirs_cli::config::{read_params, Format, InitialStates, RunConfig, SweepSpec, System};
use scirs_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "scirs",
    version,
    about = "SCIRS carrier epidemic model: thresholds, stability checks and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the basic reproduction number.
    R0(Common),
    /// Disease-free and endemic equilibria with residuals.
    Equilibria(Common),
    /// Stability report and verdict for the endemic equilibrium.
    Check(Common),
    /// Integrate from several initial states; one file per run.
    Simulate(RunArgs),
    /// Summary table over values of one parameter.
    Sweep(SweepArgs),
    /// All runs in a single table for phase-portrait plotting.
    Phase(RunArgs),
}

#[derive(Args)]
struct Common {
    /// Parameter file (`name = value` lines or JSON).
    #[arg(long)]
    params: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Seed for state sampling and the certificate search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trials for the diagonal certificate search.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct Integration {
    #[arg(long, default_value_t = DEFAULT_STEP)]
    h: f64,
    #[arg(long = "t-end", default_value_t = DEFAULT_T_END)]
    t_end: f64,
    /// Record every k-th step (default: once per unit time).
    #[arg(long)]
    stride: Option<usize>,
    /// Max-norm distance counted as converged.
    #[arg(long, default_value_t = DEFAULT_CONVERGENCE_TOL)]
    tol: f64,
    /// Number of initial states sampled uniformly from the feasible region.
    #[arg(long = "n-init")]
    n_init: Option<usize>,
    /// Explicit initial state, comma separated; repeatable.
    #[arg(long = "init", conflicts_with = "n_init")]
    init: Vec<String>,
    #[arg(long, value_enum, default_value_t = System::Limit)]
    system: System,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    integration: Integration,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Parameter to vary.
    #[arg(long)]
    axis: String,
    /// Comma-separated values, kept in the given order.
    #[arg(long)]
    values: String,
    /// Also simulate each point and report convergence time.
    #[arg(long)]
    simulate: bool,
    #[command(flatten)]
    integration: Integration,
}

const DEFAULT_N_INIT: usize = 5;

impl Integration {
    fn config(&self) -> CliResult<IntegrationConfig> {
        let mut cfg = IntegrationConfig::with_step(self.h, self.t_end);
        if let Some(k) = self.stride {
            cfg.record_stride = k;
        }
        cfg.convergence_tol = self.tol;
        cfg.validate()?;
        Ok(cfg)
    }

    fn initial_states(&self, seed: u64) -> CliResult<InitialStates> {
        if self.init.is_empty() {
            Ok(InitialStates::Sampled {
                count: self.n_init.unwrap_or(DEFAULT_N_INIT),
                seed,
            })
        } else {
            let states = self
                .init
                .iter()
                .map(|s| InitialStates::parse_state(s))
                .collect::<CliResult<_>>()?;
            Ok(InitialStates::Explicit(states))
        }
    }
}

impl RunArgs {
    fn config(&self) -> CliResult<RunConfig> {
        let c = &self.common;
        let cfg = RunConfig {
            params: read_params(&c.params)?,
            system: self.integration.system,
            integration: self.integration.config()?,
            initial_states: self.integration.initial_states(c.seed)?,
            output_path: c.out.clone().unwrap_or_default(),
            output_format: c.format.unwrap_or(Format::Csv),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::R0(c) => {
            let p = read_params(&c.params)?;
            match c.format {
                Some(Format::Json) => commands::write_report(
                    &serde_json::json!({ "r0": p.reproduction_number() }),
                    c.out.as_deref(),
                    Format::Json,
                ),
                _ => {
                    let text = commands::r0_text(&p);
                    match &c.out {
                        Some(path) => {
                            std::fs::write(path, format!("{text}\n")).map_err(|e| CliError::Io {
                                path: path.display().to_string(),
                                source: e,
                            })
                        }
                        None => {
                            println!("{text}");
                            Ok(())
                        }
                    }
                }
            }
        }
        Command::Equilibria(c) => {
            let p = read_params(&c.params)?;
            commands::write_report(
                &commands::equilibria(&p),
                c.out.as_deref(),
                c.format.unwrap_or(Format::Json),
            )
        }
        Command::Check(c) => {
            let p = read_params(&c.params)?;
            let report = commands::check(&p, c.seed, c.budget)?;
            if let Some(w) = &report.warning {
                eprintln!("warning: {w}");
            }
            commands::write_report(&report, c.out.as_deref(), c.format.unwrap_or(Format::Json))
        }
        Command::Simulate(args) => {
            let cfg = args.config()?;
            let dir = args
                .common
                .out
                .as_deref()
                .ok_or_else(|| CliError::Config("simulate needs --out <dir>".into()))?;
            let sim = commands::simulate(&cfg)?;
            commands::write_simulation(&sim, dir, cfg.output_format)
        }
        Command::Phase(args) => {
            let cfg = args.config()?;
            let sim = commands::phase(&cfg)?;
            commands::write_phase(&sim, args.common.out.as_deref(), cfg.output_format)
        }
        Command::Sweep(args) => {
            let c = &args.common;
            let base = read_params(&c.params)?;
            let spec = SweepSpec::new(base, &args.axis, SweepSpec::parse_values(&args.values)?)?;
            let sim = if args.simulate {
                Some(SweepSimulation {
                    integration: args.integration.config()?,
                    n_init: args.integration.n_init.unwrap_or(DEFAULT_N_INIT),
                    seed: c.seed,
                })
            } else {
                None
            };
            let rows = commands::sweep(&spec, c.seed, c.budget, sim.as_ref())?;
            commands::write_sweep(&rows, c.out.as_deref(), c.format.unwrap_or(Format::Csv))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
