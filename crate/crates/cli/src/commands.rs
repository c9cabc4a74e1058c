//! Subcommand implementations. Each computes a value; the `write_*`
//! functions serialize it.

use std::fmt;
use std::path::Path;

use scirs::integrator::{integrate_many, IntegrationConfig};
use scirs::stability::{gas_condition, StabilityReport};
use scirs::{Compartments, EquilibriumReport, Error as CoreError, ModelParams, StateSci};
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::config::{Format, InitialStates, RunConfig, SweepSpec, System};
use crate::output::{flatten_json, fmt_f64, fmt_opt, sink, write_csv, write_json};
use crate::{CliError, CliResult};

/// R0 with six decimals.
pub fn r0_text(p: &ModelParams) -> String {
    format!("{:.6}", p.reproduction_number())
}

pub fn equilibria(p: &ModelParams) -> EquilibriumReport {
    p.equilibrium_report()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    GasCertified,
    DfeGas,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::GasCertified => "GAS-certified",
            Verdict::DfeGas => "DFE-GAS",
            Verdict::Inconclusive => "inconclusive (condition sufficient only)",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub r0: f64,
    pub verdict: Verdict,
    pub certificate_verified: bool,
    /// Set when the condition holds but no certificate was found in budget.
    pub warning: Option<String>,
    #[serde(flatten)]
    pub report: StabilityReport,
}

pub fn check(p: &ModelParams, seed: u64, budget: usize) -> CliResult<CheckReport> {
    let r0 = p.reproduction_number();
    let report = StabilityReport::analyze(p, seed, budget)?;
    let certificate_verified = report.certificate_verified();
    let mut warning = None;
    let verdict = if r0 <= 1.0 {
        Verdict::DfeGas
    } else if report.gas_holds && certificate_verified {
        Verdict::GasCertified
    } else {
        if report.gas_holds {
            warning = Some(format!(
                "certificate search exhausted after {budget} trials"
            ));
        }
        Verdict::Inconclusive
    };
    Ok(CheckReport {
        r0,
        verdict,
        certificate_verified,
        warning,
        report,
    })
}

/// The equilibrium trajectories are expected to approach, in `system`
/// coordinates: the endemic state when R0 > 1, otherwise the disease-free one.
pub fn attractor(p: &ModelParams, system: System) -> (&'static str, Vec<f64>) {
    match p.dee() {
        Ok(e) => ("endemic", system.embed(p, &e)),
        Err(_) => ("disease-free", system.embed(p, &p.dfe())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Run {
    pub run_id: usize,
    #[serde(skip)]
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<Vec<f64>>,
    pub initial: Vec<f64>,
    pub converged_at: Option<f64>,
    pub terminal: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Simulation {
    #[serde(serialize_with = "ser_system")]
    pub system: System,
    pub columns: Vec<&'static str>,
    pub equilibrium_kind: &'static str,
    pub equilibrium: Vec<f64>,
    pub convergence_tol: f64,
    pub t_end: f64,
    pub runs: Vec<Run>,
}

fn ser_system<S: Serializer>(sys: &System, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{sys:?}").to_lowercase())
}

fn run_fixed<const N: usize, F>(
    field: F,
    starts: &[Vec<f64>],
    target: &[f64],
    cfg: &IntegrationConfig,
) -> CliResult<Vec<Run>>
where
    F: Fn(&[f64; N]) -> [f64; N] + Sync,
{
    let arr = |v: &[f64]| -> [f64; N] { v.try_into().expect("dimension checked by RunConfig") };
    let fixed: Vec<[f64; N]> = starts.iter().map(|s| arr(s)).collect();
    let target = arr(target);
    integrate_many(field, &fixed, cfg, Some(&target))
        .into_iter()
        .enumerate()
        .map(|(run_id, r)| match r {
            Ok(t) => Ok(Run {
                run_id,
                times: t.times,
                states: t.states.iter().map(|s| s.to_vec()).collect(),
                initial: starts[run_id].clone(),
                converged_at: t.converged_at,
                terminal: t.terminal.to_vec(),
            }),
            Err(CoreError::NonFiniteState { time }) => Err(CliError::Numerical(format!(
                "run {run_id}: non-finite state at t = {time}"
            ))),
            Err(e) => Err(e.into()),
        })
        .collect()
}

pub fn simulate(cfg: &RunConfig) -> CliResult<Simulation> {
    cfg.validate()?;
    let p = cfg.params;
    let starts = cfg.resolve_states();
    let (kind, target) = attractor(&p, cfg.system);
    let integ = &cfg.integration;
    let runs = match cfg.system {
        System::Full => run_fixed(
            |x: &[f64; 5]| p.vf_full(&Compartments::from_array(*x)).to_array(),
            &starts,
            &target,
            integ,
        )?,
        System::Limit => run_fixed(
            |x: &[f64; 3]| p.vf_limit(&StateSci::from_array(*x)).to_array(),
            &starts,
            &target,
            integ,
        )?,
        System::Sir => run_fixed(
            |x: &[f64; 3]| p.vf_sir(&Compartments::from_array(*x)).to_array(),
            &starts,
            &target,
            integ,
        )?,
        System::Mir => run_fixed(
            |x: &[f64; 3]| p.vf_mir(&Compartments::from_array(*x)).to_array(),
            &starts,
            &target,
            integ,
        )?,
    };
    Ok(Simulation {
        system: cfg.system,
        columns: cfg.system.names().to_vec(),
        equilibrium_kind: kind,
        equilibrium: target,
        convergence_tol: integ.convergence_tol,
        t_end: integ.steps() as f64 * integ.h,
        runs,
    })
}

/// Like [`simulate`], but a phase portrait needs at least two curves.
pub fn phase(cfg: &RunConfig) -> CliResult<Simulation> {
    if cfg.initial_states.count() < 2 {
        return Err(CliError::Config(format!(
            "phase portrait needs at least 2 initial states, got {}",
            cfg.initial_states.count()
        )));
    }
    simulate(cfg)
}

fn trajectory_rows(run: &Run) -> impl Iterator<Item = Vec<String>> + '_ {
    run.times.iter().zip(&run.states).map(|(t, s)| {
        std::iter::once(fmt_f64(*t))
            .chain(s.iter().map(|x| fmt_f64(*x)))
            .collect()
    })
}

/// One trajectory file per run plus `summary.json` in `dir`.
pub fn write_simulation(sim: &Simulation, dir: &Path, format: Format) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut header = vec!["t"];
    header.extend(&sim.columns);
    let mut files = Vec::with_capacity(sim.runs.len());
    for run in &sim.runs {
        let name = match format {
            Format::Csv => format!("run_{:03}.csv", run.run_id),
            Format::Json => format!("run_{:03}.json", run.run_id),
        };
        let path = dir.join(&name);
        let out = sink(Some(&path))?;
        match format {
            Format::Csv => write_csv(out, &header, trajectory_rows(run))?,
            Format::Json => write_json(
                out,
                &json!({"columns": header, "t": run.times, "states": run.states}),
            )?,
        }
        files.push(name);
    }
    let mut summary = serde_json::to_value(sim).map_err(|e| CliError::Numerical(e.to_string()))?;
    if let Some(runs) = summary["runs"].as_array_mut() {
        for (r, f) in runs.iter_mut().zip(files) {
            r["file"] = json!(f);
        }
    }
    write_json(sink(Some(&dir.join("summary.json")))?, &summary)
}

/// All runs in one table, `run_id,t,<components>`, followed by the
/// equilibrium tagged `equilibrium`.
pub fn write_phase(sim: &Simulation, out: Option<&Path>, format: Format) -> CliResult<()> {
    let sink = sink(out)?;
    match format {
        Format::Csv => {
            let mut header = vec!["run_id", "t"];
            header.extend(&sim.columns);
            let runs = sim.runs.iter().flat_map(|run| {
                trajectory_rows(run).map(move |mut row| {
                    row.insert(0, run.run_id.to_string());
                    row
                })
            });
            let eq = std::iter::once(
                ["equilibrium".to_string(), fmt_f64(sim.t_end)]
                    .into_iter()
                    .chain(sim.equilibrium.iter().map(|x| fmt_f64(*x)))
                    .collect(),
            );
            write_csv(sink, &header, runs.chain(eq))
        }
        Format::Json => {
            let runs: Vec<_> = sim
                .runs
                .iter()
                .map(|r| json!({"run_id": r.run_id, "t": r.times, "states": r.states}))
                .collect();
            write_json(
                sink,
                &json!({"columns": sim.columns, "runs": runs, "equilibrium": sim.equilibrium}),
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub r0: f64,
    pub gas_holds: bool,
    pub legacy_2b: bool,
    pub converged_at: Option<f64>,
    pub verdict: String,
}

/// Simulation settings for a sweep; each value runs the limit system from
/// `n_init` sampled states and reports the slowest convergence time.
#[derive(Debug, Clone)]
pub struct SweepSimulation {
    pub integration: IntegrationConfig,
    pub n_init: usize,
    pub seed: u64,
}

pub fn sweep(
    spec: &SweepSpec,
    seed: u64,
    budget: usize,
    sim: Option<&SweepSimulation>,
) -> CliResult<Vec<SweepRow>> {
    spec.points()?
        .iter()
        .zip(&spec.values)
        .map(|(p, value)| {
            let report = check(p, seed, budget)?;
            let gas = gas_condition(p)?;
            let converged_at = match sim {
                None => None,
                Some(s) => {
                    let cfg = RunConfig {
                        params: *p,
                        system: System::Limit,
                        integration: s.integration,
                        initial_states: InitialStates::Sampled {
                            count: s.n_init,
                            seed: s.seed,
                        },
                        output_path: Default::default(),
                        output_format: Format::Csv,
                    };
                    let runs = simulate(&cfg)?.runs;
                    runs.iter()
                        .map(|r| r.converged_at)
                        .try_fold(0.0_f64, |m, t| t.map(|t| m.max(t)))
                }
            };
            Ok(SweepRow {
                value: *value,
                r0: report.r0,
                gas_holds: gas.holds,
                legacy_2b: report.report.legacy_2b_holds,
                converged_at,
                verdict: report.verdict.to_string(),
            })
        })
        .collect()
}

pub fn write_sweep(rows: &[SweepRow], out: Option<&Path>, format: Format) -> CliResult<()> {
    let sink = sink(out)?;
    match format {
        Format::Csv => write_csv(
            sink,
            &[
                "value",
                "r0",
                "gas_holds",
                "legacy_2b",
                "converged_at",
                "verdict",
            ],
            rows.iter().map(|r| {
                vec![
                    fmt_f64(r.value),
                    fmt_f64(r.r0),
                    r.gas_holds.to_string(),
                    r.legacy_2b.to_string(),
                    fmt_opt(r.converged_at),
                    r.verdict.clone(),
                ]
            }),
        ),
        Format::Json => write_json(sink, &rows),
    }
}

/// JSON by default; CSV gives flattened `key,value` rows.
pub fn write_report<T: Serialize>(value: &T, out: Option<&Path>, format: Format) -> CliResult<()> {
    let sink = sink(out)?;
    match format {
        Format::Json => write_json(sink, value),
        Format::Csv => {
            let v = serde_json::to_value(value).map_err(|e| CliError::Numerical(e.to_string()))?;
            write_csv(
                sink,
                &["key", "value"],
                flatten_json(&v).into_iter().map(|(k, v)| vec![k, v]),
            )
        }
    }
}
