//! Parameter files and run configuration.
//!
//! A params file is either flat `name = value` text (with `#` comments) or a
//! JSON object with the same keys.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use scirs::integrator::IntegrationConfig;
use scirs::model::PARAM_NAMES;
use scirs::{Compartments, ModelParams, ParamValues, StateMir, StateSci, StateScirn, StateSir};

use crate::{CliError, CliResult};

pub fn parse_params(text: &str) -> CliResult<ModelParams> {
    if text.trim_start().starts_with('{') {
        let values: ParamValues = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("params JSON: {e}")))?;
        return Ok(values.validate()?);
    }
    let mut seen: BTreeMap<&str, f64> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "line {}: expected `name = value`, got `{line}`",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let name = PARAM_NAMES.iter().find(|n| **n == key).ok_or_else(|| {
            CliError::Config(format!("line {}: unknown parameter `{key}`", lineno + 1))
        })?;
        let value: f64 = value.trim().parse().map_err(|_| {
            CliError::Config(format!(
                "invalid parameter `{key}`: `{}` is not a number",
                value.trim()
            ))
        })?;
        if seen.insert(name, value).is_some() {
            return Err(CliError::Config(format!("parameter `{key}` given twice")));
        }
    }
    let mut values = ParamValues {
        recruitment: 0.0,
        immunity_loss: 0.0,
        transmission: 0.0,
        vaccination: 0.0,
        mortality: 0.0,
        infectious_fraction: 0.0,
        infectious_recovery: 0.0,
        carrier_recovery: 0.0,
    };
    for name in PARAM_NAMES {
        let v = seen
            .get(name)
            .ok_or_else(|| CliError::Config(format!("missing parameter `{name}`")))?;
        *values.get_mut(name).expect("canonical name") = *v;
    }
    Ok(values.validate()?)
}

pub fn read_params(path: &Path) -> CliResult<ModelParams> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_params(&text)
}

/// Flat text form, canonical key order, shortest round-trip floats.
pub fn params_to_text(p: &ModelParams) -> String {
    PARAM_NAMES
        .iter()
        .map(|n| format!("{n} = {}\n", p.get(n).expect("canonical name")))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum System {
    Full,
    Limit,
    Sir,
    Mir,
}

impl System {
    pub fn dimension(self) -> usize {
        self.names().len()
    }

    pub fn names(self) -> &'static [&'static str] {
        match self {
            System::Full => &StateScirn::NAMES,
            System::Limit => &StateSci::NAMES,
            System::Sir => &StateSir::NAMES,
            System::Mir => &StateMir::NAMES,
        }
    }

    /// Image of a limit-system state in this formulation.
    pub fn embed(self, p: &ModelParams, s: &StateSci) -> Vec<f64> {
        match self {
            System::Full => s.to_full(p).to_array().to_vec(),
            System::Limit => s.to_array().to_vec(),
            System::Sir => s.to_sir(p).to_array().to_vec(),
            System::Mir => p.to_mir(&s.to_sir(p)).to_array().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialStates {
    Explicit(Vec<Vec<f64>>),
    Sampled { count: usize, seed: u64 },
}

impl InitialStates {
    pub fn count(&self) -> usize {
        match self {
            InitialStates::Explicit(v) => v.len(),
            InitialStates::Sampled { count, .. } => *count,
        }
    }

    /// Parses `x1,x2,...` into one state.
    pub fn parse_state(text: &str) -> CliResult<Vec<f64>> {
        text.split(',')
            .map(|t| {
                t.trim().parse::<f64>().map_err(|_| {
                    CliError::Config(format!(
                        "initial state `{text}`: `{}` is not a number",
                        t.trim()
                    ))
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub system: System,
    pub integration: IntegrationConfig,
    pub initial_states: InitialStates,
    pub output_path: PathBuf,
    pub output_format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.integration.validate()?;
        match &self.initial_states {
            InitialStates::Explicit(states) => {
                if states.is_empty() {
                    return Err(CliError::Config("no initial states given".into()));
                }
                let dim = self.system.dimension();
                for (k, s) in states.iter().enumerate() {
                    if s.len() != dim {
                        return Err(CliError::Config(format!(
                            "initial state {k} has {} components, system {:?} needs {dim}",
                            s.len(),
                            self.system
                        )));
                    }
                    if !s.iter().all(|x| x.is_finite()) {
                        return Err(CliError::Config(format!("initial state {k} is not finite")));
                    }
                }
            }
            InitialStates::Sampled { count, .. } if *count == 0 => {
                return Err(CliError::Config("--n-init must be at least 1".into()));
            }
            InitialStates::Sampled { .. } => {}
        }
        Ok(())
    }

    pub fn resolve_states(&self) -> Vec<Vec<f64>> {
        match &self.initial_states {
            InitialStates::Explicit(v) => v.clone(),
            InitialStates::Sampled { count, seed } => {
                scirs::integrator::sample_omega(&self.params, *count, *seed)
                    .iter()
                    .map(|s| self.system.embed(&self.params, s))
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub axis: String,
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn new(base: ModelParams, axis: &str, values: Vec<f64>) -> CliResult<Self> {
        if !PARAM_NAMES.contains(&axis) {
            return Err(CliError::Config(format!(
                "unknown sweep axis `{axis}` (expected one of {})",
                PARAM_NAMES.join(", ")
            )));
        }
        if values.is_empty() {
            return Err(CliError::Config("sweep needs at least one value".into()));
        }
        let spec = SweepSpec {
            base,
            axis: axis.to_string(),
            values,
        };
        spec.points()?;
        Ok(spec)
    }

    /// Parameter set for each value, in input order.
    pub fn points(&self) -> CliResult<Vec<ModelParams>> {
        self.values
            .iter()
            .map(|v| self.base.with(&self.axis, *v).map_err(CliError::from))
            .collect()
    }

    pub fn parse_values(text: &str) -> CliResult<Vec<f64>> {
        text.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim().parse::<f64>().map_err(|_| {
                    CliError::Config(format!("sweep value `{}` is not a number", t.trim()))
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use scirs::presets;

    const CASE1: &str = include_str!("../params/case1.params");

    #[test]
    fn bundled_file_matches_preset() {
        assert_eq!(parse_params(CASE1).unwrap(), presets::case1());
        let case2 = include_str!("../params/case2.params");
        assert_eq!(parse_params(case2).unwrap(), presets::case2());
    }

    #[test]
    fn json_alternative() {
        let p = presets::case1();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(parse_params(&json).unwrap(), p);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = CASE1.replace("delta = 0.9", "delta = 1.5");
        let msg = parse_params(&bad).unwrap_err().to_string();
        assert!(msg.contains("delta"), "{msg}");
        let missing = CASE1.replace("mu = 0.01", "");
        assert!(parse_params(&missing)
            .unwrap_err()
            .to_string()
            .contains("`mu`"));
        let typo = CASE1.replace("b_I", "b_i");
        assert!(parse_params(&typo).unwrap_err().to_string().contains("b_i"));
        let nan = CASE1.replace("a = 0.008", "a = x");
        assert!(parse_params(&nan).unwrap_err().to_string().contains("`a`"));
        let dup = format!("{CASE1}a = 0.1\n");
        assert!(parse_params(&dup).is_err());
        let json = r#"{"A":2,"epsilon":0.004,"a":0.008,"v":0.05,"mu":0.01,"delta":0.9,"b_I":0.1}"#;
        assert!(parse_params(json).unwrap_err().to_string().contains("b_C"));
    }

    #[test]
    fn sweep_rejects_unknown_axis_and_bad_values() {
        let p = presets::case1();
        assert!(SweepSpec::new(p, "beta", vec![0.1]).is_err());
        assert!(SweepSpec::new(p, "delta", vec![0.5, 1.0]).is_err());
        assert!(SweepSpec::new(p, "delta", vec![0.9, 0.99, 0.999999]).is_ok());
    }

    #[test]
    fn embedded_dimensions() {
        let p = presets::case1();
        let s = StateSci::new(10.0, 5.0, 3.0);
        for sys in [System::Full, System::Limit, System::Sir, System::Mir] {
            assert_eq!(sys.embed(&p, &s).len(), sys.dimension());
        }
    }
}

#[cfg(test)]
mod round_trip {
    use super::*;
    use proptest::prelude::*;

    fn arb_values() -> impl Strategy<Value = ParamValues> {
        (proptest::array::uniform7(1e-6..1e3f64), 1e-6..0.999_999f64).prop_map(|(r, delta)| {
            ParamValues {
                recruitment: r[0],
                immunity_loss: r[1],
                transmission: r[2],
                vaccination: r[3],
                mortality: r[4],
                infectious_fraction: delta,
                infectious_recovery: r[5],
                carrier_recovery: r[6],
            }
        })
    }

    proptest! {
        #[test]
        fn text_round_trip_is_idempotent(v in arb_values()) {
            let p = v.validate().unwrap();
            let text = params_to_text(&p);
            let back = parse_params(&text).unwrap();
            prop_assert_eq!(back, p);
            prop_assert_eq!(params_to_text(&back), text);
        }

        #[test]
        fn json_round_trip(v in arb_values()) {
            let p = v.validate().unwrap();
            let json = serde_json::to_string(&p).unwrap();
            prop_assert_eq!(parse_params(&json).unwrap(), p);
        }

        #[test]
        fn comments_and_order_do_not_matter(v in arb_values(), rot in 0usize..8) {
            let p = v.validate().unwrap();
            let mut lines: Vec<String> = params_to_text(&p).lines().map(|l| format!("  {l}   # note")).collect();
            lines.rotate_left(rot);
            let text = format!("# header\n\n{}\n", lines.join("\n"));
            prop_assert_eq!(parse_params(&text).unwrap(), p);
        }
    }
}
