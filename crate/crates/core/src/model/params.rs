use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw parameter values as they appear in a parameter file, before validation.
///
/// Field names on the wire are the conventional symbols: `A`, `epsilon`, `a`,
/// `v`, `mu`, `delta`, `b_I`, `b_C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamValues {
    #[serde(rename = "A")]
    pub recruitment: f64,
    #[serde(rename = "epsilon")]
    pub immunity_loss: f64,
    #[serde(rename = "a")]
    pub transmission: f64,
    #[serde(rename = "v")]
    pub vaccination: f64,
    #[serde(rename = "mu")]
    pub mortality: f64,
    #[serde(rename = "delta")]
    pub infectious_fraction: f64,
    #[serde(rename = "b_I")]
    pub infectious_recovery: f64,
    #[serde(rename = "b_C")]
    pub carrier_recovery: f64,
}

/// A validated instance of the eight model rates.
///
/// All rates are strictly positive and finite, and the infectious fraction
/// lies in the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamValues", into = "ParamValues")]
pub struct ModelParams {
    values: ParamValues,
}

/// Parameter names in canonical file order.
pub const PARAM_NAMES: [&str; 8] = ["A", "epsilon", "a", "v", "mu", "delta", "b_I", "b_C"];

impl ParamValues {
    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "A" => self.recruitment,
            "epsilon" => self.immunity_loss,
            "a" => self.transmission,
            "v" => self.vaccination,
            "mu" => self.mortality,
            "delta" => self.infectious_fraction,
            "b_I" => self.infectious_recovery,
            "b_C" => self.carrier_recovery,
            _ => return None,
        })
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "A" => &mut self.recruitment,
            "epsilon" => &mut self.immunity_loss,
            "a" => &mut self.transmission,
            "v" => &mut self.vaccination,
            "mu" => &mut self.mortality,
            "delta" => &mut self.infectious_fraction,
            "b_I" => &mut self.infectious_recovery,
            "b_C" => &mut self.carrier_recovery,
            _ => return None,
        })
    }

    pub fn validate(self) -> Result<ModelParams> {
        for name in PARAM_NAMES {
            let value = self.get(name).expect("canonical name");
            if !value.is_finite() {
                return Err(Error::param(name, format!("must be finite, got {value}")));
            }
            if value <= 0.0 {
                return Err(Error::param(
                    name,
                    format!("must be strictly positive, got {value}"),
                ));
            }
        }
        if self.infectious_fraction >= 1.0 {
            return Err(Error::param(
                "delta",
                format!(
                    "must lie in the open interval (0, 1), got {}",
                    self.infectious_fraction
                ),
            ));
        }
        Ok(ModelParams { values: self })
    }
}

impl TryFrom<ParamValues> for ModelParams {
    type Error = Error;

    fn try_from(values: ParamValues) -> Result<Self> {
        values.validate()
    }
}

impl From<ModelParams> for ParamValues {
    fn from(p: ModelParams) -> Self {
        p.values
    }
}

impl ModelParams {
    pub fn values(&self) -> ParamValues {
        self.values
    }

    /// Returns a copy with one named parameter replaced, re-validated.
    pub fn with(&self, name: &str, value: f64) -> Result<Self> {
        let mut values = self.values;
        let slot = values
            .get_mut(name)
            .ok_or_else(|| Error::param(name, "unknown parameter name"))?;
        *slot = value;
        values.validate()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name)
    }

    /// Node recruitment rate `A`.
    pub fn recruitment(&self) -> f64 {
        self.values.recruitment
    }

    /// Loss-of-immunity rate `ε`.
    pub fn immunity_loss(&self) -> f64 {
        self.values.immunity_loss
    }

    /// Transmission coefficient `a`.
    pub fn transmission(&self) -> f64 {
        self.values.transmission
    }

    /// Vaccination rate `v`.
    pub fn vaccination(&self) -> f64 {
        self.values.vaccination
    }

    /// Death / retirement rate `μ`.
    pub fn mortality(&self) -> f64 {
        self.values.mortality
    }

    /// Fraction of new infections that become infectious (the rest become carriers), `δ`.
    pub fn infectious_fraction(&self) -> f64 {
        self.values.infectious_fraction
    }

    /// Recovery rate of infectious nodes `b_I`.
    pub fn infectious_recovery(&self) -> f64 {
        self.values.infectious_recovery
    }

    /// Recovery rate of carrier nodes `b_C`.
    pub fn carrier_recovery(&self) -> f64 {
        self.values.carrier_recovery
    }

    /// Limiting total population `N* = A/μ`.
    pub fn carrying_population(&self) -> f64 {
        self.values.recruitment / self.values.mortality
    }

    /// Reinfection-weighted coefficient `b_C/δ − b_C + b_I − v/δ` that couples
    /// infectious deviations into the recovered equation of the transformed system.
    pub fn coupling_coefficient(&self) -> f64 {
        let ParamValues {
            vaccination: v,
            infectious_fraction: delta,
            infectious_recovery: b_i,
            carrier_recovery: b_c,
            ..
        } = self.values;
        b_c / delta - b_c + b_i - v / delta
    }
}

/// Parameter sets used in the published numerical examples.
pub mod presets {
    use super::{ModelParams, ParamValues};

    /// Endemic case where the stability condition holds; R0 ≈ 2.8636.
    pub fn case1() -> ModelParams {
        ParamValues {
            recruitment: 2.0,
            immunity_loss: 0.004,
            transmission: 0.008,
            vaccination: 0.05,
            mortality: 0.01,
            infectious_fraction: 0.9,
            infectious_recovery: 0.1,
            carrier_recovery: 0.005,
        }
        .validate()
        .expect("preset is valid")
    }

    /// Second endemic case; R0 ≈ 1.4286.
    pub fn case2() -> ModelParams {
        ParamValues {
            recruitment: 2.0,
            immunity_loss: 0.002,
            transmission: 0.001,
            vaccination: 0.03,
            mortality: 0.01,
            infectious_fraction: 0.5,
            infectious_recovery: 0.01,
            carrier_recovery: 0.05,
        }
        .validate()
        .expect("preset is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_delta_endpoints() {
        let base = presets::case1();
        for bad in [0.0, 1.0, 1.5, -0.2] {
            let err = base.with("delta", bad).unwrap_err();
            match err {
                Error::InvalidParameter { field, .. } => assert_eq!(field, "delta"),
                other => panic!("unexpected {other:?}"),
            }
        }
        assert!(base.with("delta", 0.999_999).is_ok());
    }

    #[test]
    fn rejects_nonpositive_and_nonfinite() {
        let base = presets::case1();
        assert!(base.with("mu", 0.0).is_err());
        assert!(base.with("A", -1.0).is_err());
        assert!(base.with("b_C", f64::NAN).is_err());
        assert!(base.with("epsilon", f64::INFINITY).is_err());
        assert!(base.with("gamma", 1.0).is_err());
    }

    #[test]
    fn carrying_population_and_coupling() {
        let p = presets::case1();
        assert_eq!(p.carrying_population(), 200.0);
        assert!((p.coupling_coefficient() - 0.045).abs() < 1e-15);
        // Second published case sits exactly on the vanishing-coupling line.
        assert!(presets::case2().coupling_coefficient().abs() < 1e-15);
    }
}
