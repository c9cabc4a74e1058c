use serde::Serialize;

use super::state::max_abs;
use super::{Compartments, ModelParams, StateMir, StateSci, StateSir};
use crate::error::{Error, Result};

/// Equilibrium residuals are accepted below `RESIDUAL_TOL · A/μ` in max-norm.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualNorms {
    pub dfe: f64,
    pub dee: Option<f64>,
    pub dee_sir: Option<f64>,
    pub dee_mir: Option<f64>,
}

impl ResidualNorms {
    pub fn max(&self) -> f64 {
        [Some(self.dfe), self.dee, self.dee_sir, self.dee_mir]
            .into_iter()
            .flatten()
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub r0: f64,
    pub dfe: StateSci,
    pub dee: Option<StateSci>,
    pub dee_sir: Option<StateSir>,
    pub dee_mir: Option<StateMir>,
    /// Largest residual over all reported equilibria.
    pub residual_norm: f64,
    pub residuals: ResidualNorms,
}

impl ModelParams {
    /// Basic reproduction number `aδ(A + N*ε) / ((b_I + μ)(v + ε + μ))`.
    pub fn reproduction_number(&self) -> f64 {
        let (big_a, eps, a, v, mu, delta, b_i, _) = self.symbols();
        let n_star = self.carrying_population();
        a * delta * (big_a + n_star * eps) / ((b_i + mu) * (v + eps + mu))
    }

    /// Disease-free equilibrium `(S0, 0, 0)` of the limit system.
    pub fn dfe(&self) -> StateSci {
        let (big_a, eps, _, v, mu, ..) = self.symbols();
        let n_star = self.carrying_population();
        StateSci::new((big_a + n_star * eps) / (v + eps + mu), 0.0, 0.0)
    }

    /// `(ξ, Den)` where `ξ = −aδ(A + N*ε) + (b_I + μ)(v + ε + μ)` and `Den` is
    /// the common denominator of the endemic closed forms.
    fn endemic_factors(&self) -> (f64, f64) {
        let (big_a, eps, a, v, mu, delta, b_i, b_c) = self.symbols();
        let n_star = self.carrying_population();
        let xi = -a * delta * (big_a + n_star * eps) + b_i * (v + eps + mu) + mu * (v + eps + mu);
        let den = mu * (eps + mu) + b_i * (eps - delta * eps + mu) + b_c * (b_i + delta * eps + mu);
        (xi, den)
    }

    fn require_endemic(&self) -> Result<()> {
        let r0 = self.reproduction_number();
        if r0 > 1.0 {
            Ok(())
        } else {
            Err(Error::NoEndemicEquilibrium { r0 })
        }
    }

    /// Disease-endemic equilibrium `(S*, C*, I*)`, present only when `R0 > 1`.
    pub fn dee(&self) -> Result<StateSci> {
        self.require_endemic()?;
        let (_, _, a, _, mu, delta, b_i, b_c) = self.symbols();
        let (xi, den) = self.endemic_factors();
        let s = (b_i + mu) / (a * delta);
        let c = (delta - 1.0) * (b_i + mu) * xi / (a * delta * den);
        let i = -(b_c + mu) * xi / (a * den);
        Ok(StateSci::new(s, c, i))
    }

    /// Endemic equilibrium `E2* = (M2*, I2*, R2*)` of the transformed system.
    pub fn transformed_dee(&self) -> Result<StateMir> {
        let e = self.dee()?;
        let (_, _, a, _, mu, _, b_i, b_c) = self.symbols();
        let (xi, den) = self.endemic_factors();
        let i2 = -(b_c + mu) * xi / (a * den);
        let m2 = (b_i + mu) / a + i2;
        let r2 = self.carrying_population() - e.s - e.i - e.c;
        Ok(StateMir::new(m2, i2, r2))
    }

    pub fn equilibrium_report(&self) -> EquilibriumReport {
        let r0 = self.reproduction_number();
        let dfe = self.dfe();
        let dee = self.dee().ok();
        let dee_sir = dee.map(|e| e.to_sir(self));
        let dee_mir = self.transformed_dee().ok();
        let residuals = ResidualNorms {
            dfe: max_abs(self.vf_limit(&dfe).to_array()),
            dee: dee.map(|e| max_abs(self.vf_limit(&e).to_array())),
            dee_sir: dee_sir.map(|e| max_abs(self.vf_sir(&e).to_array())),
            dee_mir: dee_mir.map(|e| max_abs(self.vf_mir(&e).to_array())),
        };
        EquilibriumReport {
            r0,
            dfe,
            dee,
            dee_sir,
            dee_mir,
            residual_norm: residuals.max(),
            residuals,
        }
    }
}
