//! Stability analysis of the endemic equilibrium.

mod certificate;
mod conditions;
mod lyapunov;
mod matrix;

pub use certificate::{find_diagonal_d, volterra_lyapunov_check, VlCheck, DEFAULT_SEARCH_BUDGET};
pub use conditions::{
    build_q, gas_condition, legacy_condition_2a, legacy_condition_2b, omega1_interval,
    omega1_threshold, omega2_interval, p1_eval, p1_region, p2_coefficients, p2_eval, p2_region,
    GasCondition, Interval, CONDITION_AGREEMENT_TOL,
};
pub use lyapunov::{lyapunov_dv, lyapunov_dv_quadratic, lyapunov_v, LyapunovWeights};
pub use matrix::{
    is_class_p, is_negative_definite, signed_principal_minors, Matrix3, MinorSet,
    DEFINITENESS_MARGIN, SYMMETRY_TOL,
};

use serde::Serialize;

use crate::error::Result;
use crate::model::ModelParams;

/// Everything the stability analysis produces for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub q: Matrix3,
    pub minors: MinorSet,
    pub in_class_p: bool,
    pub omega1: Interval,
    pub omega2: Interval,
    pub gas_holds: bool,
    pub gas_lhs: f64,
    pub gas_rhs: f64,
    pub witness_y: Option<f64>,
    pub certificate_d: Option<[f64; 3]>,
    pub legacy_2b_holds: bool,
}

impl StabilityReport {
    pub fn analyze(p: &ModelParams, seed: u64, budget: usize) -> Result<Self> {
        let q = build_q(p);
        let (minors, in_class_p) = signed_principal_minors(&q);
        let gas = gas_condition(p)?;
        let vl = volterra_lyapunov_check(&q);
        let certificate_d = if vl.stable {
            find_diagonal_d(&q, seed, budget)
        } else {
            None
        };
        Ok(StabilityReport {
            q,
            minors,
            in_class_p,
            omega1: omega1_interval(p),
            omega2: omega2_interval(p),
            gas_holds: gas.holds,
            gas_lhs: gas.lhs,
            gas_rhs: gas.rhs,
            witness_y: vl.witness_y,
            certificate_d,
            legacy_2b_holds: legacy_condition_2b(p),
        })
    }

    /// Whether a certificate is present and passes the Sylvester check.
    pub fn certificate_verified(&self) -> bool {
        self.certificate_d
            .map(|d| is_negative_definite(&self.q.lyapunov_sum(d)).unwrap_or(false))
            .unwrap_or(false)
    }
}
