use serde::Serialize;

use super::conditions::build_q;
use crate::error::{Error, Result};
use crate::model::{ModelParams, StateMir};

/// Positive weights of the Lyapunov function
/// `V = τ1(R − R2*)² + τ2(M − M2*)² + 2τ3(I − I2* − I2*·ln(I/I2*))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovWeights {
    tau1: f64,
    tau2: f64,
    tau3: f64,
}

impl LyapunovWeights {
    pub fn new(tau1: f64, tau2: f64, tau3: f64) -> Result<Self> {
        for (name, t) in [("tau1", tau1), ("tau2", tau2), ("tau3", tau3)] {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {t}")));
            }
        }
        Ok(LyapunovWeights { tau1, tau2, tau3 })
    }

    /// Weights from a diagonal certificate of the model matrix.
    ///
    /// The matrix rows are ordered as `(R, M, I)` deviations, so the
    /// derivative equals `X(QD + DQᵀ)Xᵀ` with `D = diag(τ1, τ2, τ3)`.
    pub fn from_certificate(d: [f64; 3]) -> Result<Self> {
        Self::new(d[0], d[1], d[2])
    }

    pub fn as_diagonal(&self) -> [f64; 3] {
        [self.tau1, self.tau2, self.tau3]
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    pub fn tau2(&self) -> f64 {
        self.tau2
    }

    pub fn tau3(&self) -> f64 {
        self.tau3
    }
}

fn check_domain(s: &StateMir) -> Result<()> {
    if s.i > 0.0 && s.i.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Lyapunov function needs I > 0, got {}",
            s.i
        )))
    }
}

/// Value of the Lyapunov function at `s`.
pub fn lyapunov_v(p: &ModelParams, w: &LyapunovWeights, s: &StateMir) -> Result<f64> {
    check_domain(s)?;
    let e = p.transformed_dee()?;
    // I/I* − 1 − ln(I/I*) written as u − ln(1 + u) to keep precision near I*
    let u = (s.i - e.i) / e.i;
    Ok(w.tau1 * (s.r - e.r).powi(2)
        + w.tau2 * (s.m - e.m).powi(2)
        + 2.0 * w.tau3 * e.i * (u - u.ln_1p()))
}

/// Time derivative of `V` along the transformed system, by the chain rule:
/// `2τ1(R − R2*)R' + 2τ2(M − M2*)M' + 2τ3(I − I2*)I'/I`.
pub fn lyapunov_dv(p: &ModelParams, w: &LyapunovWeights, s: &StateMir) -> Result<f64> {
    check_domain(s)?;
    let e = p.transformed_dee()?;
    let f = p.vf_mir(s);
    Ok(2.0 * w.tau1 * (s.r - e.r) * f.r
        + 2.0 * w.tau2 * (s.m - e.m) * f.m
        + 2.0 * w.tau3 * (s.i - e.i) * f.i / s.i)
}

/// Same derivative as the quadratic form `X(QD + DQᵀ)Xᵀ`, `X = (R − R2*, M − M2*, I − I2*)`.
pub fn lyapunov_dv_quadratic(p: &ModelParams, w: &LyapunovWeights, s: &StateMir) -> Result<f64> {
    check_domain(s)?;
    let e = p.transformed_dee()?;
    let x = [s.r - e.r, s.m - e.m, s.i - e.i];
    Ok(build_q(p).lyapunov_sum(w.as_diagonal()).quadratic_form(x))
}
