use serde::{Deserialize, Serialize};

use super::ModelParams;

/// Components in `[-ROUNDOFF_SLACK, 0)` are treated as zero by feasibility checks.
pub const ROUNDOFF_SLACK: f64 = 1e-12;

/// A fixed-size compartment vector that can be flattened for integration and output.
pub trait Compartments<const N: usize>: Copy {
    /// Column names used in CSV headers.
    const NAMES: [&'static str; N];

    fn to_array(&self) -> [f64; N];
    fn from_array(x: [f64; N]) -> Self;
}

macro_rules! state_type {
    ($(#[$doc:meta])* $name:ident, $n:literal, [$($field:ident => $label:literal),+]) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        pub struct $name {
            $(#[serde(rename = $label)] pub $field: f64,)+
        }

        impl $name {
            pub fn new($($field: f64),+) -> Self {
                Self { $($field),+ }
            }
        }

        impl Compartments<$n> for $name {
            const NAMES: [&'static str; $n] = [$($label),+];

            fn to_array(&self) -> [f64; $n] {
                [$(self.$field),+]
            }

            fn from_array(x: [f64; $n]) -> Self {
                let [$($field),+] = x;
                Self { $($field),+ }
            }
        }
    };
}

state_type!(
    /// State of the full five-equation model: susceptible, carrier, infectious,
    /// recovered and total node counts.
    StateScirn, 5, [s => "S", c => "C", i => "I", r => "R", n => "N"]
);
state_type!(
    /// State of the three-equation limit system on `N = A/μ`.
    StateSci, 3, [s => "S", c => "C", i => "I"]
);
state_type!(
    /// State of the sub-model where carriers are eliminated via `C = A/μ − S − I − R`.
    StateSir, 3, [s => "S", i => "I", r => "R"]
);
state_type!(
    /// State of the transformed system with `M = δS + I`.
    StateMir, 3, [m => "M", i => "I", r => "R"]
);

pub(crate) fn clamp_roundoff(x: f64) -> f64 {
    if (-ROUNDOFF_SLACK..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

pub(crate) fn max_abs<const N: usize>(x: [f64; N]) -> f64 {
    x.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

impl StateSci {
    /// Completes the state to the full system on the invariant plane `N = A/μ`.
    pub fn to_full(&self, p: &ModelParams) -> StateScirn {
        let n = p.carrying_population();
        StateScirn::new(self.s, self.c, self.i, n - self.s - self.c - self.i, n)
    }

    pub fn to_sir(&self, p: &ModelParams) -> StateSir {
        StateSir::new(
            self.s,
            self.i,
            p.carrying_population() - self.s - self.c - self.i,
        )
    }
}

impl StateSir {
    pub fn to_sci(&self, p: &ModelParams) -> StateSci {
        StateSci::new(
            self.s,
            p.carrying_population() - self.s - self.i - self.r,
            self.i,
        )
    }
}

impl StateScirn {
    pub fn to_sci(&self) -> StateSci {
        StateSci::new(self.s, self.c, self.i)
    }
}

impl StateMir {
    /// Inverse of [`ModelParams::to_mir`].
    pub fn to_sir(&self, p: &ModelParams) -> StateSir {
        StateSir::new((self.m - self.i) / p.infectious_fraction(), self.i, self.r)
    }
}

impl ModelParams {
    /// Maps a sub-model state to the transformed coordinates `(δS + I, I, R)`.
    pub fn to_mir(&self, s: &StateSir) -> StateMir {
        StateMir::new(self.infectious_fraction() * s.s + s.i, s.i, s.r)
    }

    /// Membership in the feasible region `{S, C, I ≥ 0, S + C + I ≤ A/μ}`.
    pub fn in_omega(&self, s: &StateSci) -> bool {
        let n = self.carrying_population();
        let x = s.to_array().map(clamp_roundoff);
        x.iter().all(|v| *v >= 0.0) && x.iter().sum::<f64>() <= n * (1.0 + ROUNDOFF_SLACK)
    }

    /// Membership in the sub-model feasible region `{S, I, R ≥ 0, S + I + R ≤ A/μ}`.
    pub fn in_omega_sir(&self, s: &StateSir) -> bool {
        let n = self.carrying_population();
        let x = s.to_array().map(clamp_roundoff);
        x.iter().all(|v| *v >= 0.0) && x.iter().sum::<f64>() <= n * (1.0 + ROUNDOFF_SLACK)
    }

    /// Membership in `{0 ≤ M ≤ A/μ, I, R ≥ 0, I + R ≤ A/μ}`.
    pub fn in_omega_star(&self, s: &StateMir) -> bool {
        let bound = self.carrying_population() * (1.0 + ROUNDOFF_SLACK);
        let [m, i, r] = s.to_array().map(clamp_roundoff);
        m >= 0.0 && i >= 0.0 && r >= 0.0 && m <= bound && i + r <= bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::presets;

    #[test]
    fn to_mir_examples() {
        let p = presets::case1();
        let m = p.to_mir(&StateSir::new(10.0, 1.0, 5.0));
        assert!((m.m - 10.0).abs() < 1e-12);
        assert_eq!((m.i, m.r), (1.0, 5.0));
        assert_eq!(
            p.to_mir(&StateSir::new(0.0, 0.0, 0.0)),
            StateMir::new(0.0, 0.0, 0.0)
        );
        let back = m.to_sir(&p);
        assert!((back.s - 10.0).abs() < 1e-12);
    }

    #[test]
    fn omega_membership() {
        let p = presets::case1();
        assert!(p.in_omega(&StateSci::new(0.0, 0.0, 0.0)));
        assert!(!p.in_omega(&StateSci::new(201.0, 0.0, 0.0)));
        assert!(!p.in_omega(&StateSci::new(-1.0, 0.0, 0.0)));
        assert!(p.in_omega(&StateSci::new(200.0, 0.0, 0.0)));
        // roundoff-sized negatives are clamped
        assert!(p.in_omega(&StateSci::new(-1e-13, 5.0, 5.0)));
    }

    #[test]
    fn omega_star_membership() {
        let p = presets::case1();
        assert!(p.in_omega_star(&StateMir::new(0.0, 0.0, 0.0)));
        assert!(!p.in_omega_star(&StateMir::new(200.0, 150.0, 100.0)));
        assert!(!p.in_omega_star(&StateMir::new(201.0, 0.0, 0.0)));
        assert!(!p.in_omega_star(&StateMir::new(10.0, -1.0, 0.0)));
    }

    #[test]
    fn compartment_names() {
        assert_eq!(StateScirn::NAMES, ["S", "C", "I", "R", "N"]);
        assert_eq!(StateMir::NAMES, ["M", "I", "R"]);
        let s = StateSci::from_array([1.0, 2.0, 3.0]);
        assert_eq!(s.to_array(), [1.0, 2.0, 3.0]);
    }
}
