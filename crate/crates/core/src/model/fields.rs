//! Right-hand sides of the four equivalent formulations of the model.

use super::{ModelParams, StateMir, StateSci, StateScirn, StateSir};

impl ModelParams {
    /// Full five-compartment system including the total-population equation.
    pub fn vf_full(&self, x: &StateScirn) -> StateScirn {
        let (big_a, eps, a, v, mu, delta, b_i, b_c) = self.symbols();
        let StateScirn { s, c, i, r, n } = *x;
        let incidence = a * i * s;
        StateScirn {
            s: big_a + eps * r - incidence - v * s - mu * s,
            c: (1.0 - delta) * incidence - b_c * c - mu * c,
            i: delta * incidence - b_i * i - mu * i,
            r: b_c * c + b_i * i + v * s - eps * r - mu * r,
            n: big_a - mu * n,
        }
    }

    /// Limit system on `N = A/μ`, with `R` eliminated.
    pub fn vf_limit(&self, x: &StateSci) -> StateSci {
        let (big_a, eps, a, v, mu, delta, b_i, b_c) = self.symbols();
        let n_star = self.carrying_population();
        let StateSci { s, c, i } = *x;
        let incidence = a * i * s;
        StateSci {
            s: big_a + eps * (n_star - s - c - i) - incidence - v * s - mu * s,
            c: (1.0 - delta) * incidence - b_c * c - mu * c,
            i: delta * incidence - b_i * i - mu * i,
        }
    }

    /// Sub-model with carriers eliminated via `C = A/μ − S − I − R`.
    pub fn vf_sir(&self, x: &StateSir) -> StateSir {
        let (big_a, eps, a, v, mu, delta, b_i, b_c) = self.symbols();
        let n_star = self.carrying_population();
        let StateSir { s, i, r } = *x;
        StateSir {
            s: big_a + eps * r - a * i * s - v * s - mu * s,
            i: a * delta * i * s - b_i * i - mu * i,
            r: b_c * (n_star - s - i - r) + b_i * i + v * s - eps * r - mu * r,
        }
    }

    /// Transformed system in `(M, I, R)` with `M = δS + I`.
    pub fn vf_mir(&self, x: &StateMir) -> StateMir {
        let (big_a, eps, a, v, mu, delta, b_i, b_c) = self.symbols();
        let n_star = self.carrying_population();
        let StateMir { m, i, r } = *x;
        let s = (m - i) / delta;
        StateMir {
            m: delta * big_a + delta * eps * r - (v + mu) * m + (v - b_i) * i,
            i: a * (m - i) * i - b_i * i - mu * i,
            r: b_c * (n_star - s - i - r) + b_i * i + v * s - eps * r - mu * r,
        }
    }

    /// `(A, ε, a, v, μ, δ, b_I, b_C)` for use in closed-form expressions.
    pub(crate) fn symbols(&self) -> (f64, f64, f64, f64, f64, f64, f64, f64) {
        let v = self.values();
        (
            v.recruitment,
            v.immunity_loss,
            v.transmission,
            v.vaccination,
            v.mortality,
            v.infectious_fraction,
            v.infectious_recovery,
            v.carrier_recovery,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::presets;

    #[test]
    fn no_transmission_without_infectious_nodes() {
        let p = presets::case1();
        let d = p.vf_full(&StateScirn::new(50.0, 7.0, 0.0, 30.0, 120.0));
        assert!((d.c + (0.005 + 0.01) * 7.0).abs() < 1e-15);
        assert_eq!(d.i, 0.0);
        assert_eq!(p.vf_sir(&StateSir::new(50.0, 0.0, 10.0)).i, 0.0);
        assert_eq!(p.vf_mir(&StateMir::new(50.0, 0.0, 10.0)).i, 0.0);
    }

    #[test]
    fn population_equation_at_rest() {
        let p = presets::case1();
        let d = p.vf_full(&StateScirn::new(10.0, 20.0, 30.0, 140.0, 200.0));
        assert_eq!(d.n, 0.0);
    }

    #[test]
    fn limit_matches_full_on_invariant_plane() {
        let p = presets::case1();
        let x = StateSci::new(150.0, 20.0, 20.0);
        let lim = p.vf_limit(&x);
        let full = p.vf_full(&x.to_full(&p));
        assert!((lim.s - full.s).abs() < 1e-12);
        assert!((lim.c - full.c).abs() < 1e-12);
        assert!((lim.i - full.i).abs() < 1e-12);
    }

    #[test]
    fn sir_matches_limit_under_substitution() {
        let p = presets::case1();
        let x = StateSir::new(150.0, 20.0, 10.0);
        let sir = p.vf_sir(&x);
        let sci = x.to_sci(&p);
        let lim = p.vf_limit(&sci);
        let full = p.vf_full(&sci.to_full(&p));
        assert!((sir.s - lim.s).abs() < 1e-12);
        assert!((sir.i - lim.i).abs() < 1e-12);
        assert!((sir.r - full.r).abs() < 1e-12);
    }

    #[test]
    fn mir_is_chain_rule_image_of_sir() {
        let p = presets::case1();
        let delta = p.infectious_fraction();
        for x in [
            StateSir::new(150.0, 20.0, 10.0),
            StateSir::new(3.0, 40.0, 100.0),
            StateSir::new(0.0, 0.0, 0.0),
        ] {
            let sir = p.vf_sir(&x);
            let mir = p.vf_mir(&p.to_mir(&x));
            assert!((mir.m - (delta * sir.s + sir.i)).abs() < 1e-12);
            assert!((mir.i - sir.i).abs() < 1e-12);
            assert!((mir.r - sir.r).abs() < 1e-12);
        }
    }
}
