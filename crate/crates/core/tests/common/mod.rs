#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scirs::{Compartments, ModelParams, ParamValues, StateMir, StateSci, StateSir};

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

/// Valid parameters spanning several orders of magnitude.
pub fn params() -> impl Strategy<Value = ModelParams> {
    (
        log_uniform(0.1, 10.0),
        proptest::array::uniform6(log_uniform(1e-3, 1.0)),
        0.01..0.99f64,
    )
        .prop_map(|(big_a, r, delta)| {
            ParamValues {
                recruitment: big_a,
                immunity_loss: r[0],
                transmission: r[1],
                vaccination: r[2],
                mortality: r[3],
                infectious_fraction: delta,
                infectious_recovery: r[4],
                carrier_recovery: r[5],
            }
            .validate()
            .unwrap()
        })
}

pub fn endemic_params() -> impl Strategy<Value = ModelParams> {
    params().prop_filter("R0 > 1", |p| p.reproduction_number() > 1.0)
}

/// Same distribution as [`params`], drawn from a seeded generator for
/// sweeps that need a fixed number of accepted samples.
pub fn draw_params(rng: &mut ChaCha8Rng) -> ModelParams {
    let mut lu = |lo: f64, hi: f64| rng.random_range(f64::ln(lo)..f64::ln(hi)).exp();
    let big_a = lu(0.1, 10.0);
    let r: [f64; 6] = std::array::from_fn(|_| lu(1e-3, 1.0));
    ParamValues {
        recruitment: big_a,
        immunity_loss: r[0],
        transmission: r[1],
        vaccination: r[2],
        mortality: r[3],
        infectious_fraction: rng.random_range(0.01..0.99),
        infectious_recovery: r[4],
        carrier_recovery: r[5],
    }
    .validate()
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn limit_field(p: ModelParams) -> impl Fn(&[f64; 3]) -> [f64; 3] + Sync {
    move |x| p.vf_limit(&StateSci::from_array(*x)).to_array()
}

pub fn sir_field(p: ModelParams) -> impl Fn(&[f64; 3]) -> [f64; 3] + Sync {
    move |x| p.vf_sir(&StateSir::from_array(*x)).to_array()
}

pub fn mir_field(p: ModelParams) -> impl Fn(&[f64; 3]) -> [f64; 3] + Sync {
    move |x| p.vf_mir(&StateMir::from_array(*x)).to_array()
}

pub fn full_field(p: ModelParams) -> impl Fn(&[f64; 5]) -> [f64; 5] + Sync {
    move |x| p.vf_full(&scirs::StateScirn::from_array(*x)).to_array()
}
