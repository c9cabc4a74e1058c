//! Model parameters, state vectors, vector fields, feasible sets and equilibria.

mod equilibria;
mod fields;
mod params;
mod state;

pub use equilibria::{EquilibriumReport, ResidualNorms, RESIDUAL_TOL};
pub use params::{presets, ModelParams, ParamValues, PARAM_NAMES};
pub use state::{Compartments, StateMir, StateSci, StateScirn, StateSir, ROUNDOFF_SLACK};
