//! SCIRS malware-propagation model for wireless sensor networks.
//!
//! The crate covers three concerns:
//!
//! * [`model`]: rates, the four equivalent system formulations, feasible
//!   regions, the basic reproduction number and closed-form equilibria.
//! * [`stability`]: the 3×3 matrix governing the Lyapunov derivative around
//!   the endemic equilibrium, Volterra-Lyapunov stability tests for it, an
//!   explicit sufficient condition for global stability, diagonal certificate
//!   search and the Lyapunov function itself.
//! * [`integrator`]: fixed-step classical RK4 with trajectory recording and
//!   convergence detection.

pub mod error;
pub mod integrator;
pub mod model;
pub mod stability;

pub use error::{Error, Result};
pub use model::{
    presets, Compartments, EquilibriumReport, ModelParams, ParamValues, StateMir, StateSci,
    StateScirn, StateSir,
};
