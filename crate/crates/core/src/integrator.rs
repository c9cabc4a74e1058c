//! Fixed-step classical Runge-Kutta integration and trajectory recording.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ModelParams, StateSci};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_T_END: f64 = 2000.0;
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    pub h: f64,
    pub t_end: f64,
    /// Number of steps between recorded samples.
    pub record_stride: usize,
    /// Max-norm distance to the target that counts as converged.
    pub convergence_tol: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self::with_step(DEFAULT_STEP, DEFAULT_T_END)
    }
}

impl IntegrationConfig {
    /// Config recording roughly one sample per unit time.
    pub fn with_step(h: f64, t_end: f64) -> Self {
        IntegrationConfig {
            h,
            t_end,
            record_stride: ((1.0 / h).round() as usize).max(1),
            convergence_tol: DEFAULT_CONVERGENCE_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "h must be positive, got {}",
                self.h
            )));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidConfig(
                "record_stride must be at least 1".into(),
            ));
        }
        if self.convergence_tol.is_nan() || self.convergence_tol < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "convergence_tol must be non-negative, got {}",
                self.convergence_tol
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.h).round() as usize
    }
}

/// Recorded samples of one integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    /// Sample times, spaced `h · record_stride` apart starting at 0.
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    /// First recorded time within tolerance of the target, if any.
    pub converged_at: Option<f64>,
    /// State at `t_end`, whether or not it falls on the recording grid.
    pub terminal: [f64; N],
    pub t_end: f64,
}

impl<const N: usize> Trajectory<N> {
    pub fn dimension(&self) -> usize {
        N
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

pub(crate) fn max_distance<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

#[inline]
fn axpy<const N: usize>(s: &[f64; N], k: &[f64; N], h: f64) -> [f64; N] {
    std::array::from_fn(|j| s[j] + h * k[j])
}

fn step<const N: usize, F>(field: &F, s: &[f64; N], h: f64) -> Option<[f64; N]>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let finite = |x: &[f64; N]| x.iter().all(|v| v.is_finite());
    let k1 = field(s);
    let k2 = field(&axpy(s, &k1, 0.5 * h));
    let k3 = field(&axpy(s, &k2, 0.5 * h));
    let k4 = field(&axpy(s, &k3, h));
    if !(finite(&k1) && finite(&k2) && finite(&k3) && finite(&k4)) {
        return None;
    }
    let next =
        std::array::from_fn(|j| s[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
    finite(&next).then_some(next)
}

/// One classical RK4 step of an autonomous field.
///
/// On failure the reported time is `h`, i.e. the end of this step measured
/// from its start.
pub fn rk4_step<const N: usize, F>(field: F, s: &[f64; N], h: f64) -> Result<[f64; N]>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    step(&field, s, h).ok_or(Error::NonFiniteState { time: h })
}

/// Integrates from `s0` over `[0, t_end]`, recording every
/// `record_stride`-th state. When `target` is given, `converged_at` is the
/// first recorded time with max-norm distance at most `convergence_tol`.
pub fn integrate<const N: usize, F>(
    field: F,
    s0: [f64; N],
    cfg: &IntegrationConfig,
    target: Option<&[f64; N]>,
) -> Result<Trajectory<N>>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    cfg.validate()?;
    if !s0.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteState { time: 0.0 });
    }
    let steps = cfg.steps().max(1);
    let capacity = steps / cfg.record_stride + 1;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut converged_at = None;

    let mut record = |t: f64, s: &[f64; N], converged_at: &mut Option<f64>| {
        times.push(t);
        states.push(*s);
        if converged_at.is_none() {
            if let Some(target) = target {
                if max_distance(s, target) <= cfg.convergence_tol {
                    *converged_at = Some(t);
                }
            }
        }
    };

    let mut s = s0;
    record(0.0, &s, &mut converged_at);
    for k in 1..=steps {
        let t = k as f64 * cfg.h;
        s = step(&field, &s, cfg.h).ok_or(Error::NonFiniteState { time: t })?;
        if k % cfg.record_stride == 0 {
            record(t, &s, &mut converged_at);
        }
    }
    Ok(Trajectory {
        times,
        states,
        converged_at,
        terminal: s,
        t_end: steps as f64 * cfg.h,
    })
}

/// Runs [`integrate`] for each initial state on scoped worker threads;
/// results keep input order.
pub fn integrate_many<const N: usize, F>(
    field: F,
    starts: &[[f64; N]],
    cfg: &IntegrationConfig,
    target: Option<&[f64; N]>,
) -> Vec<Result<Trajectory<N>>>
where
    F: Fn(&[f64; N]) -> [f64; N] + Sync,
{
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(starts.len().max(1));
    let chunk = starts.len().div_ceil(workers).max(1);
    let field = &field;
    std::thread::scope(|scope| {
        let handles: Vec<_> = starts
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|s0| integrate(field, *s0, cfg, target))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("integration worker panicked"))
            .collect()
    })
}

/// First recorded time within `tol` (max-norm) of `target`.
pub fn converge_time<const N: usize>(
    traj: &Trajectory<N>,
    target: &[f64; N],
    tol: f64,
) -> Option<f64> {
    traj.times
        .iter()
        .zip(&traj.states)
        .find(|(_, s)| max_distance(s, target) <= tol)
        .map(|(t, _)| *t)
}

/// `n` states drawn uniformly from `{S, C, I ≥ 0, S + C + I ≤ A/μ}`,
/// deterministic for a given seed.
pub fn sample_omega(p: &ModelParams, n: usize, seed: u64) -> Vec<StateSci> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = p.carrying_population();
    (0..n)
        .map(|_| {
            // Dirichlet(1,1,1,1) from normalised unit exponentials; the
            // fourth coordinate is the slack below A/μ.
            let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
            let total: f64 = e.iter().sum();
            StateSci::new(
                scale * e[0] / total,
                scale * e[1] / total,
                scale * e[2] / total,
            )
        })
        .collect()
}
