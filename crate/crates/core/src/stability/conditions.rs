use serde::{Serialize, Serializer};

use super::matrix::{Matrix3, MinorSet};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Relative slack below which the closed-form and interval forms of the
/// stability condition are allowed to disagree (a near-tie).
pub const CONDITION_AGREEMENT_TOL: f64 = 1e-9;

/// Open interval `(lo, hi)` on the extended reals; `hi` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const EMPTY: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        if lo < hi {
            Interval { lo, hi }
        } else {
            Self::EMPTY
        }
    }

    pub fn above(lo: f64) -> Self {
        Interval::new(lo, f64::INFINITY)
    }

    pub fn is_empty(&self) -> bool {
        self.lo.partial_cmp(&self.hi) != Some(std::cmp::Ordering::Less)
    }

    pub fn contains(&self, y: f64) -> bool {
        self.lo < y && y < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Self::EMPTY;
        }
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// A representative interior point: the midpoint, or `2·lo` (1 when
    /// `lo = 0`) for intervals unbounded above.
    pub fn interior_point(&self) -> Option<f64> {
        if self.is_empty() {
            None
        } else if self.hi.is_infinite() {
            Some(if self.lo > 0.0 { 2.0 * self.lo } else { 1.0 })
        } else {
            Some(0.5 * (self.lo + self.hi))
        }
    }
}

// JSON has no infinity, so an unbounded end is written as `null`.
impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            lo: Option<f64>,
            hi: Option<f64>,
            empty: bool,
        }
        let empty = self.is_empty();
        let finite = |x: f64| (!empty && x.is_finite()).then_some(x);
        Repr {
            lo: finite(self.lo),
            hi: finite(self.hi),
            empty,
        }
        .serialize(serializer)
    }
}

/// Set of `y > 0` where `c2·y² + c1·y + c0 < 0`, assuming `c2 ≥ 0`.
pub(crate) fn negative_region(c2: f64, c1: f64, c0: f64) -> Interval {
    if c2 == 0.0 {
        return if c1 < 0.0 {
            Interval::above((-c0 / c1).max(0.0))
        } else if c1 == 0.0 && c0 < 0.0 {
            Interval::above(0.0)
        } else {
            Interval::EMPTY
        };
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc.is_nan() || disc <= 0.0 {
        return Interval::EMPTY;
    }
    let sq = disc.sqrt();
    // cancellation-free pair of roots
    let t = -0.5 * (c1 + c1.signum() * sq);
    let (r1, r2) = if t == 0.0 {
        (-sq / (2.0 * c2), sq / (2.0 * c2))
    } else {
        let a = t / c2;
        let b = c0 / t;
        (a.min(b), a.max(b))
    };
    Interval::new(r1.max(0.0), r2)
}

/// Matrix of the Lyapunov derivative around the endemic equilibrium, with
/// rows and columns ordered as deviations in `(R, M, I)`.
pub fn build_q(p: &ModelParams) -> Matrix3 {
    let eps = p.immunity_loss();
    let a = p.transmission();
    let v = p.vaccination();
    let mu = p.mortality();
    let delta = p.infectious_fraction();
    let b_i = p.infectious_recovery();
    let b_c = p.carrier_recovery();
    Matrix3([
        [-(b_c + eps + mu), delta * eps, 0.0],
        [(v - b_c) / delta, -(v + mu), a],
        [p.coupling_coefficient(), v - b_i, -a],
    ])
}

/// `p1(y) = (m13·y + m31)² − 4·m11·m33·y`.
pub fn p1_eval(m: &Matrix3, y: f64) -> f64 {
    (m.get(0, 2) * y + m.get(2, 0)).powi(2) - 4.0 * m.get(0, 0) * m.get(2, 2) * y
}

/// `(b1, b2)` with `b1 = m12·m23 − m22·m13` and `b2 = m21·m32 − m22·m31`.
pub fn p2_coefficients(m: &Matrix3) -> (f64, f64) {
    let b1 = m.get(0, 1) * m.get(1, 2) - m.get(1, 1) * m.get(0, 2);
    let b2 = m.get(1, 0) * m.get(2, 1) - m.get(1, 1) * m.get(2, 0);
    (b1, b2)
}

/// `p2(y) = (b1·y + b2)² − 4·M12·M23·y`.
pub fn p2_eval(m: &Matrix3, y: f64) -> f64 {
    let (b1, b2) = p2_coefficients(m);
    (b1 * y + b2).powi(2) - 4.0 * m.minor2(0, 1) * m.minor2(1, 2) * y
}

/// Where `p1 < 0` on `y > 0`.
pub fn p1_region(m: &Matrix3) -> Interval {
    let (a13, a31) = (m.get(0, 2), m.get(2, 0));
    negative_region(
        a13 * a13,
        2.0 * a13 * a31 - 4.0 * m.get(0, 0) * m.get(2, 2),
        a31 * a31,
    )
}

/// Where `p2 < 0` on `y > 0`.
pub fn p2_region(m: &Matrix3) -> Interval {
    let (b1, b2) = p2_coefficients(m);
    negative_region(
        b1 * b1,
        2.0 * b1 * b2 - 4.0 * m.minor2(0, 1) * m.minor2(1, 2),
        b2 * b2,
    )
}

/// Root of `p1` for the model matrix: `p1 < 0` exactly for `y` above it.
///
/// Equals `κ² / (4(b_C + ε + μ)·a)` with `κ = b_C/δ − b_C + b_I − v/δ`.
pub fn omega1_threshold(p: &ModelParams) -> f64 {
    let alpha = p.carrier_recovery() + p.immunity_loss() + p.mortality();
    let kappa = p.coupling_coefficient();
    kappa * kappa / (4.0 * alpha * p.transmission())
}

/// `(y*, ∞)`, the region where `p1 < 0` for the model matrix.
pub fn omega1_interval(p: &ModelParams) -> Interval {
    Interval::above(omega1_threshold(p))
}

/// Open interval on which `p2 < 0` for the model matrix, from its minors:
/// endpoints `(M12·M23 + q22·det ∓ 2√(M12·M23·q22·det)) / b1²`.
pub fn omega2_interval(p: &ModelParams) -> Interval {
    let q = build_q(p);
    let minors = MinorSet::of(&q);
    let (b1, b2) = p2_coefficients(&q);
    let g = minors.m12 * minors.m23;
    let h = q.get(1, 1) * minors.m123;
    if b1 == 0.0 {
        return Interval::above(b2 * b2 / (4.0 * g));
    }
    let upper_numer = g + h + 2.0 * (g * h).sqrt();
    // lower root via lo·hi = b2²/b1²; `g + h − 2√(gh)` cancels when g ≈ h
    Interval::new(b2 * b2 / upper_numer, upper_numer / (b1 * b1))
}

/// Outcome of the explicit sufficient condition for global stability of the
/// endemic equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasCondition {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// Closed-form condition `lhs < rhs`, with
///
/// ```text
/// lhs = (b_C·a·ε − b_C·a·δ·ε + b_I·a·δ·ε − v·a·ε)² / (4(b_C + ε + μ)·a)
/// rhs = G + H + 2√(G·H)
/// G   = (b_C + μ)(v + μ + ε)·(b_I + μ)·a            (= M12·M23)
/// H   = (v + μ)·a·[(b_I + μ)(b_C + ε + μ) − δε(b_I − b_C)]   (= q22·det Q)
/// ```
///
/// It is cross-checked against the interval form `y* < sup Ω2`; a verdict
/// mismatch outside a near-tie is reported as [`Error::Inconsistent`].
pub fn gas_condition(p: &ModelParams) -> Result<GasCondition> {
    let (eps, a, v, mu, delta, b_i, b_c) = (
        p.immunity_loss(),
        p.transmission(),
        p.vaccination(),
        p.mortality(),
        p.infectious_fraction(),
        p.infectious_recovery(),
        p.carrier_recovery(),
    );
    let alpha = b_c + eps + mu;
    let numer = b_c * a * eps - b_c * a * delta * eps + b_i * a * delta * eps - v * a * eps;
    let lhs = numer * numer / (4.0 * alpha * a);
    let g = (b_c + mu) * (v + mu + eps) * (b_i + mu) * a;
    let h = (v + mu) * a * ((b_i + mu) * alpha - delta * eps * (b_i - b_c));
    let rhs = g + h + 2.0 * (g * h).sqrt();
    let holds = lhs < rhs;

    let threshold = omega1_threshold(p);
    let upper = omega2_interval(p).hi;
    let interval_holds = threshold < upper;
    if holds != interval_holds {
        let closed_gap = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
        let interval_gap = (threshold - upper).abs() / upper.abs().max(f64::MIN_POSITIVE);
        if closed_gap > CONDITION_AGREEMENT_TOL && interval_gap > CONDITION_AGREEMENT_TOL {
            return Err(Error::Inconsistent(format!(
                "closed form says {holds} (lhs {lhs:e}, rhs {rhs:e}) but interval form says \
                 {interval_holds} (threshold {threshold:e}, upper {upper:e})"
            )));
        }
    }
    Ok(GasCondition { holds, lhs, rhs })
}

/// Earlier sufficient condition `−μ − b_C + ε + a·N*·δ < 0`.
pub fn legacy_condition_2b(p: &ModelParams) -> bool {
    -p.mortality() - p.carrier_recovery()
        + p.immunity_loss()
        + p.transmission() * p.carrying_population() * p.infectious_fraction()
        < 0.0
}

/// Earlier sufficient condition `b_I + a·N* − v − a·c − b_C − μ − δ·a·c < 0`
/// for a caller-supplied constant `c`.
pub fn legacy_condition_2a(p: &ModelParams, c: f64) -> bool {
    let a = p.transmission();
    p.infectious_recovery() + a * p.carrying_population()
        - p.vaccination()
        - a * c
        - p.carrier_recovery()
        - p.mortality()
        - p.infectious_fraction() * a * c
        < 0.0
}
