//! Certified numeric angles for coordinates outside the exact kernels.
//!
//! Nothing here ever concludes that two angles are equal. Intervals either
//! separate, or the pair is reported as unresolved until it is matched
//! against declared exact values by [`match_expected`].

mod cluster;
mod expr;
mod interval;

pub use cluster::{certify_census, cluster_census, match_expected, ExpectedAngle, MatchOutcome, MIN_CERTIFY_BITS};
pub use expr::{Expr, ExprError, NumericPoint};
pub use interval::{BigInterval, IntervalError};

use crate::exact::ExactAngleKey;
use crate::quadratic::Scalar;
use thiserror::Error;

/// Guard bits added to every requested precision.
pub(crate) const WORK_GUARD: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error("a census needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("could not separate the triple from a degenerate one at {0} bits")]
    PrecisionExhausted(u32),
    #[error("points {0} and {1} coincide to within the precision cap")]
    CoincidentPoints(usize, usize),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Precisions tried in turn: `start`, doubling, up to and including `cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionSchedule {
    pub start: u32,
    pub cap: u32,
}

impl Default for PrecisionSchedule {
    fn default() -> Self {
        PrecisionSchedule { start: 128, cap: 4096 }
    }
}

impl PrecisionSchedule {
    pub fn new(start: u32, cap: u32) -> PrecisionSchedule {
        PrecisionSchedule { start: start.max(16), cap: cap.max(start.max(16)) }
    }

    pub fn levels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut p = self.start;
        while p < self.cap {
            out.push(p);
            p = p.saturating_mul(2);
        }
        out.push(self.cap);
        out
    }

    /// Clusters narrower than `2^floor` at the cap count as inseparable.
    pub fn separation_floor_log2(&self) -> i64 {
        -(i64::from(self.cap) - 64)
    }
}

/// Coordinates of `a - b` and `c - b` at working precision.
fn legs(
    a: &NumericPoint,
    b: &NumericPoint,
    c: &NumericPoint,
    wp: u32,
) -> Result<[BigInterval; 4], IntervalError> {
    let (ax, ay) = a.eval(wp)?;
    let (bx, by) = b.eval(wp)?;
    let (cx, cy) = c.eval(wp)?;
    Ok([ax.sub(&bx), ay.sub(&by), cx.sub(&bx), cy.sub(&by)])
}

/// `θ = π/2 - atan(dot / |cross|)` from interval dot and cross products.
fn angle_from_dot_cross(dot: &BigInterval, cross: &BigInterval, wp: u32) -> Result<BigInterval, IntervalError> {
    let half_pi = BigInterval::pi(wp).mul_pow2(-1);
    let ratio = dot.div(&cross.abs())?;
    Ok(half_pi.sub(&ratio.atan()))
}

/// Enclosure of the angle at vertex `b`, at `prec` bits.
///
/// Fails with `PrecisionExhausted` when, at this precision, the legs cannot
/// be shown to have nonzero length or the triple cannot be shown to be
/// non-collinear. Results at increasing precision are nested.
pub fn angle_interval(
    a: &NumericPoint,
    b: &NumericPoint,
    c: &NumericPoint,
    prec: u32,
) -> Result<BigInterval, NumericError> {
    let wp = prec + WORK_GUARD;
    let [ux, uy, vx, vy] = legs(a, b, c, wp)?;
    let cross = ux.mul(&vy).sub(&uy.mul(&vx));
    let dot = ux.mul(&vx).add(&uy.mul(&vy));
    if cross.contains_zero() {
        return Err(NumericError::PrecisionExhausted(prec));
    }
    let theta = angle_from_dot_cross(&dot, &cross, wp)?;
    // two ulps of slack keep coarser enclosures around finer ones
    Ok(theta.with_prec(prec).widen(2))
}

/// Enclosure of the angle represented by an exact key.
pub fn key_angle_interval(key: &ExactAngleKey<Scalar>, prec: u32) -> BigInterval {
    let wp = prec + WORK_GUARD;
    let dot = Expr::from_scalar(key.dot()).eval(wp).expect("rational and square-root terms evaluate");
    let cross = Expr::from_scalar(key.cross()).eval(wp).expect("rational and square-root terms evaluate");
    if cross.contains_zero() {
        // a positive cross product too small for this precision
        return key_angle_interval(key, prec * 2).with_prec(prec);
    }
    angle_from_dot_cross(&dot, &cross, wp)
        .expect("cross product excludes zero")
        .with_prec(prec)
        .widen(2)
}
