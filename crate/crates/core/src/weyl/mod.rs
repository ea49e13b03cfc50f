//! Geometry of the Weyl chamber of `SL₃(ℝ)`.
//!
//! A point `(r, s, t)` with `r ≥ s ≥ t` and `r + s + t = 0` labels the double
//! coset `K · diag(e^r, e^s, e^t) · K`. Matrix coefficients between
//! `K`-invariant vectors are functions on this chamber, and two families of
//! segments control how fast they can vary:
//!
//! * horizontal hops keep `t` and move to the wall `r = s`, with error
//!   `2 e^{-r/2 - s}`;
//! * vertical hops keep `r` and move to the wall `s = t`, with error
//!   `2 e^{t/2 + s}`.
//!
//! Chaining these hops ([`zigzag`]) bounds the oscillation of a coefficient
//! by a quantity that decays exponentially in the distance to the walls.

mod kak;
mod synthetic;
mod zigzag;

pub use kak::{kak, KakDecomposition};
pub use synthetic::{
    check_coefficient, random_point, synthetic_coeff_check, SyntheticCoefficient, SyntheticReport,
    SyntheticViolation, SYNTHETIC_PAIRS,
};
pub use zigzag::{
    coefficient_bound, plan_zigzag, plan_zigzag_with_growth, series_constant, GrowthBound,
    ZigZagCertificate,
};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on the chamber inequalities and the trace condition.
pub const CHAMBER_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeylError {
    #[error("({r}, {s}, {t}) is not ordered r >= s >= t")]
    Unordered { r: f64, s: f64, t: f64 },
    #[error("coordinates sum to {0}, expected 0")]
    NotTraceless(f64),
    #[error("non-finite coordinate")]
    NotFinite,
    #[error("matrix determinant {0} is not 1")]
    NonUnimodular(f64),
    #[error("matrix is singular")]
    Singular,
    #[error("distortion map is degenerate at t = 0")]
    Degenerate,
    #[error("point ({r}, {s}, {t}) is within distance 1 of the chamber walls (min(r, -t) = {scale})")]
    NearWall { r: f64, s: f64, t: f64, scale: f64 },
    #[error("growth rate {0} must satisfy 0 <= alpha < 1/4")]
    GrowthRate(f64),
}

/// A point of the Weyl chamber `Λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylPoint {
    pub r: f64,
    pub s: f64,
    pub t: f64,
}

impl WeylPoint {
    /// Validates ordering and projects onto `r + s + t = 0`.
    pub fn new(r: f64, s: f64, t: f64) -> Result<Self, WeylError> {
        if !(r.is_finite() && s.is_finite() && t.is_finite()) {
            return Err(WeylError::NotFinite);
        }
        let sum = r + s + t;
        if sum.abs() > 1e-8 * (1.0 + r.abs() + t.abs()) {
            return Err(WeylError::NotTraceless(sum));
        }
        let shift = sum / 3.0;
        let (r, s, t) = (r - shift, s - shift, t - shift);
        if r < s - CHAMBER_TOLERANCE || s < t - CHAMBER_TOLERANCE {
            return Err(WeylError::Unordered { r, s, t });
        }
        Ok(WeylPoint { r, s: s.min(r), t: t.min(s) })
    }

    /// Point with given `r` and `t`; `s = -r - t`.
    pub fn from_rt(r: f64, t: f64) -> Result<Self, WeylError> {
        Self::new(r, -r - t, t)
    }

    pub const ORIGIN: WeylPoint = WeylPoint { r: 0.0, s: 0.0, t: 0.0 };

    /// `min(r, -t)`: the distance scale to the chamber walls. Equals
    /// `min(log ‖D‖, log ‖D⁻¹‖)` for `D = diag(e^r, e^s, e^t)`.
    pub fn scale(&self) -> f64 {
        self.r.min(-self.t)
    }

    pub fn diag(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&nalgebra::Vector3::new(self.r.exp(), self.s.exp(), self.t.exp()))
    }

    pub fn distance(&self, other: &WeylPoint) -> f64 {
        ((self.r - other.r).powi(2) + (self.s - other.s).powi(2) + (self.t - other.t).powi(2)).sqrt()
    }

    /// Target of the horizontal hop: `(-t/2, -t/2, t)`.
    pub fn horizontal_target(&self) -> WeylPoint {
        WeylPoint { r: -self.t / 2.0, s: -self.t / 2.0, t: self.t }
    }

    /// Target of the vertical hop: `(r, -r/2, -r/2)`.
    pub fn vertical_target(&self) -> WeylPoint {
        WeylPoint { r: self.r, s: -self.r / 2.0, t: -self.r / 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HopKind {
    /// Constant `t`, towards the wall `r = s`.
    H,
    /// Constant `r`, towards the wall `s = t`.
    V,
}

/// One application of a hop estimate: `|c(source) - c(target)| ≤ error_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopEstimate {
    pub kind: HopKind,
    pub source: WeylPoint,
    pub target: WeylPoint,
    pub error_bound: f64,
}

impl HopEstimate {
    /// Horizontal hop for a representation with growth rate `alpha`
    /// (`alpha = 0` for unitary): `2 e^{-r/2 - s + 2α(-t)}`.
    pub fn horizontal(source: WeylPoint, alpha: f64) -> Self {
        let error_bound = 2.0 * (-source.r / 2.0 - source.s - 2.0 * alpha * source.t).exp();
        HopEstimate { kind: HopKind::H, source, target: source.horizontal_target(), error_bound }
    }

    /// Vertical hop: `2 e^{t/2 + s + 2α r}`.
    pub fn vertical(source: WeylPoint, alpha: f64) -> Self {
        let error_bound = 2.0 * (source.t / 2.0 + source.s + 2.0 * alpha * source.r).exp();
        HopEstimate { kind: HopKind::V, source, target: source.vertical_target(), error_bound }
    }

    /// Region where the estimate is small: `s ≥ -1` for H, `s ≤ 0` for V.
    pub fn in_valid_region(&self) -> bool {
        match self.kind {
            HopKind::H => self.source.s >= -1.0 - CHAMBER_TOLERANCE,
            HopKind::V => self.source.s <= CHAMBER_TOLERANCE,
        }
    }
}

/// `sinh(a) / sinh(b)` for `0 ≤ a ≤ b`, without overflow.
fn sinh_ratio(a: f64, b: f64) -> f64 {
    (a - b).exp() * (-(-2.0 * a).exp_m1()) / (-(-2.0 * b).exp_m1())
}

/// Parameter `δ ∈ [0, 1]` of the `U`-double coset met by the horizontal
/// segment through `p`: `δ = sinh(r + t/2) / sinh(-3t/2)`.
pub fn delta_map(p: &WeylPoint) -> Result<f64, WeylError> {
    if p.t >= 0.0 {
        return Err(WeylError::Degenerate);
    }
    let a = (p.r + p.t / 2.0).max(0.0);
    let b = -1.5 * p.t;
    Ok(sinh_ratio(a, b).clamp(0.0, 1.0))
}

/// The inequality chain behind the horizontal estimate, evaluated at `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaChain {
    pub delta: f64,
    /// `2√δ`
    pub holder_bound: f64,
    /// `2 e^{r/2 + t}`, equal to `2 e^{-r/2 - s}`.
    pub hop_bound: f64,
    pub holds: bool,
}

pub fn delta_chain(p: &WeylPoint) -> Result<DeltaChain, WeylError> {
    let delta = delta_map(p)?;
    let holder_bound = 2.0 * delta.sqrt();
    let hop_bound = 2.0 * (p.r / 2.0 + p.t).exp();
    Ok(DeltaChain { delta, holder_bound, hop_bound, holds: holder_bound <= hop_bound * (1.0 + 1e-12) })
}

/// `k_δ`: rotation by `arccos δ` in the `(e₁, e₂)` plane.
pub fn k_delta(delta: f64) -> Matrix3<f64> {
    let c = delta;
    let s = (1.0 - delta * delta).max(0.0).sqrt();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Exponential growth rate of a representation along `D(-t, t/2, t/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRate(f64);

impl GrowthRate {
    pub const UNITARY: GrowthRate = GrowthRate(0.0);

    pub fn new(alpha: f64) -> Result<Self, WeylError> {
        if !(0.0..0.25).contains(&alpha) {
            return Err(WeylError::GrowthRate(alpha));
        }
        Ok(GrowthRate(alpha))
    }

    pub fn alpha(&self) -> f64 {
        self.0
    }

    /// `2α - 1/2`, the decay exponent of the chaining bound.
    pub fn exponent(&self) -> f64 {
        2.0 * self.0 - 0.5
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_validation() {
        assert!(WeylPoint::new(1.0, 0.0, -1.0).is_ok());
        assert!(matches!(WeylPoint::new(0.0, 1.0, -1.0), Err(WeylError::Unordered { .. })));
        assert!(matches!(WeylPoint::new(1.0, 1.0, 1.0), Err(WeylError::NotTraceless(_))));
        assert!(WeylPoint::new(f64::NAN, 0.0, 0.0).is_err());
        let p = WeylPoint::new(2.0 + 1e-12, 1.0, -3.0).unwrap();
        assert!((p.r + p.s + p.t).abs() < 1e-15);
    }

    #[test]
    fn hop_targets_are_chamber_points() {
        let p = WeylPoint::new(5.0, -1.5, -3.5).unwrap();
        for q in [p.horizontal_target(), p.vertical_target()] {
            WeylPoint::new(q.r, q.s, q.t).unwrap();
        }
        assert_eq!(p.horizontal_target().t, p.t);
        assert_eq!(p.vertical_target().r, p.r);
    }

    #[test]
    fn delta_map_examples() {
        let wall = WeylPoint::from_rt(1.0, -2.0).unwrap();
        assert_eq!(delta_map(&wall).unwrap(), 0.0);
        let far_wall = WeylPoint::new(2.0, -1.0, -1.0).unwrap();
        assert!((delta_map(&far_wall).unwrap() - 1.0).abs() < 1e-15);
        // mpmath: sinh(2)/sinh(3)
        let p = WeylPoint::new(3.0, -1.0, -2.0).unwrap();
        assert!((delta_map(&p).unwrap() - 0.362_038_898_880_996).abs() < 1e-15);
        assert_eq!(delta_map(&WeylPoint::ORIGIN), Err(WeylError::Degenerate));
    }

    #[test]
    fn delta_map_survives_huge_scales() {
        let p = WeylPoint::new(900.0, -100.0, -800.0).unwrap();
        let d = delta_map(&p).unwrap();
        assert!(d.is_finite() && d >= 0.0);
    }

    #[test]
    fn growth_rate_bounds() {
        assert!(GrowthRate::new(0.0).is_ok());
        assert!(GrowthRate::new(0.2499).is_ok());
        assert_eq!(GrowthRate::new(0.25), Err(WeylError::GrowthRate(0.25)));
        assert!(GrowthRate::new(-0.1).is_err());
        assert!(GrowthRate::new(f64::NAN).is_err());
    }
}
