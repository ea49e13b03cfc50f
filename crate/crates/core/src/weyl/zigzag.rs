//! Zig-zag chaining between two chamber points.
//!
//! Two points on a common constant-`t` line both hop horizontally to the same
//! wall point, so a coefficient differs between them by at most the sum of
//! the two hop errors; likewise for constant-`r` lines and vertical hops. Such
//! a pair of hops is a *link*.
//!
//! The planner routes every endpoint to the line `s = 0` with one link, then
//! climbs the band `-1 ≤ s ≤ 0` with unit steps: a horizontal link from
//! `(x, 0, -x)` to `(x+1, -1, -x)` followed by a vertical link to
//! `(x+1, 0, -x-1)`. Each step raises the scale by one and its cost shrinks
//! by `e^{2α - 1/2}`. Both ladders climb past the common scale
//! `M = max(a_p, a_q) + 1` and are joined by one fractional step.

use super::{GrowthRate, HopEstimate, WeylError, WeylPoint};
use serde::{Deserialize, Serialize};

/// Ceiling constant of the unitary chaining bound.
pub const UNITARY_CONSTANT: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZigZagCertificate {
    pub endpoints: (WeylPoint, WeylPoint),
    pub alpha: f64,
    /// Path from the first endpoint to the second; consecutive waypoints are
    /// joined by one link.
    pub waypoints: Vec<WeylPoint>,
    /// Two hop estimates per link, in path order.
    pub segments: Vec<HopEstimate>,
    pub total_bound: f64,
    pub closed_form_bound: f64,
}

impl ZigZagCertificate {
    /// Re-derives the certificate's structure: links join consecutive
    /// waypoints through a shared wall point, hops lie in their valid regions
    /// and the total is the sum of the hop errors.
    pub fn verify(&self) -> Result<(), String> {
        let links = self.waypoints.len().saturating_sub(1);
        if self.segments.len() != 2 * links {
            return Err(format!("{} segments for {} links", self.segments.len(), links));
        }
        if let (Some(first), Some(last)) = (self.waypoints.first(), self.waypoints.last()) {
            if first != &self.endpoints.0 || last != &self.endpoints.1 {
                return Err("waypoints do not start and end at the endpoints".into());
            }
        }
        for (k, pair) in self.segments.chunks(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            if a.kind != b.kind || a.target != b.target {
                return Err(format!("link {k} hops do not share a target"));
            }
            if a.source != self.waypoints[k] || b.source != self.waypoints[k + 1] {
                return Err(format!("link {k} does not join consecutive waypoints"));
            }
            if !a.in_valid_region() || !b.in_valid_region() {
                return Err(format!("link {k} leaves its valid region"));
            }
        }
        let sum: f64 = self.segments.iter().map(|s| s.error_bound).sum();
        if (sum - self.total_bound).abs() > 1e-12 * sum.max(1.0) {
            return Err(format!("total {} differs from segment sum {sum}", self.total_bound));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Link {
    Horizontal,
    Vertical,
}

/// Builder accumulating links along one half of the path.
struct Walk {
    alpha: f64,
    points: Vec<WeylPoint>,
    segments: Vec<HopEstimate>,
}

impl Walk {
    fn start(p: WeylPoint, alpha: f64) -> Self {
        Walk { alpha, points: vec![p], segments: Vec::new() }
    }

    fn here(&self) -> WeylPoint {
        *self.points.last().unwrap()
    }

    fn step(&mut self, to: WeylPoint, link: Link) {
        let from = self.here();
        let (a, b) = match link {
            Link::Horizontal => {
                debug_assert_eq!(from.t, to.t);
                (HopEstimate::horizontal(from, self.alpha), HopEstimate::horizontal(to, self.alpha))
            }
            Link::Vertical => {
                debug_assert_eq!(from.r, to.r);
                (HopEstimate::vertical(from, self.alpha), HopEstimate::vertical(to, self.alpha))
            }
        };
        self.segments.push(a);
        self.segments.push(b);
        self.points.push(to);
    }

    /// Moves onto `s = 0` and returns the landing scale.
    fn project_to_band(&mut self) -> f64 {
        let p = self.here();
        if p.s > 0.0 {
            self.step(WeylPoint { r: -p.t, s: 0.0, t: p.t }, Link::Horizontal);
        } else if p.s < 0.0 {
            self.step(WeylPoint { r: p.r, s: 0.0, t: -p.r }, Link::Vertical);
        }
        self.here().r
    }

    /// Climbs from `(x, 0, -x)` to `(top, 0, -top)`, `0 < top - x ≤ 1`.
    fn climb_to(&mut self, top: f64) {
        let x = self.here().r;
        let h = top - x;
        self.step(WeylPoint { r: top, s: -h, t: -x }, Link::Horizontal);
        self.step(WeylPoint { r: top, s: 0.0, t: -top }, Link::Vertical);
    }

    fn climb_past(&mut self, level: f64) {
        while self.here().r < level {
            let x = self.here().r;
            self.climb_to(x + 1.0);
        }
    }
}

fn check_scale(p: &WeylPoint) -> Result<(), WeylError> {
    let scale = p.scale();
    if !(scale > 1.0) {
        return Err(WeylError::NearWall { r: p.r, s: p.s, t: p.t, scale });
    }
    Ok(())
}

/// Constant `C(α)` of the planner's geometric series: for any two endpoints,
/// `total_bound ≤ C(α) · max(e^{(2α-1/2) m_p}, e^{(2α-1/2) m_q})`.
///
/// Per endpoint the projection link costs at most `4E` and the unit steps at
/// most `P/(1-ρ) · E`, where `E = e^{(2α-1/2)m}`, `ρ = e^{2α-1/2}` and
/// `P = 2(1 + e^{1/2} + e^{2α-1} + e^{2α-1/2})`. The closing fractional step
/// happens at scale at least `min(m_p, m_q) + 1` and costs at most
/// `2(3 + e^{1/2}) ρ E`.
pub fn series_constant(growth: GrowthRate) -> f64 {
    let g = 2.0 * growth.alpha();
    let rho = (g - 0.5).exp();
    let step = 2.0 * (1.0 + 0.5f64.exp() + (g - 1.0).exp() + rho);
    let closing = 2.0 * (3.0 + 0.5f64.exp()) * rho;
    2.0 * (4.0 + step / (1.0 - rho)) + closing
}

/// Constant used in the closed-form bound: the unitary ceiling 100, or the
/// planner's series constant when that is larger.
fn closed_form_constant(growth: GrowthRate) -> f64 {
    UNITARY_CONSTANT.max(series_constant(growth))
}

pub fn plan_zigzag(p: WeylPoint, q: WeylPoint) -> Result<ZigZagCertificate, WeylError> {
    plan_zigzag_with_growth(p, q, GrowthRate::UNITARY)
}

pub fn plan_zigzag_with_growth(
    p: WeylPoint,
    q: WeylPoint,
    growth: GrowthRate,
) -> Result<ZigZagCertificate, WeylError> {
    check_scale(&p)?;
    check_scale(&q)?;
    let alpha = growth.alpha();
    let decay = |m: f64| (growth.exponent() * m).exp();
    let closed_form_bound = closed_form_constant(growth) * decay(p.scale()).max(decay(q.scale()));
    if p == q {
        return Ok(ZigZagCertificate {
            endpoints: (p, q),
            alpha,
            waypoints: vec![p],
            segments: Vec::new(),
            total_bound: 0.0,
            closed_form_bound,
        });
    }

    let mut from_p = Walk::start(p, alpha);
    let mut from_q = Walk::start(q, alpha);
    let level = from_p.project_to_band().max(from_q.project_to_band()) + 1.0;
    from_p.climb_past(level);
    from_q.climb_past(level);
    let (top_p, top_q) = (from_p.here().r, from_q.here().r);
    if top_q > top_p {
        from_p.climb_to(top_q);
    } else if top_p > top_q {
        from_q.climb_to(top_p);
    }
    let meet = from_q.here();
    from_p.points.pop();

    // Reverse q's half: its links are traversed backwards, hop order swapped.
    let mut waypoints = from_p.points;
    let mut segments = from_p.segments;
    waypoints.extend(from_q.points.iter().rev());
    debug_assert!(waypoints.contains(&meet));
    segments.extend(from_q.segments.chunks(2).rev().flat_map(|pair| [pair[1], pair[0]]));

    let total_bound = segments.iter().map(|s| s.error_bound).sum();
    Ok(ZigZagCertificate { endpoints: (p, q), alpha, waypoints, segments, total_bound, closed_form_bound })
}

/// Convergence-rate bound `C(α) e^{(2α - 1/2) min(r, -t)}` for the averaged
/// operators `π(KgK)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    pub alpha: f64,
    pub constant: f64,
    /// Constant actually produced by the planner's series.
    pub series_constant: f64,
    pub exponent: f64,
    pub scale: f64,
    pub value: f64,
}

pub fn coefficient_bound(p: &WeylPoint, alpha: f64) -> Result<GrowthBound, WeylError> {
    let growth = GrowthRate::new(alpha)?;
    let constant = closed_form_constant(growth);
    let exponent = growth.exponent();
    let scale = p.scale();
    Ok(GrowthBound {
        alpha,
        constant,
        series_constant: series_constant(growth),
        exponent,
        scale,
        value: constant * (exponent * scale).exp(),
    })
}
