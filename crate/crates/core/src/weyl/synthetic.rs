//! Random functions on the chamber that obey both hop estimates, used to
//! test the planner's certificates end to end.

use super::{plan_zigzag, WeylError, WeylPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// `c(p) = level + Φ(p) · (a cos(ω_t t + φ_t) + b cos(ω_r r + φ_r))` with
/// `|a| + |b| ≤ 1` and `Φ(p) = min(e^{-r/2 - s}, e^{t/2 + s})`.
///
/// `|c(p) - c(p')| ≤ Φ(p) + Φ(p')`, and the envelope at a horizontal target
/// is `e^{3t/4} ≤ e^{-r/2 - s}` (at a vertical target `e^{-3r/4} ≤ e^{t/2 + s}`),
/// so both hop estimates hold at every chamber point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCoefficient {
    pub level: f64,
    pub a: f64,
    pub b: f64,
    pub freq_t: f64,
    pub phase_t: f64,
    pub freq_r: f64,
    pub phase_r: f64,
}

impl SyntheticCoefficient {
    pub fn constant(level: f64) -> Self {
        SyntheticCoefficient { level, a: 0.0, b: 0.0, freq_t: 0.0, phase_t: 0.0, freq_r: 0.0, phase_r: 0.0 }
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let a: f64 = rng.gen_range(-1.0..=1.0);
        let b = (1.0 - a.abs()) * rng.gen_range(-1.0..=1.0);
        SyntheticCoefficient {
            level: rng.gen_range(-1.0..=1.0),
            a,
            b,
            freq_t: rng.gen_range(0.0..4.0),
            phase_t: rng.gen_range(0.0..std::f64::consts::TAU),
            freq_r: rng.gen_range(0.0..4.0),
            phase_r: rng.gen_range(0.0..std::f64::consts::TAU),
        }
    }

    pub fn envelope(p: &WeylPoint) -> f64 {
        (-p.r / 2.0 - p.s).exp().min((p.t / 2.0 + p.s).exp())
    }

    pub fn eval(&self, p: &WeylPoint) -> f64 {
        let wave = self.a * (self.freq_t * p.t + self.phase_t).cos()
            + self.b * (self.freq_r * p.r + self.phase_r).cos();
        self.level + Self::envelope(p) * wave
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticViolation {
    pub p: WeylPoint,
    pub q: WeylPoint,
    /// `None` for the endpoint difference, otherwise the offending segment.
    pub segment: Option<usize>,
    pub difference: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticReport {
    pub seed: u64,
    pub coefficient: SyntheticCoefficient,
    pub pairs_checked: usize,
    pub segments_checked: usize,
    /// Largest `|c(p) - c(q)| / total_bound` over the checked pairs.
    pub max_ratio: f64,
    pub violations: Vec<SyntheticViolation>,
}

impl SyntheticReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const SYNTHETIC_PAIRS: usize = 20;

/// Random chamber point with `min(r, -t) = scale` at distance up to 3 off
/// the line `s = 0`.
pub fn random_point<R: Rng>(rng: &mut R, scale: f64) -> WeylPoint {
    let off = rng.gen_range(0.0..=scale.min(3.0));
    if rng.gen_bool(0.5) {
        WeylPoint { r: scale, s: off, t: -scale - off }
    } else {
        WeylPoint { r: scale + off, s: -off, t: -scale }
    }
}

/// Draws a coefficient and [`SYNTHETIC_PAIRS`] endpoint pairs with scales in
/// `[2, 10]` from `seed`, plans a certificate for each pair and checks every
/// hop and the endpoint difference against their bounds.
pub fn synthetic_coeff_check(seed: u64) -> Result<SyntheticReport, WeylError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficient = SyntheticCoefficient::random(&mut rng);
    let pairs: Vec<_> = (0..SYNTHETIC_PAIRS)
        .map(|_| {
            let (m1, m2) = (rng.gen_range(2.0..=10.0), rng.gen_range(2.0..=10.0));
            (random_point(&mut rng, m1), random_point(&mut rng, m2))
        })
        .collect();
    check_coefficient(seed, coefficient, &pairs)
}

pub fn check_coefficient(
    seed: u64,
    coefficient: SyntheticCoefficient,
    pairs: &[(WeylPoint, WeylPoint)],
) -> Result<SyntheticReport, WeylError> {
    const SLACK: f64 = 1e-12;
    let mut report = SyntheticReport {
        seed,
        coefficient,
        pairs_checked: 0,
        segments_checked: 0,
        max_ratio: 0.0,
        violations: Vec::new(),
    };
    for &(p, q) in pairs {
        let cert = plan_zigzag(p, q)?;
        for (k, seg) in cert.segments.iter().enumerate() {
            let diff = (coefficient.eval(&seg.source) - coefficient.eval(&seg.target)).abs();
            if diff > seg.error_bound + SLACK {
                report.violations.push(SyntheticViolation {
                    p,
                    q,
                    segment: Some(k),
                    difference: diff,
                    bound: seg.error_bound,
                });
            }
        }
        let diff = (coefficient.eval(&p) - coefficient.eval(&q)).abs();
        if diff > cert.total_bound + SLACK {
            report.violations.push(SyntheticViolation { p, q, segment: None, difference: diff, bound: cert.total_bound });
        }
        if cert.total_bound > 0.0 {
            report.max_ratio = report.max_ratio.max(diff / cert.total_bound);
        }
        report.segments_checked += cert.segments.len();
        report.pairs_checked += 1;
    }
    Ok(report)
}
