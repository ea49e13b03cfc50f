//! Legendre polynomials and their higher-dimensional analogues.
//!
//! On the sphere `S^d` the zonal functions of degree `n` are the Gegenbauer
//! polynomials `C_n^λ` with `λ = (d - 1) / 2`, normalized so that the value at
//! `x = 1` is one. For `d = 2` this is the Legendre family `P_n`.
//!
//! All evaluations go through the upward three-term recurrence
//!
//! ```text
//! R_{n+1}(x) = 2(n + λ)/(n + 2λ) · x · R_n(x) − n/(n + 2λ) · R_{n-1}(x)
//! ```
//!
//! which is stable on `[-1, 1]` and avoids the factorial-sized coefficients of
//! the closed forms.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Slack below which a certified inequality counts as violated.
pub const VIOLATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrthoError {
    #[error("sphere dimension must be at least 2, got {0}")]
    Dimension(u32),
    #[error("point {0} lies outside [-1, 1]")]
    OutOfInterval(f64),
    #[error("point {0} must lie in the open interval (-1, 1)")]
    Endpoint(f64),
    #[error("degree must be at least {min}, got {got}")]
    Degree { min: usize, got: usize },
}

/// Normalized zonal polynomial family of the sphere `S^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyFamily {
    dim: u32,
}

impl PolyFamily {
    /// Legendre polynomials, the zonal family of `S^2`.
    pub const LEGENDRE: PolyFamily = PolyFamily { dim: 2 };

    pub fn sphere(dim: u32) -> Result<Self, OrthoError> {
        if dim < 2 {
            return Err(OrthoError::Dimension(dim));
        }
        Ok(PolyFamily { dim })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Gegenbauer parameter `(d - 1) / 2`.
    pub fn lambda(&self) -> f64 {
        (self.dim as f64 - 1.0) / 2.0
    }

    pub fn is_legendre(&self) -> bool {
        self.dim == 2
    }

    /// Iterator over `R_0(x), R_1(x), ...` (unbounded).
    pub fn values(&self, x: f64) -> Result<Recurrence, OrthoError> {
        check_closed(x)?;
        Ok(Recurrence::new(self.lambda(), x))
    }

    /// `R_0(x), ..., R_{n_max}(x)`.
    pub fn eval_upto(&self, n_max: usize, x: f64) -> Result<Vec<f64>, OrthoError> {
        Ok(self.values(x)?.take(n_max + 1).collect())
    }

    pub fn eval(&self, n: usize, x: f64) -> Result<f64, OrthoError> {
        Ok(self.values(x)?.nth(n).expect("recurrence is unbounded"))
    }

    /// Derivative of the normalized polynomial at an interior point.
    ///
    /// For Legendre this uses `(1 - x²) P'_n = -n x P_n + n P_{n-1}`. For
    /// `d > 2` it uses `d/dx C_n^λ = 2λ C_{n-1}^{λ+1}`, which after
    /// normalization reads `R'_n = n(n + d - 1)/d · R^{(d+2)}_{n-1}`.
    pub fn eval_derivative(&self, n: usize, x: f64) -> Result<f64, OrthoError> {
        if n < 1 {
            return Err(OrthoError::Degree { min: 1, got: n });
        }
        check_open(x)?;
        if self.is_legendre() {
            let mut it = Recurrence::new(0.5, x).skip(n - 1);
            let prev = it.next().unwrap();
            let cur = it.next().unwrap();
            let n = n as f64;
            Ok((-n * x * cur + n * prev) / (1.0 - x * x))
        } else {
            let shifted = PolyFamily { dim: self.dim + 2 };
            let d = self.dim as f64;
            let nf = n as f64;
            Ok(nf * (nf + d - 1.0) / d * shifted.eval(n - 1, x)?)
        }
    }

    /// Coefficient `A(x)` of the decay envelope `|R_n(x)| ≤ A(x) · n^{-λ}`.
    ///
    /// Legendre uses Bernstein's inequality, `A(x) = √(2/π) (1 - x²)^{-1/4}`.
    /// For `d > 2` the bound comes from Laplace's integral
    /// `R_n(x) = c_λ ∫_0^π (x + i√(1-x²) cos φ)^n sin^{2λ-1} φ dφ`, whose
    /// modulus is at most `Γ(λ+½)/√π · (π² / (2(1 - x²)))^λ · n^{-λ}`.
    /// Infinite at `x = ±1`.
    pub fn envelope_coefficient(&self, x: f64) -> f64 {
        let one_minus = 1.0 - x * x;
        if one_minus <= 0.0 {
            return f64::INFINITY;
        }
        if self.is_legendre() {
            (2.0 / PI).sqrt() * one_minus.powf(-0.25)
        } else {
            let lam = self.lambda();
            gamma_half_integer(self.dim) / PI.sqrt() * (PI * PI / (2.0 * one_minus)).powf(lam)
        }
    }

    /// `min(1, A(x) n^{-λ})`, a rigorous bound for `|R_n(x)|` when `n ≥ 1`.
    pub fn envelope(&self, n: usize, x: f64) -> f64 {
        debug_assert!(n >= 1);
        let decay = self.envelope_coefficient(x) * (n as f64).powf(-self.lambda());
        decay.min(1.0)
    }
}

/// `Γ(λ + ½)` for `λ = (d - 1)/2`, i.e. `Γ(d/2)`.
fn gamma_half_integer(dim: u32) -> f64 {
    // Γ(1) = 1, Γ(1/2) = √π, Γ(x + 1) = x Γ(x)
    let (mut value, mut x) = if dim.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = dim as f64 / 2.0;
    while x < target {
        value *= x;
        x += 1.0;
    }
    value
}

fn check_closed(x: f64) -> Result<(), OrthoError> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(OrthoError::OutOfInterval(x));
    }
    Ok(())
}

fn check_open(x: f64) -> Result<(), OrthoError> {
    check_closed(x)?;
    if x.abs() == 1.0 {
        return Err(OrthoError::Endpoint(x));
    }
    Ok(())
}

/// Upward three-term recurrence at a fixed point.
#[derive(Debug, Clone)]
pub struct Recurrence {
    lambda: f64,
    x: f64,
    n: usize,
    prev: f64,
    cur: f64,
}

impl Recurrence {
    fn new(lambda: f64, x: f64) -> Self {
        Recurrence { lambda, x, n: 0, prev: 0.0, cur: 1.0 }
    }
}

impl Iterator for Recurrence {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.cur;
        let n = self.n as f64;
        let denom = n + 2.0 * self.lambda;
        let next = 2.0 * (n + self.lambda) / denom * self.x * self.cur - n / denom * self.prev;
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BernsteinViolation {
    pub n: usize,
    pub x: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinReport {
    pub n_max: usize,
    pub points: usize,
    /// Smallest `bound - |P_n(x)|` seen.
    pub worst_slack: f64,
    pub worst_n: usize,
    pub worst_x: f64,
    pub violations: Vec<BernsteinViolation>,
}

impl BernsteinReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `|P_n(x)| ≤ min(1, √(2/(πn)) (1 - x²)^{-1/4})` for `1 ≤ n ≤ n_max`
/// over every grid point.
pub fn check_bernstein(n_max: usize, grid: &[f64]) -> Result<BernsteinReport, OrthoError> {
    check_bernstein_scaled(n_max, grid, 1.0)
}

/// Same as [`check_bernstein`] with the bound multiplied by `scale`.
pub fn check_bernstein_scaled(
    n_max: usize,
    grid: &[f64],
    scale: f64,
) -> Result<BernsteinReport, OrthoError> {
    if n_max < 1 {
        return Err(OrthoError::Degree { min: 1, got: n_max });
    }
    for &x in grid {
        check_open(x)?;
    }
    let family = PolyFamily::LEGENDRE;
    let mut report = BernsteinReport {
        n_max,
        points: grid.len(),
        worst_slack: f64::INFINITY,
        worst_n: 0,
        worst_x: f64::NAN,
        violations: Vec::new(),
    };
    for &x in grid {
        for (n, value) in family.values(x)?.enumerate().take(n_max + 1).skip(1) {
            let slack = scale * family.envelope(n, x) - value.abs();
            if slack < report.worst_slack {
                report.worst_slack = slack;
                report.worst_n = n;
                report.worst_x = x;
            }
            if slack < -VIOLATION_TOLERANCE {
                report.violations.push(BernsteinViolation { n, x, slack });
            }
        }
    }
    Ok(report)
}

/// Result of the scan behind the Hölder-½ estimate at `δ' = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderSup {
    pub delta: f64,
    pub n_cut: usize,
    /// `sup_{1 ≤ n ≤ n_cut} |R_n(δ) - R_n(0)|`
    pub sup_value: f64,
    pub argmax: usize,
    /// Bound on `|R_n(δ) - R_n(0)|` valid for every `n > n_cut`.
    pub tail_bound: f64,
}

impl HolderSup {
    /// Certified bound on the supremum over all degrees.
    pub fn certified(&self) -> f64 {
        self.sup_value.max(self.tail_bound)
    }
}

/// Scans `|R_n(δ) - R_n(0)|` for `n ≤ n_cut` and bounds the rest termwise by
/// `envelope(n_cut + 1, δ) + envelope(n_cut + 1, 0)`.
///
/// The envelopes decrease in `n`, so the tail term is a bound for every
/// `n > n_cut`. Near `δ = ±1` the envelope degenerates to the trivial bound 1.
pub fn holder_sup(family: PolyFamily, delta: f64, n_cut: usize) -> Result<HolderSup, OrthoError> {
    if n_cut < 1 {
        return Err(OrthoError::Degree { min: 1, got: n_cut });
    }
    check_closed(delta)?;
    let mut sup_value = 0.0_f64;
    let mut argmax = 0;
    if delta != 0.0 {
        let at_delta = family.values(delta)?;
        let at_zero = family.values(0.0)?;
        for (n, (a, b)) in at_delta.zip(at_zero).enumerate().take(n_cut + 1).skip(1) {
            let diff = (a - b).abs();
            if diff > sup_value {
                sup_value = diff;
                argmax = n;
            }
        }
    }
    let tail_bound = if delta == 0.0 {
        0.0
    } else {
        family.envelope(n_cut + 1, delta) + family.envelope(n_cut + 1, 0.0)
    };
    Ok(HolderSup { delta, n_cut, sup_value, argmax, tail_bound })
}

/// `count` equispaced points covering `[lo, hi]` inclusively.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = (count - 1) as f64;
            (0..count).map(|i| lo + (hi - lo) * i as f64 / last).collect()
        }
    }
}
