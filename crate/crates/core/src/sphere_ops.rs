//! Zonal averaging operators `T_δ` on `L²(S^d)`.
//!
//! `T_δ f(x)` is the average of `f` over the slice `{y : ⟨x, y⟩ = δ}`. By the
//! Funk–Hecke formula it acts on the degree-`n` spherical harmonics by the
//! scalar `R_n(δ)`, so every norm of `T_δ - T_0` is a weighted sum over
//! harmonic bands and the operator is never materialized.

use crate::orthopoly::{OrthoError, PolyFamily};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Exponent margin required before a Schatten tail is declared summable.
pub const CONVERGENCE_MARGIN: f64 = 1e-6;

/// Largest `|δ|` accepted by the Schatten estimates.
pub const SCHATTEN_DELTA_RANGE: f64 = 0.5;

/// Target accuracy of [`funk_hecke_oracle`].
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error(transparent)]
    Poly(#[from] OrthoError),
    #[error("delta {delta} outside the admissible range |delta| {bound}")]
    Delta { delta: f64, bound: &'static str },
    #[error("Schatten exponent must be positive, got {0}")]
    Exponent(f64),
    #[error("n_cut must be at least 1")]
    EmptyTruncation,
    #[error("oracle supports degree n <= 50, got {0}")]
    OracleDegree(usize),
    #[error("oracle needs at least 256 quadrature points, got {0}")]
    QuadraturePoints(usize),
    #[error("oracle supports only the 2-sphere, got d = {0}")]
    OracleDimension(u32),
    #[error("quadrature error estimate {estimate:e} exceeds tolerance")]
    Quadrature { estimate: f64 },
}

/// Dimension of the degree-`n` spherical harmonics on `S^d`:
/// `C(n+d, d) - C(n+d-2, d)`.
pub fn harmonic_dimension(dim: u32, n: usize) -> u64 {
    let d = dim as u128;
    let n = n as u128;
    let top = binomial(n + d, d);
    let lower = if n >= 2 { binomial(n + d - 2, d) } else { 0 };
    u64::try_from(top - lower).expect("harmonic dimension overflows u64")
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub degree: usize,
    pub eigenvalue: f64,
    pub multiplicity: u64,
}

/// Truncated eigenvalue/multiplicity table of `T_δ` on `S^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSpectrum {
    pub dim: u32,
    pub delta: f64,
    pub bands: Vec<Band>,
}

fn check_open_delta(delta: f64) -> Result<(), SphereError> {
    if !(delta.abs() < 1.0) {
        return Err(SphereError::Delta { delta, bound: "< 1" });
    }
    Ok(())
}

pub fn spectrum(dim: u32, delta: f64, n_cut: usize) -> Result<BandSpectrum, SphereError> {
    let family = PolyFamily::sphere(dim)?;
    check_open_delta(delta)?;
    let bands = family
        .values(delta)?
        .take(n_cut + 1)
        .enumerate()
        .map(|(degree, eigenvalue)| Band {
            degree,
            eigenvalue,
            multiplicity: harmonic_dimension(dim, degree),
        })
        .collect();
    Ok(BandSpectrum { dim, delta, bands })
}

/// Operator norm of `T_δ - T_0` with a certified upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpNormDiff {
    pub dim: u32,
    pub delta: f64,
    pub n_cut: usize,
    /// `sup_{1 ≤ n ≤ n_cut} |R_n(δ) - R_n(0)|`
    pub value: f64,
    pub argmax: usize,
    pub tail_bound: f64,
    /// `max(value, tail_bound)`: bounds the full operator norm.
    pub certified_upper: f64,
}

pub fn op_norm_diff(dim: u32, delta: f64, n_cut: usize) -> Result<OpNormDiff, SphereError> {
    let family = PolyFamily::sphere(dim)?;
    check_open_delta(delta)?;
    if n_cut < 1 {
        return Err(SphereError::EmptyTruncation);
    }
    let scan = crate::orthopoly::holder_sup(family, delta, n_cut)?;
    Ok(OpNormDiff {
        dim,
        delta,
        n_cut,
        value: scan.sup_value,
        argmax: scan.argmax,
        tail_bound: scan.tail_bound,
        certified_upper: scan.certified(),
    })
}

/// `2 + 2/(d - 1)`: below or at this exponent `T_δ - T_0 ∉ S_p(L²(S^d))`.
pub fn schatten_threshold(dim: u32) -> f64 {
    2.0 + 2.0 / (dim as f64 - 1.0)
}

/// Truncated Schatten-`p` norm of `T_δ - T_0` with a certified tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchattenEstimate {
    pub dim: u32,
    pub p: f64,
    pub delta: f64,
    pub n_cut: usize,
    /// `Σ_{n ≤ n_cut} mult(n) |R_n(δ) - R_n(0)|^p`
    pub partial_sum: f64,
    /// Bound on the remaining sum; infinite when not certified.
    pub tail_bound: f64,
    /// `(partial_sum + tail_bound)^{1/p}`
    pub norm_upper: f64,
    pub convergent: bool,
}

/// Partial sums `Σ_{1 ≤ n ≤ c} mult(n) |R_n(δ) - R_n(0)|^p` at each cut `c`.
///
/// Cuts must be non-decreasing. Summation runs in index order, so the result
/// is reproducible bit for bit.
pub fn schatten_partial_sums(
    dim: u32,
    p: f64,
    delta: f64,
    cuts: &[usize],
) -> Result<Vec<f64>, SphereError> {
    let family = PolyFamily::sphere(dim)?;
    check_open_delta(delta)?;
    if !(p > 0.0) {
        return Err(SphereError::Exponent(p));
    }
    debug_assert!(cuts.windows(2).all(|w| w[0] <= w[1]));
    let mut out = Vec::with_capacity(cuts.len());
    let Some(&last) = cuts.last() else {
        return Ok(out);
    };
    let mut pending = cuts.iter().peekable();
    while pending.next_if(|&&c| c == 0).is_some() {
        out.push(0.0);
    }
    let mut acc = 0.0;
    if delta != 0.0 {
        let terms = family.values(delta)?.zip(family.values(0.0)?).enumerate().skip(1);
        for (n, (a, b)) in terms.take(last) {
            acc += harmonic_dimension(dim, n) as f64 * (a - b).abs().powf(p);
            while pending.next_if(|&&c| c == n).is_some() {
                out.push(acc);
            }
        }
    }
    out.resize(cuts.len(), acc);
    Ok(out)
}

/// Schatten estimate with a termwise envelope tail.
///
/// For `n > n_cut` each term is at most
/// `mult(n) · ((A(δ) + A(0)) n^{-λ})^p ≤ M n^{d-1-λp} (A(δ) + A(0))^p` with
/// `M = mult(n_cut+1)/(n_cut+1)^{d-1}` (the ratio decreases in `n`). The
/// series is compared with `∫_{n_cut}^∞ x^{-β} dx`, `β = λp - (d - 1)`,
/// which converges exactly when `p` exceeds [`schatten_threshold`]. The tail
/// is certified only if `β - 1 > CONVERGENCE_MARGIN`.
pub fn schatten_norm_diff(
    dim: u32,
    p: f64,
    delta: f64,
    n_cut: usize,
) -> Result<SchattenEstimate, SphereError> {
    if !(delta.abs() <= SCHATTEN_DELTA_RANGE) {
        return Err(SphereError::Delta { delta, bound: "<= 1/2" });
    }
    if n_cut < 1 {
        return Err(SphereError::EmptyTruncation);
    }
    let family = PolyFamily::sphere(dim)?;
    let partial_sum = schatten_partial_sums(dim, p, delta, &[n_cut])?[0];
    if delta == 0.0 {
        return Ok(SchattenEstimate {
            dim,
            p,
            delta,
            n_cut,
            partial_sum,
            tail_bound: 0.0,
            norm_upper: 0.0,
            convergent: true,
        });
    }
    let lambda = family.lambda();
    let excess = lambda * p - (dim as f64 - 1.0) - 1.0;
    let convergent = excess > CONVERGENCE_MARGIN;
    let tail_bound = if convergent {
        let next = (n_cut + 1) as f64;
        let ratio = harmonic_dimension(dim, n_cut + 1) as f64 / next.powi(dim as i32 - 1);
        let coefficient = family.envelope_coefficient(delta) + family.envelope_coefficient(0.0);
        ratio * coefficient.powf(p) * (n_cut as f64).powf(-excess) / excess
    } else {
        f64::INFINITY
    };
    Ok(SchattenEstimate {
        dim,
        p,
        delta,
        n_cut,
        partial_sum,
        tail_bound,
        norm_upper: (partial_sum + tail_bound).powf(1.0 / p),
        convergent,
    })
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Averages a degree-`n` spherical harmonic over the circle
/// `{y ∈ S² : ⟨x, y⟩ = δ}` and divides by its value at `x`.
///
/// The harmonic is `Y(y) = (y₁ + i y₂)^n`, evaluated directly; no Legendre
/// recurrence is involved, so the result independently checks that `T_δ`
/// acts on degree-`n` harmonics by `P_n(δ)`. The periodic trapezoidal rule is
/// exact for trigonometric polynomials of degree below the node count; the
/// error estimate compares the full rule with its half-resolution version and
/// includes the imaginary residue.
pub fn funk_hecke_oracle(
    dim: u32,
    n: usize,
    delta: f64,
    quad_points: usize,
) -> Result<f64, SphereError> {
    if dim != 2 {
        return Err(SphereError::OracleDimension(dim));
    }
    if n > 50 {
        return Err(SphereError::OracleDegree(n));
    }
    if quad_points < 256 {
        return Err(SphereError::QuadraturePoints(quad_points));
    }
    if !(delta.abs() <= 1.0) {
        return Err(SphereError::Delta { delta, bound: "<= 1" });
    }
    // A generic unit vector with a well-conditioned value of Y.
    let centre = [0.8, 0.36, 0.48];
    let (u, v) = tangent_frame(centre);
    let harmonic = |y: [f64; 3]| Complex64::new(y[0], y[1]).powu(n as u32);
    let radius = (1.0 - delta * delta).max(0.0).sqrt();
    let average = |points: usize| {
        let sum: Complex64 = (0..points)
            .map(|k| {
                let (s, c) = (2.0 * PI * k as f64 / points as f64).sin_cos();
                let y = std::array::from_fn(|i| delta * centre[i] + radius * (c * u[i] + s * v[i]));
                harmonic(y)
            })
            .sum();
        sum / points as f64
    };
    let at_centre = harmonic(centre);
    let fine = average(quad_points) / at_centre;
    let coarse = average(quad_points / 2) / at_centre;
    let estimate = (fine - coarse).norm().max(fine.im.abs());
    if estimate > QUADRATURE_TOLERANCE {
        return Err(SphereError::Quadrature { estimate });
    }
    Ok(fine.re)
}

fn tangent_frame(x: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let dot = x[2];
    let mut u = [-dot * x[0], -dot * x[1], 1.0 - dot * x[2]];
    let norm = u.iter().map(|c| c * c).sum::<f64>().sqrt();
    u.iter_mut().for_each(|c| *c /= norm);
    let v = [
        x[1] * u[2] - x[2] * u[1],
        x[2] * u[0] - x[0] * u[2],
        x[0] * u[1] - x[1] * u[0],
    ];
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Harmonic dimension by brute force: monomials of degree n in d+1
    /// variables minus those of degree n-2.
    fn count_monomials(vars: usize, degree: usize) -> u64 {
        if vars == 1 {
            return 1;
        }
        (0..=degree).map(|k| count_monomials(vars - 1, degree - k)).sum()
    }

    #[test]
    fn harmonic_dimension_matches_monomial_count() {
        for dim in 2..=5u32 {
            for n in 0..=12usize {
                let brute = count_monomials(dim as usize + 1, n)
                    - if n >= 2 { count_monomials(dim as usize + 1, n - 2) } else { 0 };
                assert_eq!(harmonic_dimension(dim, n), brute, "d={dim} n={n}");
            }
        }
        for n in 0..1000 {
            assert_eq!(harmonic_dimension(2, n), 2 * n as u64 + 1);
            assert_eq!(harmonic_dimension(3, n), (n as u64 + 1).pow(2));
        }
    }

    #[test]
    fn spectrum_low_bands() {
        let s = spectrum(2, 0.3, 2).unwrap();
        let expect = [(1.0, 1), (0.3, 3), (-0.365, 5)];
        for (band, (ev, mult)) in s.bands.iter().zip(expect) {
            assert!((band.eigenvalue - ev).abs() < 1e-15);
            assert_eq!(band.multiplicity, mult);
        }
        let s3 = spectrum(3, 0.5, 1).unwrap();
        assert!((s3.bands[1].eigenvalue - 0.5).abs() < 1e-15);
        assert_eq!(s3.bands[1].multiplicity, 4);
    }

    #[test]
    fn delta_range_errors() {
        assert!(spectrum(2, 1.0, 3).is_err());
        assert!(op_norm_diff(2, -1.0, 3).is_err());
        assert!(schatten_norm_diff(2, 6.0, 0.6, 10).is_err());
        assert!(schatten_norm_diff(2, 0.0, 0.3, 10).is_err());
        assert!(funk_hecke_oracle(2, 51, 0.1, 256).is_err());
        assert!(funk_hecke_oracle(2, 5, 0.1, 128).is_err());
        assert!(funk_hecke_oracle(3, 5, 0.1, 256).is_err());
    }

    #[test]
    fn zero_delta_is_exactly_zero() {
        let o = op_norm_diff(2, 0.0, 1000).unwrap();
        assert_eq!((o.value, o.certified_upper), (0.0, 0.0));
        let s = schatten_norm_diff(2, 6.0, 0.0, 1000).unwrap();
        assert_eq!(s.norm_upper, 0.0);
    }

    #[test]
    fn partial_sums_at_several_cuts() {
        let sums = schatten_partial_sums(2, 4.0, 0.3, &[0, 10, 10, 100]).unwrap();
        assert_eq!(sums[0], 0.0);
        assert_eq!(sums[1], sums[2]);
        assert!(sums[3] > sums[2]);
        let single = schatten_partial_sums(2, 4.0, 0.3, &[100]).unwrap();
        assert_eq!(single[0], sums[3]);
    }

    #[test]
    fn oracle_trivial_degrees() {
        for delta in [-0.9, 0.0, 0.4] {
            assert!((funk_hecke_oracle(2, 0, delta, 256).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((funk_hecke_oracle(2, 1, 0.7, 256).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn slope_of_exact_power() {
        let pts: Vec<_> = [0.1, 0.2, 0.4, 0.8].iter().map(|&x: &f64| (x, 3.0 * x.powf(0.3))).collect();
        assert!((log_log_slope(&pts) - 0.3).abs() < 1e-12);
    }
}
