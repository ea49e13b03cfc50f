use proptest::prelude::*;
use sl3lab::orthopoly::PolyFamily;
use sl3lab::sphere_ops::*;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn band_dimensions_sum_to_polynomial_space() {
    // harmonics of degree ≤ n on S^d span C(n+d, d) + C(n+d-1, d) dimensions
    for d in 2u32..=6 {
        for n in 0..40usize {
            let total: u64 = (0..=n).map(|k| harmonic_dimension(d, k)).sum();
            let expected = binomial((n + d as usize) as u64, d as u64) + binomial((n + d as usize - 1) as u64, d as u64);
            assert_eq!(total, expected, "d={d} n={n}");
        }
    }
}

#[test]
fn spectrum_bands_follow_the_recurrence() {
    let s = spectrum(3, 0.4, 20).unwrap();
    let r = PolyFamily::sphere(3).unwrap().eval_upto(20, 0.4).unwrap();
    assert_eq!(s.bands.len(), 21);
    for (band, value) in s.bands.iter().zip(r) {
        assert_eq!(band.eigenvalue, value);
        assert_eq!(band.multiplicity, harmonic_dimension(3, band.degree));
    }
}

#[test]
fn s4_partial_sums_match_reference() {
    // mpmath, d = 2, δ = 0.3
    let s = schatten_partial_sums(2, 4.0, 0.3, &[100, 1000, 10_000]).unwrap();
    let reference = [7.546_370_762_896_206, 12.128_843_484_681_395, 16.756_982_894_137_796];
    for (a, b) in s.iter().zip(reference) {
        assert!((a - b).abs() < 1e-9 * b, "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_reproduces_zonal_eigenvalue(n in 0usize..=50, delta in -0.99f64..0.99) {
        let q = funk_hecke_oracle(2, n, delta, 1024).unwrap();
        let p = PolyFamily::LEGENDRE.eval(n, delta).unwrap();
        prop_assert!((q - p).abs() <= 1e-8);
    }

    #[test]
    fn operator_norm_bracket(delta in -0.999f64..0.999) {
        let r = op_norm_diff(2, delta, 5000).unwrap();
        prop_assert!(r.value <= r.certified_upper);
        prop_assert!(r.certified_upper <= 2.0 * delta.abs().sqrt() + 1e-12);
    }

    #[test]
    fn partial_sums_monotone(p in 2.5f64..12.0, delta in -0.5f64..0.5, a in 1usize..500, b in 1usize..500) {
        let (lo, hi) = (a.min(b), a.max(b));
        let s = schatten_partial_sums(2, p, delta, &[lo, hi]).unwrap();
        prop_assert!(s[0] <= s[1]);
    }

    #[test]
    fn schatten_norms_decrease_in_p(delta in 0.05f64..0.5, p in 4.5f64..10.0) {
        let a = schatten_norm_diff(2, p, delta, 3000).unwrap();
        let b = schatten_norm_diff(2, p + 1.0, delta, 3000).unwrap();
        prop_assert!(a.partial_sum.powf(1.0 / a.p) >= b.partial_sum.powf(1.0 / b.p) - 1e-12);
        prop_assert!(a.partial_sum.powf(1.0 / a.p) <= a.norm_upper);
    }

    #[test]
    fn verdict_is_the_threshold_law(d in 2u32..=5, p in 1.0f64..8.0) {
        let e = schatten_norm_diff(d, p, 0.2, 100).unwrap();
        let excess = (d as f64 - 1.0) / 2.0 * (p - schatten_threshold(d));
        prop_assert_eq!(e.convergent, excess > CONVERGENCE_MARGIN);
        prop_assert_eq!(e.tail_bound.is_finite(), e.convergent);
    }
}

#[test]
fn tail_shrinks_with_cut() {
    let a = schatten_norm_diff(2, 8.0, 0.3, 1000).unwrap();
    let b = schatten_norm_diff(2, 8.0, 0.3, 10_000).unwrap();
    assert!(b.tail_bound < a.tail_bound / 10.0);
    assert!(b.norm_upper <= a.norm_upper);
    assert!(b.partial_sum >= a.partial_sum);
}

#[test]
fn higher_sphere_slopes_track_the_envelope_decay() {
    // on S^3 the bands decay like n^{-1}, so the S_p exponent is 1 - 3/p
    let deltas: Vec<f64> = (0..10).map(|k| 0.04 * 10f64.powf(k as f64 / 9.0)).collect();
    let p = 8.0;
    let points: Vec<(f64, f64)> =
        deltas.iter().map(|&d| (d, schatten_norm_diff(3, p, d, 20_000).unwrap().norm_upper)).collect();
    let slope = log_log_slope(&points);
    assert!((slope - (1.0 - 3.0 / p)).abs() < 0.08, "slope {slope}");
}
