use proptest::prelude::*;
use sl3lab::orthopoly::{check_bernstein, holder_sup, linspace, PolyFamily};

fn family() -> impl Strategy<Value = PolyFamily> {
    (2u32..=6).prop_map(|d| PolyFamily::sphere(d).unwrap())
}

proptest! {
    #[test]
    fn parity(f in family(), n in 0usize..200, x in -1.0f64..=1.0) {
        let a = f.eval(n, x).unwrap();
        let b = f.eval(n, -x).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() <= 1e-13);
    }

    #[test]
    fn normalized_and_bounded(f in family(), n in 0usize..500, x in -1.0f64..=1.0) {
        prop_assert!((f.eval(n, 1.0).unwrap() - 1.0).abs() <= 1e-12);
        prop_assert!(f.eval(n, x).unwrap().abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn envelope_dominates(f in family(), n in 1usize..3000, x in -0.995f64..0.995) {
        let v = f.eval(n, x).unwrap().abs();
        prop_assert!(v <= f.envelope(n, x) + 1e-12, "|R_{}({})| = {} > {}", n, x, v, f.envelope(n, x));
    }

    #[test]
    fn derivative_matches_central_differences(f in family(), n in 1usize..30, x in -0.9f64..0.9) {
        // fourth-order stencil
        let h = 1e-3;
        let e = |y: f64| f.eval(n, y).unwrap();
        let fd = (e(x - 2.0 * h) - 8.0 * e(x - h) + 8.0 * e(x + h) - e(x + 2.0 * h)) / (12.0 * h);
        let d = f.eval_derivative(n, x).unwrap();
        let scale = (n * n) as f64;
        prop_assert!((d - fd).abs() <= 1e-6 * scale * scale, "n={} x={} {} vs {}", n, x, d, fd);
    }

    #[test]
    fn legendre_derivative_identity(n in 1usize..400, x in -0.99f64..0.99) {
        // (1 - x²) P'_n = n (P_{n-1} - x P_n)
        let p = PolyFamily::LEGENDRE;
        let lhs = (1.0 - x * x) * p.eval_derivative(n, x).unwrap();
        let rhs = n as f64 * (p.eval(n - 1, x).unwrap() - x * p.eval(n, x).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-10 * n as f64);
    }

    #[test]
    fn holder_bound_for_random_delta(delta in -1.0f64..=1.0) {
        let h = holder_sup(PolyFamily::LEGENDRE, delta, 3000).unwrap();
        prop_assert!(h.certified() <= 2.0 * delta.abs().sqrt() + 1e-12);
    }
}

#[test]
fn holder_sup_stable_under_larger_cut() {
    for delta in [0.09, 0.25, 0.5] {
        let a = holder_sup(PolyFamily::LEGENDRE, delta, 10_000).unwrap();
        let b = holder_sup(PolyFamily::LEGENDRE, delta, 20_000).unwrap();
        assert_eq!(a.sup_value, b.sup_value);
        assert!(b.tail_bound < a.tail_bound);
    }
    // mpmath
    let h = holder_sup(PolyFamily::LEGENDRE, 0.09, 10_000).unwrap();
    assert!((h.sup_value - 0.278_214_619_077_741_9).abs() < 1e-13);
    assert_eq!(h.argmax, 30);
    let h = holder_sup(PolyFamily::LEGENDRE, 0.5, 10_000).unwrap();
    assert!((h.sup_value - 0.6640625).abs() < 1e-15);
}

#[test]
fn bernstein_on_fine_grid_near_endpoints() {
    let grid = linspace(0.99, 0.9999, 200);
    let r = check_bernstein(2000, &grid).unwrap();
    assert!(r.passed(), "{:?}", r.violations.first());
}

#[test]
fn minimal_slack_example() {
    // mpmath: min over n ≤ 100 of bound - |P_n(0.5)| is attained at n = 99
    let r = check_bernstein(100, &[0.5]).unwrap();
    assert_eq!(r.worst_n, 99);
    assert!((r.worst_slack - 0.003_162_427_683_288_133).abs() < 1e-12);
}
