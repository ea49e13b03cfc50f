//! Acceptance gate: one pass/fail line per criterion, nonzero exit on any
//! failure. Runs as a plain binary (`harness = false`).

use nalgebra::{Matrix3, Rotation3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl3lab::cayley::{
    build_cayley, dense_lambda2, enumerate_group, group_order, spectral_gap, GeneratorSet, RegularGraph,
    SpectralOptions, DEFAULT_MAX_VERTICES,
};
use sl3lab::orthopoly::{check_bernstein, holder_sup, linspace, PolyFamily};
use sl3lab::sphere_ops::{
    funk_hecke_oracle, log_log_slope, op_norm_diff, schatten_norm_diff, schatten_partial_sums, schatten_threshold,
};
use sl3lab::weyl::{kak, plan_zigzag, synthetic_coeff_check, WeylPoint};
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// 101 equispaced points of `[-1, 1]`.
fn delta_grid() -> Vec<f64> {
    linspace(-1.0, 1.0, 101)
}

fn holder_certification() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut worst_delta = 0.0;
    for delta in delta_grid() {
        let h = holder_sup(PolyFamily::LEGENDRE, delta, 10_000).map_err(|e| e.to_string())?;
        let slack = h.certified() - 2.0 * delta.abs().sqrt();
        if slack > worst {
            worst = slack;
            worst_delta = delta;
        }
    }
    ensure(worst <= 1e-12, format!("max(sup, tail) - 2 sqrt|delta| <= {worst:.3e} (at delta = {worst_delta})"))
}

fn bernstein() -> Outcome {
    let grid = linspace(-0.999, 0.999, 2001);
    let r = check_bernstein(1000, &grid).map_err(|e| e.to_string())?;
    ensure(
        r.passed(),
        format!("{} violations, worst slack {:.3e} at n = {}, x = {}", r.violations.len(), r.worst_slack, r.worst_n, r.worst_x),
    )
}

fn funk_hecke() -> Outcome {
    let mut worst: f64 = 0.0;
    for delta in [-0.9, -0.35, 0.0, 0.3, 0.7] {
        let exact = PolyFamily::LEGENDRE.eval_upto(50, delta).map_err(|e| e.to_string())?;
        for (n, p) in exact.iter().enumerate() {
            let q = funk_hecke_oracle(2, n, delta, 1024).map_err(|e| e.to_string())?;
            worst = worst.max((q - p).abs());
        }
    }
    ensure(worst <= 1e-8, format!("max |quadrature - P_n(delta)| = {worst:.3e}"))
}

fn operator_norm() -> Outcome {
    let grid = delta_grid();
    let interior = &grid[1..grid.len() - 1];
    let mut worst = f64::NEG_INFINITY;
    for &delta in interior {
        let r = op_norm_diff(2, delta, 10_000).map_err(|e| e.to_string())?;
        worst = worst.max(r.certified_upper - 2.0 * delta.abs().sqrt());
    }
    ensure(worst <= 0.0, format!("{} interior deltas, max(upper - 2 sqrt|delta|) = {worst:.3e}", interior.len()))
}

fn schatten_slopes() -> Outcome {
    let deltas: Vec<f64> = linspace(0.04f64.ln(), 0.4f64.ln(), 12).into_iter().map(f64::exp).collect();
    let mut lines = Vec::new();
    let mut ok = true;
    for p in [6.0, 8.0, 12.0] {
        let mut points = Vec::new();
        for &d in &deltas {
            let e = schatten_norm_diff(2, p, d, 20_000).map_err(|e| e.to_string())?;
            points.push((d, e.norm_upper));
        }
        let slope = log_log_slope(&points);
        let expected = 0.5 - 2.0 / p;
        ok &= (slope - expected).abs() <= 0.05;
        lines.push(format!("p={p}: {slope:.4} vs {expected:.4}"));
    }
    ensure(ok, lines.join(", "))
}

fn s4_divergence() -> Outcome {
    let s = schatten_partial_sums(2, 4.0, 0.3, &[100, 1000, 10_000]).map_err(|e| e.to_string())?;
    let ratio = (s[2] - s[1]) / (s[1] - s[0]);
    ensure(
        s[0] < s[1] && s[1] < s[2] && (0.7..=1.3).contains(&ratio),
        format!("partial sums {:.6}, {:.6}, {:.6}; increment ratio {ratio:.5}", s[0], s[1], s[2]),
    )
}

fn threshold_flip() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for d in [2u32, 3, 4] {
        let thr = schatten_threshold(d);
        let verdict = |p: f64| schatten_norm_diff(d, p, 0.3, 1000).map(|e| e.convergent).map_err(|e| e.to_string());
        let below = verdict(thr - 1e-3)?;
        let at = verdict(thr)?;
        let above = verdict(thr + 1e-3)?;
        ok &= !below && !at && above;
        lines.push(format!("d={d}: threshold {thr:.4} [{below} {at} {above}]"));
    }
    ensure(ok, lines.join(", "))
}

fn endpoint(scale: f64, offset: f64) -> WeylPoint {
    if offset >= 0.0 {
        WeylPoint::new(scale, offset, -scale - offset).unwrap()
    } else {
        WeylPoint::new(scale - offset, offset, -scale).unwrap()
    }
}

fn zigzag_soundness() -> Outcome {
    let scales = linspace(2.0, 40.0, 20);
    let offsets = [-1.5, -0.75, 0.0, 0.75, 1.5];
    let mut worst_ratio: f64 = 0.0;
    let mut failures = 0;
    for (i, &mp) in scales.iter().enumerate() {
        for (j, &mq) in scales.iter().enumerate() {
            let p = endpoint(mp, offsets[i % 5]);
            let q = endpoint(mq, offsets[(3 * j + 1) % 5]);
            let c = plan_zigzag(p, q).map_err(|e| e.to_string())?;
            let bound = 100.0 * (-mp / 2.0).exp().max((-mq / 2.0).exp());
            if c.verify().is_err() || c.total_bound > bound {
                failures += 1;
            }
            worst_ratio = worst_ratio.max(c.total_bound / bound);
        }
    }
    let mut seed_failures = Vec::new();
    for seed in 0..100 {
        if !synthetic_coeff_check(seed).map_err(|e| e.to_string())?.passed() {
            seed_failures.push(seed);
        }
    }
    ensure(
        failures == 0 && seed_failures.is_empty(),
        format!(
            "400 pairs, {failures} unsound, max total/bound = {worst_ratio:.4}; synthetic seeds failing: {seed_failures:?}"
        ),
    )
}

fn kak_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rotation = |rng: &mut ChaCha8Rng| {
        let a: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
        Rotation3::from_euler_angles(a[0], a[1], a[2]).into_inner()
    };
    let mut worst: f64 = 0.0;
    let mut worst_point: f64 = 0.0;
    for _ in 0..1000 {
        let mut c: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-4.0..4.0));
        c.sort_by(|a, b| b.total_cmp(a));
        let mean = (c[0] + c[1] + c[2]) / 3.0;
        let p = WeylPoint::new(c[0] - mean, c[1] - mean, c[2] - mean).unwrap();
        let (k1, k2): (Matrix3<f64>, Matrix3<f64>) = (rotation(&mut rng), rotation(&mut rng));
        let g = k1 * p.diag() * k2;
        let d = kak(&g).map_err(|e| e.to_string())?;
        worst = worst.max((d.reconstruct() - g).norm());
        worst_point = worst_point.max(d.point.distance(&p));
    }
    ensure(worst <= 1e-8, format!("max reconstruction error {worst:.3e}, max chamber-point error {worst_point:.3e}"))
}

fn group_orders() -> Outcome {
    // q³(q²−1)(q³−1) for q = 2, 3, 5; the kernel of reduction mod 2 adds 2⁸ for n = 4
    let expected = [(2u32, 8 * 3 * 7), (3, 27 * 8 * 26), (4, 8 * 3 * 7 * 256), (5, 125 * 24 * 124)];
    let mut lines = Vec::new();
    let mut ok = true;
    for (n, order) in expected {
        let g = enumerate_group(n, DEFAULT_MAX_VERTICES).map_err(|e| e.to_string())?;
        ok &= g.len() == order && group_order(n) == order as u128;
        lines.push(format!("n={n}: {}", g.len()));
    }
    ensure(ok, lines.join(", "))
}

fn spectral_gaps() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for n in [2u32, 3, 4, 5] {
        let g = build_cayley(n, GeneratorSet::Elementary).map_err(|e| e.to_string())?;
        let runs: Vec<_> = [1, 2, 8]
            .into_iter()
            .map(|t| spectral_gap(g.graph(), &SpectralOptions { threads: Some(t), ..Default::default() }))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let identical = runs.iter().all(|r| r == &runs[0]);
        let r = runs[0];
        ok &= identical && r.gap_normalized > 0.0 && r.residual <= 1e-8;
        let mut line = format!(
            "n={n}: lambda2 {:.10}, gap {:.6}, threads identical {identical}",
            r.lambda2, r.gap_normalized
        );
        if g.vertices() <= 6000 {
            let dense = dense_lambda2(g.graph()).map_err(|e| e.to_string())?;
            let diff = (dense - r.lambda2).abs();
            ok &= diff <= 1e-6;
            line.push_str(&format!(", dense diff {diff:.2e}"));
        }
        lines.push(line);
    }
    ensure(ok, lines.join("; "))
}

fn fixtures() -> Outcome {
    let opts = SpectralOptions::default();
    let k4 = spectral_gap(&RegularGraph::complete(4).map_err(|e| e.to_string())?, &opts).map_err(|e| e.to_string())?;
    let c6 = spectral_gap(&RegularGraph::cycle(6).map_err(|e| e.to_string())?, &opts).map_err(|e| e.to_string())?;
    let (ek, ec) = ((k4.lambda2 - 4.0).abs(), (c6.lambda2 - 1.0).abs());
    ensure(ek <= 1e-10 && ec <= 1e-10, format!("K4 lambda2 {} (err {ek:.1e}), C6 lambda2 {} (err {ec:.1e})", k4.lambda2, c6.lambda2))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("holder-1/2 certification", holder_certification),
        ("bernstein inequality", bernstein),
        ("funk-hecke quadrature", funk_hecke),
        ("operator-norm bound", operator_norm),
        ("schatten exponent", schatten_slopes),
        ("S4 log divergence", s4_divergence),
        ("S^d threshold flip", threshold_flip),
        ("zig-zag soundness", zigzag_soundness),
        ("KAK round trip", kak_round_trip),
        ("group orders", group_orders),
        ("spectral gap", spectral_gaps),
        ("fixture eigenvalues", fixtures),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2}. {name} ({secs:.2}s): {detail}", k + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
