use crate::config::{parse_grid, Common, LegendreFile};
use crate::output::emit;
use crate::{CliError, LegendreArgs};
use serde::Serialize;
use sl3lab::orthopoly::{check_bernstein_scaled, holder_sup, linspace, BernsteinReport, PolyFamily, VIOLATION_TOLERANCE};

#[derive(Debug, Serialize)]
struct Settings {
    delta_grid: String,
    n_cut: usize,
    bernstein_n: usize,
    bernstein_points: usize,
    fault_scale: f64,
}

#[derive(Debug, Serialize)]
struct Row {
    delta: f64,
    n_cut: usize,
    sup_value: f64,
    argmax: usize,
    tail_bound: f64,
    certified: f64,
    bound: f64,
    pass: bool,
}

#[derive(Serialize)]
struct Body<'a> {
    settings: &'a Settings,
    holder: &'a [Row],
    bernstein: BernsteinSummary,
}

#[derive(Serialize)]
struct BernsteinSummary {
    n_max: usize,
    points: usize,
    worst_slack: f64,
    worst_n: usize,
    worst_x: f64,
    violations: usize,
}

impl From<&BernsteinReport> for BernsteinSummary {
    fn from(r: &BernsteinReport) -> Self {
        BernsteinSummary {
            n_max: r.n_max,
            points: r.points,
            worst_slack: r.worst_slack,
            worst_n: r.worst_n,
            worst_x: r.worst_x,
            violations: r.violations.len(),
        }
    }
}

pub fn run(common: &Common, args: &LegendreArgs, file: &LegendreFile) -> Result<bool, CliError> {
    let settings = Settings {
        delta_grid: args.delta_grid.clone().or(file.delta_grid.clone()).unwrap_or_else(|| "-1:1:0.02".into()),
        n_cut: args.n_cut.or(file.n_cut).unwrap_or(10_000),
        bernstein_n: args.bernstein_n.or(file.bernstein_n).unwrap_or(1000),
        bernstein_points: args.bernstein_points.or(file.bernstein_points).unwrap_or(2001),
        fault_scale: args.fault_scale.unwrap_or(1.0),
    };
    let deltas = parse_grid(&settings.delta_grid)?;
    if let Some(d) = deltas.iter().find(|d| d.abs() > 1.0) {
        return Err(CliError::Config(format!("delta {d} outside [-1, 1]")));
    }
    if settings.n_cut < 1 || settings.bernstein_n < 1 || settings.bernstein_points < 1 {
        return Err(CliError::Config("n-cut, bernstein-n and bernstein-points must be positive".into()));
    }
    if !(settings.fault_scale > 0.0) {
        return Err(CliError::Config("fault scale must be positive".into()));
    }

    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in &deltas {
        let h = holder_sup(PolyFamily::LEGENDRE, delta, settings.n_cut).map_err(CliError::config)?;
        let bound = settings.fault_scale * 2.0 * delta.abs().sqrt();
        rows.push(Row {
            delta,
            n_cut: settings.n_cut,
            sup_value: h.sup_value,
            argmax: h.argmax,
            tail_bound: h.tail_bound,
            certified: h.certified(),
            bound,
            pass: h.certified() <= bound + VIOLATION_TOLERANCE,
        });
    }
    let grid = if settings.bernstein_points == 1 {
        vec![0.0]
    } else {
        linspace(-0.999, 0.999, settings.bernstein_points)
    };
    let bernstein = check_bernstein_scaled(settings.bernstein_n, &grid, settings.fault_scale).map_err(CliError::config)?;

    let holder_failures = rows.iter().filter(|r| !r.pass).count();
    let passed = holder_failures == 0 && bernstein.passed();
    eprintln!(
        "legendre: {} deltas, {holder_failures} holder failures; bernstein n <= {} on {} points, {} violations (worst slack {:.3e})",
        rows.len(),
        bernstein.n_max,
        bernstein.points,
        bernstein.violations.len(),
        bernstein.worst_slack
    );
    let body = Body { settings: &settings, holder: &rows, bernstein: (&bernstein).into() };
    emit(common, "legendre", passed, &rows, &body)?;
    Ok(passed)
}
