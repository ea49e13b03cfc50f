use crate::config::{Common, WeylFile};
use crate::output::emit;
use crate::{CliError, WeylArgs};
use serde::Serialize;
use sl3lab::orthopoly::linspace;
use sl3lab::weyl::{plan_zigzag_with_growth, synthetic_coeff_check, GrowthRate, WeylPoint, ZigZagCertificate};

#[derive(Debug, Serialize)]
struct Settings {
    grid: usize,
    seeds: u64,
    first_seed: u64,
    alpha: f64,
    pair: Option<String>,
}

#[derive(Debug, Serialize)]
struct Row {
    p_r: f64,
    p_s: f64,
    p_t: f64,
    q_r: f64,
    q_s: f64,
    q_t: f64,
    links: usize,
    total_bound: f64,
    closed_form_bound: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct SyntheticSummary {
    seeds: u64,
    failing_seeds: Vec<u64>,
    max_ratio: f64,
}

#[derive(Serialize)]
struct Body<'a> {
    settings: &'a Settings,
    certificates: &'a [ZigZagCertificate],
    synthetic: &'a SyntheticSummary,
}

fn parse_point(s: &str) -> Result<WeylPoint, CliError> {
    let v = crate::config::parse_list::<f64>(s, "coordinate")?;
    let [r, s_, t] = v[..] else {
        return Err(CliError::Config(format!("point '{s}' needs three coordinates r,s,t")));
    };
    WeylPoint::new(r, s_, t).map_err(CliError::config)
}

/// `"r,s,t;r,s,t"`
fn parse_pair(input: &str) -> Result<(WeylPoint, WeylPoint), CliError> {
    let parts: Vec<&str> = input.split(';').collect();
    let [p, q] = parts[..] else {
        return Err(CliError::Config(format!("pair '{input}' must look like r,s,t;r,s,t")));
    };
    Ok((parse_point(p)?, parse_point(q)?))
}

/// Point with `min(r, -t) = m` and middle coordinate `off` (`|off| ≤ m`).
fn at_scale(m: f64, off: f64) -> WeylPoint {
    if off >= 0.0 {
        WeylPoint { r: m, s: off, t: -m - off }
    } else {
        WeylPoint { r: m - off, s: off, t: -m }
    }
}

fn grid_pairs(size: usize) -> Vec<(WeylPoint, WeylPoint)> {
    let scales = linspace(2.0, 40.0, size);
    let offsets = [-1.5, -0.75, 0.0, 0.75, 1.5];
    let mut pairs = Vec::with_capacity(size * size);
    for (i, &mp) in scales.iter().enumerate() {
        for (j, &mq) in scales.iter().enumerate() {
            pairs.push((at_scale(mp, offsets[i % 5]), at_scale(mq, offsets[(3 * j + 1) % 5])));
        }
    }
    pairs
}

pub fn run(common: &Common, args: &WeylArgs, file: &WeylFile) -> Result<bool, CliError> {
    let settings = Settings {
        grid: args.grid.or(file.grid).unwrap_or(20),
        seeds: args.seeds.or(file.seeds).unwrap_or(100),
        first_seed: common.seed,
        alpha: args.alpha.or(file.alpha).unwrap_or(0.0),
        pair: args.pair.clone().or(file.pair.clone()),
    };
    let growth = GrowthRate::new(settings.alpha).map_err(CliError::config)?;
    let pairs = match &settings.pair {
        Some(input) => vec![parse_pair(input)?],
        None => grid_pairs(settings.grid),
    };

    let mut rows = Vec::with_capacity(pairs.len());
    let mut certificates = Vec::with_capacity(pairs.len());
    for (p, q) in pairs {
        let c = plan_zigzag_with_growth(p, q, growth).map_err(CliError::config)?;
        let pass = c.verify().is_ok() && c.total_bound <= c.closed_form_bound;
        rows.push(Row {
            p_r: p.r,
            p_s: p.s,
            p_t: p.t,
            q_r: q.r,
            q_s: q.s,
            q_t: q.t,
            links: c.waypoints.len().saturating_sub(1),
            total_bound: c.total_bound,
            closed_form_bound: c.closed_form_bound,
            pass,
        });
        certificates.push(c);
    }

    let mut synthetic = SyntheticSummary { seeds: settings.seeds, failing_seeds: Vec::new(), max_ratio: 0.0 };
    for seed in settings.first_seed..settings.first_seed.saturating_add(settings.seeds) {
        let r = synthetic_coeff_check(seed).map_err(CliError::config)?;
        synthetic.max_ratio = synthetic.max_ratio.max(r.max_ratio);
        if !r.passed() {
            synthetic.failing_seeds.push(seed);
        }
    }

    let failures = rows.iter().filter(|r| !r.pass).count();
    let passed = failures == 0 && synthetic.failing_seeds.is_empty();
    eprintln!(
        "weyl: {} certificates ({failures} failing) at alpha = {}; synthetic seeds {}..{}: {} failing",
        rows.len(),
        settings.alpha,
        settings.first_seed,
        settings.first_seed.saturating_add(settings.seeds),
        synthetic.failing_seeds.len()
    );
    let body = Body { settings: &settings, certificates: &certificates, synthetic: &synthetic };
    emit(common, "weyl", passed, &rows, &body)?;
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_parsing() {
        let (p, q) = parse_pair("4,0,-4;6,0,-6").unwrap();
        assert_eq!((p.r, q.t), (4.0, -6.0));
        assert!(parse_pair("4,0,-4").is_err());
        assert!(parse_pair("0,4,-4;6,0,-6").is_err());
        assert!(parse_pair("4,0;6,0,-6").is_err());
    }

    #[test]
    fn grid_points_are_in_the_chamber() {
        for (p, q) in grid_pairs(7) {
            for x in [p, q] {
                let checked = WeylPoint::new(x.r, x.s, x.t).unwrap();
                assert!(checked.scale() >= 2.0 - 1e-12);
            }
        }
    }
}
