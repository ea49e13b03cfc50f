//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain Rust function so the numerics can
//! be tested natively; the wrappers only translate errors into `JsError`.

use sl3lab::orthopoly::{linspace, PolyFamily};
use sl3lab::sphere_ops::{op_norm_diff, schatten_norm_diff, SCHATTEN_DELTA_RANGE};
use sl3lab::weyl::{plan_zigzag_with_growth, GrowthRate, WeylPoint};
use wasm_bindgen::prelude::*;

const MAX_DEGREE: usize = 100_000;
const MAX_POINTS: usize = 2_000;

/// `|R_n(δ) - R_n(0)|` for `n = 0..=n_max` on the 2-sphere.
pub fn legendre_differences(delta: f64, n_max: usize) -> Result<Vec<f64>, String> {
    if n_max > MAX_DEGREE {
        return Err(format!("n_max above {MAX_DEGREE}"));
    }
    let f = PolyFamily::LEGENDRE;
    let a = f.values(delta).map_err(|e| e.to_string())?;
    let b = f.values(0.0).map_err(|e| e.to_string())?;
    Ok(a.zip(b).take(n_max + 1).map(|(x, y)| (x - y).abs()).collect())
}

/// Rows `[δ, ‖T_δ - T_0‖, S_p upper bound or NaN]` for `δ` in `[0, 1/2]`.
pub fn tdelta_curve(dim: u32, p: f64, points: usize, n_cut: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_POINTS).contains(&points) || n_cut > MAX_DEGREE {
        return Err(format!("need 2..={MAX_POINTS} points and n_cut <= {MAX_DEGREE}"));
    }
    let mut out = Vec::with_capacity(3 * points);
    for delta in linspace(0.0, SCHATTEN_DELTA_RANGE, points) {
        let op = op_norm_diff(dim, delta, n_cut).map_err(|e| e.to_string())?;
        let s = schatten_norm_diff(dim, p, delta, n_cut).map_err(|e| e.to_string())?;
        out.extend([delta, op.certified_upper, if s.convergent { s.norm_upper } else { f64::NAN }]);
    }
    Ok(out)
}

/// Zig-zag certificate between two chamber points, as JSON.
pub fn zigzag_json(p: [f64; 3], q: [f64; 3], alpha: f64) -> Result<String, String> {
    let point = |v: [f64; 3]| WeylPoint::new(v[0], v[1], v[2]).map_err(|e| e.to_string());
    let growth = GrowthRate::new(alpha).map_err(|e| e.to_string())?;
    let c = plan_zigzag_with_growth(point(p)?, point(q)?, growth).map_err(|e| e.to_string())?;
    serde_json::to_string(&c).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = legendreDifferences)]
pub fn legendre_differences_js(delta: f64, n_max: usize) -> Result<Vec<f64>, JsError> {
    legendre_differences(delta, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = tdeltaCurve)]
pub fn tdelta_curve_js(dim: u32, p: f64, points: usize, n_cut: usize) -> Result<Vec<f64>, JsError> {
    tdelta_curve(dim, p, points, n_cut).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = zigzag)]
#[allow(clippy::too_many_arguments)]
pub fn zigzag_js(pr: f64, ps: f64, pt: f64, qr: f64, qs: f64, qt: f64, alpha: f64) -> Result<String, JsError> {
    zigzag_json([pr, ps, pt], [qr, qs, qt], alpha).map_err(|e| JsError::new(&e))
}
