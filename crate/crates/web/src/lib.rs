//! Browser bindings for the static demo page in `www/`.
//!
//! The plain functions carry the logic so they can be tested natively; the
//! `#[wasm_bindgen]` wrappers only convert errors to JS strings.

use rcs_core::sim::{run_monte_carlo, Metric, SimConfig};
use rcs_core::units::db_to_linear;
use rcs_core::{builtin_model, svg, BeamPattern, UnifiedRcsModel};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_DROPS: usize = 20_000;

fn models(labels: &str) -> Result<Vec<UnifiedRcsModel>, String> {
    let v: Vec<_> = labels
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|l| builtin_model(l).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err("select at least one target".into());
    }
    Ok(v)
}

/// Polar plot of B1 for a comma-separated list of builtin targets.
pub fn pattern_svg_impl(labels: &str) -> Result<String, String> {
    let ms = models(labels)?;
    let series: Vec<(&str, &BeamPattern)> = ms.iter().map(|m| (m.target_label.as_str(), &m.b1)).collect();
    Ok(svg::polar_pattern("B1 azimuth pattern", &series))
}

#[derive(Serialize)]
struct SigmaPoint {
    a_db: f64,
    b1_db: f64,
    b2_db: f64,
    sigma_dbsm: f64,
    extrapolated: bool,
}

/// σ(f, φ) with B2 pinned at a quantile of its law (0.5 gives the median draw).
pub fn eval_sigma_impl(label: &str, freq_ghz: f64, phi_deg: f64, b2_quantile: f64) -> Result<String, String> {
    let m = builtin_model(label).map_err(|e| e.to_string())?;
    if !(b2_quantile > 0.0 && b2_quantile < 1.0) {
        return Err("B2 quantile must lie in (0, 1)".into());
    }
    let b2 = quantile_linear(&m, b2_quantile);
    let s = m.eval_sigma(freq_ghz, phi_deg, b2).map_err(|e| e.to_string())?;
    serde_json::to_string(&SigmaPoint {
        a_db: s.a_db,
        b1_db: s.b1_db,
        b2_db: s.b2_db,
        sigma_dbsm: s.dbsm,
        extrapolated: s.extrapolated,
    })
    .map_err(|e| e.to_string())
}

// bisection on the dB-domain CDF; every family's CDF is monotone there
fn quantile_linear(m: &UnifiedRcsModel, q: f64) -> f64 {
    let (mut lo, mut hi) = (-80.0, 80.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if m.b2.cdf_db(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    db_to_linear(0.5 * (lo + hi))
}

/// Overlaid CDFs of one channel metric from a Monte Carlo run per target.
pub fn simulate_cdf_svg_impl(
    labels: &str,
    freq_ghz: f64,
    drops: usize,
    seed: u64,
    metric: &str,
) -> Result<String, String> {
    let metric = match metric {
        "path_loss" => Metric::PathLoss,
        "delay_spread" => Metric::DelaySpread,
        "angle_spread" => Metric::AngleSpread,
        other => return Err(format!("unknown metric `{other}`")),
    };
    if drops == 0 || drops > MAX_DROPS {
        return Err(format!("drops must lie in 1..={MAX_DROPS}"));
    }
    let mut curves = Vec::new();
    for m in models(labels)? {
        let cfg = SimConfig {
            target_label: m.target_label.clone(),
            carrier_freq_ghz: freq_ghz,
            drops,
            seed,
            ..SimConfig::default()
        };
        let run = run_monte_carlo(&cfg).map_err(|e| e.to_string())?;
        curves.push((m.target_label, run.cdf(metric).map_err(|e| e.to_string())?));
    }
    let series: Vec<(&str, &[(f64, f64)])> = curves.iter().map(|(l, c)| (l.as_str(), c.as_slice())).collect();
    Ok(svg::cdf_plot(
        &format!("CDF at {freq_ghz} GHz"),
        metric.column(),
        &series,
    ))
}

#[wasm_bindgen]
pub fn pattern_svg(labels: &str) -> Result<String, JsValue> {
    pattern_svg_impl(labels).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn eval_sigma(label: &str, freq_ghz: f64, phi_deg: f64, b2_quantile: f64) -> Result<String, JsValue> {
    eval_sigma_impl(label, freq_ghz, phi_deg, b2_quantile).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn simulate_cdf_svg(labels: &str, freq_ghz: f64, drops: u32, seed: u32, metric: &str) -> Result<String, JsValue> {
    simulate_cdf_svg_impl(labels, freq_ghz, drops as usize, seed as u64, metric).map_err(|e| JsValue::from_str(&e))
}
