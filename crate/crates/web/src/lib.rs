//! Browser bindings. Every export returns a JSON string so the page can render it
//! without extra glue; the `*_json` functions are the same operations for native use.

use mmult7::catalog::{normal_form, sample, witness_curves, ComponentId};
use mmult7::numeric::{border_rank_probe, degeneration_residual, log_log_slope, AlsConfig, FloatTensor};
use mmult7::rational::frac;
use mmult7::segre::{plane_contains, wedge_taylor_first_term, ProductCurve};
use mmult7::tensor::{basis_vector, w_tensor};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Samples a σ₆ component and checks that the limit plane of its witness curves
/// contains the sampled tensor.
pub fn component_json(id: &str, seed: u64, dim: usize) -> Result<String, String> {
    let id: ComponentId = id.parse().map_err(|e: mmult7::Error| e.to_string())?;
    let (spec, x) = sample(id, seed, (dim, dim, dim)).map_err(|e| e.to_string())?;
    let curves = witness_curves(&spec).map_err(|e| e.to_string())?;
    let limit = wedge_taylor_first_term(&curves).map_err(|e| e.to_string())?;
    let nf = normal_form(&spec).map_err(|e| e.to_string())?;
    Ok(json!({
        "component": id.name(),
        "seed": seed,
        "dims": [dim, dim, dim],
        "curves": curves.len(),
        "vanishing_order": limit.vanishing_order,
        "plane_dimension": limit.plane_basis.len(),
        "degenerate": limit.degenerate,
        "contains": plane_contains(&limit, &x) && nf == x,
        "nonzero_entries": x.nonzero_count(),
    })
    .to_string())
}

/// Best rank-2 residual of the W tensor under each term-norm cap.
pub fn w_probe_json(caps: &[f64], restarts: usize, sweeps: usize) -> Result<String, String> {
    let t = FloatTensor::from_exact(&w_tensor());
    let cfg = AlsConfig { restarts, max_sweeps: sweeps, ..AlsConfig::new(2) };
    let reports = border_rank_probe(&t, &cfg, caps).map_err(|e| e.to_string())?;
    let residuals: Vec<f64> = reports.iter().map(|r| r.best_residual).collect();
    Ok(json!({
        "caps": caps,
        "residuals": residuals,
        "max_term_norms": reports.iter().map(|r| r.max_term_norm).collect::<Vec<_>>(),
        "slope": log_log_slope(caps, &residuals).map(|s| -s),
    })
    .to_string())
}

/// Distance from W to span{e₁⊗e₁⊗e₁, (e₁+te₂)^⊗3} at t = 1/2, 1/4, … (`steps` values).
pub fn w_degeneration_json(steps: usize) -> Result<String, String> {
    let (e1, e2) = (basis_vector(2, 0), basis_vector(2, 1));
    let line = vec![e1.clone(), e2];
    let moving = ProductCurve::new(line.clone(), line.clone(), line).jet(3);
    let fixed = ProductCurve::new(vec![e1.clone()], vec![e1.clone()], vec![e1]).jet(3);
    let ts: Vec<_> = (1..=steps as u32).map(|k| frac(1, 1i64 << k.min(40))).collect();
    let series = degeneration_residual(&[fixed, moving], &w_tensor(), &ts).map_err(|e| e.to_string())?;
    serde_json::to_string(&series).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn component(id: &str, seed: u32, dim: u32) -> Result<String, JsValue> {
    js(component_json(id, seed as u64, dim as usize))
}

#[wasm_bindgen]
pub fn w_probe(caps: Vec<f64>, restarts: u32, sweeps: u32) -> Result<String, JsValue> {
    js(w_probe_json(&caps, restarts as usize, sweeps as usize))
}

#[wasm_bindgen]
pub fn w_degeneration(steps: u32) -> Result<String, JsValue> {
    js(w_degeneration_json(steps as usize))
}

#[wasm_bindgen]
pub fn component_ids() -> String {
    json!(ComponentId::ALL.iter().map(|c| c.name()).collect::<Vec<_>>()).to_string()
}
