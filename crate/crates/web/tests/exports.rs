use mmult7_web::{component_ids, component_json, w_degeneration_json, w_probe_json};
use serde_json::Value;

#[test]
fn component_membership() {
    let v: Value = serde_json::from_str(&component_json("J_S4_T2", 1, 4).unwrap()).unwrap();
    assert_eq!(v["contains"], true);
    assert_eq!(v["plane_dimension"], 6);
    assert!(component_json("nope", 0, 4).unwrap_err().contains("nope"));
}

#[test]
fn ids_listed() {
    let v: Value = serde_json::from_str(&component_ids()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 16);
}

#[test]
fn w_degeneration_slope_one() {
    let v: Value = serde_json::from_str(&w_degeneration_json(8).unwrap()).unwrap();
    let slope = v["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.2, "{slope}");
}

#[test]
fn w_probe_hits_caps() {
    let v: Value = serde_json::from_str(&w_probe_json(&[2.0, 4.0], 2, 3000).unwrap()).unwrap();
    let r: Vec<f64> = v["residuals"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(r[1] < r[0]);
}
