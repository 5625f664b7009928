//! Browser bindings: evaluate a code, lay out its checks, and scan tori.
//!
//! Every export returns a JSON string; the page in `www/` draws from it.

use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use zptoric::{
    build_checks, enumerate_tori, estimate_distance_with, k_max, k_twisted, parse_poly, stabilizer_range, CodeInstance,
    Dimension, EstimateOptions, PrimeModulus, TorusSpec,
};

fn instance(p: u32, f: &str, g: &str, alpha: u32, beta: u32, gamma: i32) -> Result<CodeInstance, String> {
    let pm = PrimeModulus::new(p as u64).map_err(|e| e.to_string())?;
    let f = parse_poly(f, pm).map_err(|e| format!("f: {e}"))?;
    let g = parse_poly(g, pm).map_err(|e| format!("g: {e}"))?;
    let t = TorusSpec::new(pm, alpha as usize, beta as usize, gamma as i64).map_err(|e| e.to_string())?;
    CodeInstance::new(f, g, t).map_err(|e| e.to_string())
}

/// `[[n, k, d]]` with `d` from a small seeded estimate (skipped when `sets` is 0).
pub fn evaluate_json(p: u32, f: &str, g: &str, alpha: u32, beta: u32, gamma: i32, sets: u32, seed: u32) -> Result<Value, String> {
    let c = instance(p, f, g, alpha, beta, gamma)?;
    let n = c.n();
    let k = k_twisted(&c.f, &c.g, &c.torus).map_err(|e| e.to_string())?;
    let checks = build_checks(&c);
    let mut out = json!({
        "n": n,
        "k": k,
        "k_oracle": checks.k(),
        "gamma": c.torus.gamma,
        "weight_max": checks.max_row_weight(),
        "range": stabilizer_range(&c),
    });
    if k > 0 && sets > 0 {
        let est = estimate_distance_with(&checks, &EstimateOptions::new(sets as usize, 1, seed as u64))
            .map_err(|e| e.to_string())?;
        out["d_upper"] = json!(est.d_upper);
        out["kd2_over_n"] = json!((k * est.d_upper * est.d_upper) as f64 / n as f64);
    }
    Ok(out)
}

#[derive(Serialize)]
struct Site {
    i: usize,
    j: usize,
    /// 1 or 2: the two qudits of a cell.
    kind: u8,
    coeff: u32,
}

/// The X check at the origin and the Z check at the origin, as torus sites.
pub fn layout_json(p: u32, f: &str, g: &str, alpha: u32, beta: u32, gamma: i32) -> Result<Value, String> {
    let c = instance(p, f, g, alpha, beta, gamma)?;
    let t = c.torus;
    let checks = build_checks(&c);
    let sites = |row: &[u32]| -> Vec<Site> {
        row.iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(q, &v)| {
                let s = t.site(q / 2);
                Site {
                    i: s.i,
                    j: s.j,
                    kind: (q % 2) as u8 + 1,
                    coeff: v,
                }
            })
            .collect()
    };
    Ok(json!({
        "alpha": t.alpha,
        "beta": t.beta,
        "gamma": t.gamma,
        "x_check": sites(checks.h_x.row(0)),
        "z_check": sites(checks.h_z.row(0)),
    }))
}

/// `k` on every torus with `n` in `[2, n_max]`, plus `k_max`.
pub fn landscape_json(p: u32, f: &str, g: &str, n_max: u32) -> Result<Value, String> {
    let pm = PrimeModulus::new(p as u64).map_err(|e| e.to_string())?;
    let fp = parse_poly(f, pm).map_err(|e| format!("f: {e}"))?;
    let gp = parse_poly(g, pm).map_err(|e| format!("g: {e}"))?;
    let km = k_max(&fp, &gp).map_err(|e| e.to_string())?;
    let mut points = Vec::new();
    for n in (2..=n_max.min(400) as usize).step_by(2) {
        for t in enumerate_tori(pm, n).map_err(|e| e.to_string())? {
            let k = k_twisted(&fp, &gp, &t).map_err(|e| e.to_string())?;
            points.push(json!({ "n": n, "alpha": t.alpha, "beta": t.beta, "gamma": t.gamma, "k": k }));
        }
    }
    let k_max = match km {
        Dimension::Finite(k) => json!(k),
        Dimension::Infinite => json!("infinite"),
    };
    Ok(json!({ "k_max": k_max, "points": points }))
}

fn finish(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn evaluate(p: u32, f: &str, g: &str, alpha: u32, beta: u32, gamma: i32, sets: u32, seed: u32) -> Result<String, JsError> {
    finish(evaluate_json(p, f, g, alpha, beta, gamma, sets, seed))
}

#[wasm_bindgen]
pub fn layout(p: u32, f: &str, g: &str, alpha: u32, beta: u32, gamma: i32) -> Result<String, JsError> {
    finish(layout_json(p, f, g, alpha, beta, gamma))
}

#[wasm_bindgen]
pub fn landscape(p: u32, f: &str, g: &str, n_max: u32) -> Result<String, JsError> {
    finish(landscape_json(p, f, g, n_max))
}
