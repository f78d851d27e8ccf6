//! Browser bindings for the Schmidt analysis. Every entry point returns JSON
//! text; the page in `www/` draws it.
//!
//! The plain functions are what the bindings call and what the tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use schmidt_core::fixtures;
use schmidt_core::ketparse::parse_state;
use schmidt_core::report::{analyze, density_report, AnalysisOptions};
use schmidt_core::schmidt::{schmidt_decompose, DEFAULT_RANK_THRESHOLD};
use schmidt_core::{BipartitePureState, Matrix};

/// Full analysis report of a ket-v1 expression.
pub fn analyze_expression(expr: &str) -> Result<String, String> {
    let state = parse_state(expr).map_err(|e| e.to_string())?;
    let report = analyze(&state, &AnalysisOptions::default()).map_err(|e| e.to_string())?;
    Ok(report.to_json())
}

#[derive(Debug, Serialize)]
struct PathPoint {
    t: f64,
    schmidt_number: f64,
    entropy_bits: f64,
    lambdas: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct InterpolationPath {
    latin_labels: Vec<String>,
    greek_labels: Vec<String>,
    /// Points where the mixture vanishes are left out.
    points: Vec<PathPoint>,
}

fn union(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    out.extend(b.iter().filter(|l| !a.contains(l)).cloned());
    out
}

fn embed(s: &BipartitePureState, latin: &[String], greek: &[String]) -> Matrix {
    let mut m = Matrix::zeros(latin.len(), greek.len());
    for (i, l) in s.latin_labels().iter().enumerate() {
        let r = latin.iter().position(|x| x == l).expect("label in union");
        for (j, g) in s.greek_labels().iter().enumerate() {
            let c = greek.iter().position(|x| x == g).expect("label in union");
            m[(r, c)] = s.amplitudes()[(i, j)];
        }
    }
    m
}

/// K and entropy along `(1 − t)·Ψ_from + t·Ψ_to` (both normalized first,
/// bases merged by label) for `steps + 1` evenly spaced `t`.
pub fn interpolate_expressions(from: &str, to: &str, steps: usize) -> Result<String, String> {
    if steps == 0 {
        return Err("need at least one step".into());
    }
    let parse = |text: &str| {
        parse_state(text)
            .and_then(|s| s.normalized())
            .map_err(|e| e.to_string())
    };
    let (a, b) = (parse(from)?, parse(to)?);
    let latin = union(a.latin_labels(), b.latin_labels());
    let greek = union(a.greek_labels(), b.greek_labels());
    let (ma, mb) = (embed(&a, &latin, &greek), embed(&b, &latin, &greek));

    let mut points = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 / steps as f64;
        let mix = ma.scale((1.0 - t).into()).add(&mb.scale(t.into())).map_err(|e| e.to_string())?;
        if mix.frobenius_sqr() < 1e-20 {
            continue;
        }
        let state = BipartitePureState::new(latin.clone(), greek.clone(), mix)
            .and_then(|s| s.normalized())
            .map_err(|e| e.to_string())?;
        let d = schmidt_decompose(&state, DEFAULT_RANK_THRESHOLD).map_err(|e| e.to_string())?;
        points.push(PathPoint {
            t,
            schmidt_number: d.schmidt_number(),
            entropy_bits: d.entropy(),
            lambdas: d.lambdas,
        });
    }
    let path = InterpolationPath {
        latin_labels: latin,
        greek_labels: greek,
        points,
    };
    serde_json::to_string(&path).map_err(|e| e.to_string())
}

/// Density matrix of `bell` or `classical` with its partial traces and
/// conditional states, compared against the other one.
pub fn density_json(name: &str) -> Result<String, String> {
    let (qm, cl) = (fixtures::rho_qm(), fixtures::rho_cl());
    let report = match name {
        "bell" => density_report("bell", &qm, "classical", &cl, 1e-12),
        "classical" => density_report("classical", &cl, "bell", &qm, 1e-12),
        other => return Err(format!("unknown density example `{other}` (expected bell or classical)")),
    };
    report.map(|r| r.to_json()).map_err(|e| e.to_string())
}

/// Ket-v1 text of a built-in state (`psi0` … `psi3`).
pub fn example_text(name: &str) -> Result<String, String> {
    fixtures::expression(name)
        .map(str::to_owned)
        .ok_or_else(|| format!("unknown example `{name}` (expected one of {})", fixtures::STATE_NAMES.join(", ")))
}

#[wasm_bindgen(js_name = analyze)]
pub fn analyze_js(expr: &str) -> Result<String, JsError> {
    analyze_expression(expr).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = interpolate)]
pub fn interpolate_js(from: &str, to: &str, steps: usize) -> Result<String, JsError> {
    interpolate_expressions(from, to, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = density)]
pub fn density_js(name: &str) -> Result<String, JsError> {
    density_json(name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = example)]
pub fn example_js(name: &str) -> Result<String, JsError> {
    example_text(name).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn json(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn analyze_psi0() {
        let v = json(&analyze_expression(fixtures::PSI0_EXPR).unwrap());
        assert!((v["schmidt_number"].as_f64().unwrap() - 144.0 / 122.0).abs() < 1e-9);
        assert_eq!(v["lambdas"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn analyze_reports_parse_position() {
        let err = analyze_expression("|a>(x)").unwrap_err();
        assert!(err.contains("column"), "{err}");
    }

    #[test]
    fn path_from_product_to_bell() {
        let v = json(&interpolate_expressions("|a>(x)|alpha>", "|a>(x)|alpha> + |b>(x)|beta>", 10).unwrap());
        let pts = v["points"].as_array().unwrap();
        assert_eq!(pts.len(), 11);
        let k = |i: usize| pts[i]["schmidt_number"].as_f64().unwrap();
        assert!((k(0) - 1.0).abs() < 1e-12);
        assert!((k(10) - 2.0).abs() < 1e-9);
        for i in 1..=10 {
            assert!(k(i) >= k(i - 1) - 1e-12, "K should grow along this path");
        }
        assert_eq!(v["latin_labels"], serde_json::json!(["a", "b"]));
    }

    #[test]
    fn path_skips_the_vanishing_point() {
        let v = json(&interpolate_expressions("|a>(x)|x>", "-|a>(x)|x>", 2).unwrap());
        let ts: Vec<f64> = v["points"].as_array().unwrap().iter().map(|p| p["t"].as_f64().unwrap()).collect();
        assert_eq!(ts, vec![0.0, 1.0]);
    }

    #[test]
    fn path_needs_steps() {
        assert!(interpolate_expressions("|a>(x)|x>", "|a>(x)|x>", 0).is_err());
        assert!(interpolate_expressions("|a>", "|a>(x)|x>", 4).is_err());
    }

    #[test]
    fn density_examples() {
        let v = json(&density_json("bell").unwrap());
        assert_eq!(v["differs_at"], serde_json::json!([[1, 2], [2, 1]]));
        let v = json(&density_json("classical").unwrap());
        assert!((v["purity"].as_f64().unwrap() - 0.5).abs() < 1e-12);
        assert!(density_json("psi0").is_err());
    }

    #[test]
    fn example_texts_parse() {
        for name in fixtures::STATE_NAMES {
            assert!(analyze_expression(&example_text(name).unwrap()).is_ok());
        }
        assert!(example_text("bell").unwrap_err().contains("psi0"));
    }
}
