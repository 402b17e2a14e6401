//! Browser demo. Each export takes plain strings and numbers and returns a
//! JSON document, so the page needs no bindings beyond `wasm-bindgen`.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use liegamma::coeffs::{coeff, coeff_closed, coeff_series, CoeffFamily};
use liegamma::groups::{adjoint_of, exp_group, jacobian_any};
use liegamma::linalg::{max_abs, norm_inf, MatN};
use liegamma::oracle::{expm_generic, quadrature_lift, series_eval, SeriesSpec};
use liegamma::so3::gamma_so3;
use liegamma::{curlywedge, wedge, GroupId, TangentVector};

/// Upper bound on curve resolution.
pub const MAX_POINTS: usize = 2000;

#[derive(Debug, Serialize)]
struct Curve {
    family: String,
    index: usize,
    phi: Vec<f64>,
    value: Vec<f64>,
    closed: Vec<Option<f64>>,
    series: Vec<f64>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Samples one coefficient on `[0, max_phi]`, alongside its raw closed form
/// and its power series, to show where the closed form loses accuracy.
pub fn coefficient_curve(
    family: &str,
    index: usize,
    max_phi: f64,
    points: usize,
    lambda: f64,
) -> Result<String, String> {
    let family: CoeffFamily = family.parse().map_err(|e: liegamma::Error| e.to_string())?;
    if !(max_phi > 0.0 && max_phi.is_finite()) {
        return Err("max angle must be positive".into());
    }
    let points = points.clamp(2, MAX_POINTS);
    let lambda = family.needs_lambda().then_some(lambda);
    let mut c = Curve {
        family: family.to_string(),
        index,
        phi: vec![],
        value: vec![],
        closed: vec![],
        series: vec![],
    };
    for k in 0..points {
        let phi = max_phi * k as f64 / (points - 1) as f64;
        c.phi.push(phi);
        c.value
            .push(coeff(family, index, phi, lambda).map_err(|e| e.to_string())?);
        c.closed
            .push(coeff_closed(family, index, phi, lambda).ok().and_then(finite));
        c.series
            .push(coeff_series(family, index, phi, lambda).map_err(|e| e.to_string())?);
    }
    serde_json::to_string(&c).map_err(|e| e.to_string())
}

fn parse_xi(group: &str, xi: &str) -> Result<TangentVector, String> {
    let g: GroupId = group.parse().map_err(|e: liegamma::Error| e.to_string())?;
    let coords = xi
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<Vec<_>, _>>()?;
    TangentVector::new(g.base(), &coords).map_err(|e| e.to_string())
}

fn rows(m: &MatN) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Evaluates `exp`, `adjoint` or `jacobian` at `xi` and reports the
/// residual against the generic oracle (matrix exponential or series).
pub fn evaluate_map(group: &str, xi: &str, quantity: &str) -> Result<String, String> {
    let x = parse_xi(group, xi)?;
    let (m, oracle, name) = match quantity {
        "exp" => (exp_group(&x).matrix, expm_generic(&wedge(&x)), "matrix exponential"),
        "adjoint" => (
            adjoint_of(&x).matrix,
            expm_generic(&curlywedge(&x)),
            "matrix exponential",
        ),
        "jacobian" => {
            let s = series_eval(&SeriesSpec::gamma(1, curlywedge(&x))).map_err(|e| e.to_string())?;
            (jacobian_any(&x), s, "series")
        }
        other => {
            return Err(format!(
                "unknown quantity `{other}` (expected exp, adjoint or jacobian)"
            ))
        }
    };
    let residual = max_abs(&(&m - &oracle)) / norm_inf(&oracle).max(1.0);
    Ok(json!({
        "group": x.group().name(),
        "layout": x.group().layout(),
        "quantity": quantity,
        "rows": rows(&m),
        "oracle": name,
        "residual": residual,
    })
    .to_string())
}

/// For the rotation kernels `Γ_ℓ`, compares the quadrature lift of level
/// `ℓ` with the closed or series value at level `ℓ + 1`.
pub fn recursion_residuals(phi: &str, max_ell: usize) -> Result<String, String> {
    let p = parse_xi("so3", phi)?;
    let TangentVector::So3 { phi } = p else {
        unreachable!("parsed as SO3")
    };
    let max_ell = max_ell.min(8);
    let levels: Vec<_> = (0..=max_ell)
        .map(|ell| {
            let lifted = quadrature_lift(|a| gamma_so3(ell, &(phi * a)), ell);
            let next = gamma_so3(ell + 1, &phi);
            json!({ "ell": ell, "residual": max_abs(&(lifted - next)) })
        })
        .collect();
    Ok(json!({ "phi": [phi.x, phi.y, phi.z], "angle": phi.norm(), "levels": levels }).to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = coefficientCurve)]
pub fn coefficient_curve_js(
    family: &str,
    index: usize,
    max_phi: f64,
    points: usize,
    lambda: f64,
) -> Result<String, JsValue> {
    js(coefficient_curve(family, index, max_phi, points, lambda))
}

#[wasm_bindgen(js_name = evaluateMap)]
pub fn evaluate_map_js(group: &str, xi: &str, quantity: &str) -> Result<String, JsValue> {
    js(evaluate_map(group, xi, quantity))
}

#[wasm_bindgen(js_name = recursionResiduals)]
pub fn recursion_residuals_js(phi: &str, max_ell: usize) -> Result<String, JsValue> {
    js(recursion_residuals(phi, max_ell))
}
