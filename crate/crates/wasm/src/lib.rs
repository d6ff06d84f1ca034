//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export has a plain Rust counterpart returning `Result<_, String>`
//! so the logic can be tested natively; the exports only convert errors.

use on_qkz::algebra::{verify_identities, IdentityKind, ModelParams};
use on_qkz::chain::{table_row, EdOptions, EigenSolver};
use on_qkz::thermo::{alpha, omega1_inf, phi};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest Hilbert-space dimension the page diagonalizes (dense, in the tab).
pub const MAX_BROWSER_DIM: usize = 4096;

fn params(n: usize) -> Result<ModelParams, String> {
    ModelParams::new(n).map_err(|e| e.to_string())
}

/// Which function of the thermodynamic solution to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    Omega1,
    Alpha,
    Phi,
}

impl Curve {
    pub fn parse(name: &str) -> Result<Self, String> {
        match name {
            "omega1" => Ok(Curve::Omega1),
            "alpha" => Ok(Curve::Alpha),
            "phi" => Ok(Curve::Phi),
            other => Err(format!("unknown curve {other:?}; expected omega1, alpha or phi")),
        }
    }
}

/// `points` equally spaced samples on `[from, to]`; poles become NaN so the
/// plot breaks there.
pub fn sample_curve(n: usize, curve: Curve, from: f64, to: f64, points: usize) -> Result<Vec<f64>, String> {
    let p = params(n)?;
    if points < 2 || to.partial_cmp(&from) != Some(std::cmp::Ordering::Greater) {
        return Err("need at least two points on a non-empty interval".into());
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let lambda = from + step * k as f64;
            let value = match curve {
                Curve::Omega1 => omega1_inf(&p, lambda),
                Curve::Alpha => alpha(&p, lambda),
                Curve::Phi => phi(&p, lambda),
            };
            value.unwrap_or(f64::NAN)
        })
        .collect())
}

#[derive(Debug, Serialize)]
pub struct IdentitySummary {
    pub n: usize,
    pub samples: usize,
    pub residuals: Vec<(&'static str, f64)>,
    pub hamiltonian: f64,
}

pub fn identity_summary(n: usize, samples: usize, seed: u64) -> Result<IdentitySummary, String> {
    let report = verify_identities(&params(n)?, samples, seed).map_err(|e| e.to_string())?;
    Ok(IdentitySummary {
        n,
        samples,
        residuals: IdentityKind::ALL.iter().map(|&k| (k.name(), report.max_residual(k))).collect(),
        hamiltonian: report.hamiltonian_residual,
    })
}

pub fn chain_row_json(n: usize, length: usize) -> Result<String, String> {
    let p = params(n)?;
    if length < 2 || length % 2 == 1 {
        return Err(format!("chain length must be even and at least 2, got {length}"));
    }
    let options = EdOptions {
        solver: EigenSolver::Dense,
        max_dim: MAX_BROWSER_DIM,
        ..EdOptions::default()
    };
    let row = table_row(&p, length, &options).map_err(|e| e.to_string())?;
    serde_json::to_string(&row).map_err(|e| e.to_string())
}

/// Samples ω₁, α or φ (selected by `curve`) on `[from, to]`.
#[wasm_bindgen(js_name = sampleCurve)]
pub fn sample_curve_js(n: usize, curve: &str, from: f64, to: f64, points: usize) -> Result<Vec<f64>, JsError> {
    Curve::parse(curve)
        .and_then(|c| sample_curve(n, c, from, to, points))
        .map_err(|e| JsError::new(&e))
}

/// Largest residual of each R-matrix identity at `samples` random points, as JSON.
#[wasm_bindgen(js_name = identityResiduals)]
pub fn identity_residuals_js(n: usize, samples: usize, seed: u32) -> Result<String, JsError> {
    identity_summary(n, samples, u64::from(seed))
        .and_then(|s| serde_json::to_string(&s).map_err(|e| e.to_string()))
        .map_err(|e| JsError::new(&e))
}

/// Table row of the periodic `length`-site chain, as JSON.
#[wasm_bindgen(js_name = chainRow)]
pub fn chain_row_js(n: usize, length: usize) -> Result<String, JsError> {
    chain_row_json(n, length).map_err(|e| JsError::new(&e))
}
