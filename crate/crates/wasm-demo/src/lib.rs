//! WebAssembly bindings for the browser demo. Each export returns a JSON
//! string; the logic lives in plain functions so it can be tested natively.

use hyperstat::charsum::{char_sum, point_count, weil_bound};
use hyperstat::experiments::{compare_to_trinomial, moments_from, run_distribution, Mode, RunOptions};
use hyperstat::models::build_trinomial;
use hyperstat::poly::{count_squarefree, evaluate, is_squarefree};
use hyperstat::{FieldSpec, MonicPoly};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest census the page will run synchronously.
pub const EXHAUSTIVE_LIMIT: u128 = 2_000_000;
pub const MAX_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Serialize)]
pub struct Bar {
    pub s: i64,
    pub count: u64,
    pub empirical: f64,
    pub model: f64,
}

#[derive(Debug, Serialize)]
pub struct DistributionView {
    pub q: u32,
    pub d: usize,
    pub mode: Mode,
    pub total: u128,
    pub bars: Vec<Bar>,
    pub tv_distance: f64,
    pub max_rel_err: f64,
}

#[derive(Debug, Serialize)]
pub struct MomentPoint {
    pub k: u32,
    pub empirical: f64,
    pub model: f64,
    pub gaussian: f64,
    pub std_err: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct MomentsView {
    pub q: u32,
    pub d: usize,
    pub mode: Mode,
    pub total: u128,
    pub points: Vec<MomentPoint>,
}

#[derive(Debug, Serialize)]
pub struct CharSumView {
    pub q: u32,
    pub polynomial: String,
    pub degree: usize,
    pub squarefree: bool,
    pub values: Vec<u32>,
    pub chi: Vec<i8>,
    pub char_sum: i64,
    pub point_count: i64,
    pub weil_bound: f64,
}

/// Census when `|V_d|` fits the page budget, otherwise `samples` seeded draws.
fn options_for(field: &FieldSpec, d: usize, samples: u64, seed: u64) -> RunOptions {
    let size = (field.q() as u128).checked_pow(d as u32);
    match size {
        Some(n) if n <= EXHAUSTIVE_LIMIT => RunOptions::exhaustive().with_budget(EXHAUSTIVE_LIMIT).with_threads(1),
        _ => RunOptions::montecarlo(samples.clamp(1, MAX_SAMPLES), seed).with_threads(1),
    }
}

pub fn distribution_view(p: u64, k: u32, d: usize, samples: u64, seed: u64) -> Result<DistributionView, String> {
    let field = FieldSpec::new(p, k).map_err(|e| e.to_string())?;
    if d == 0 {
        return Err("degree must be at least 1".into());
    }
    let emp = run_distribution(&field, d, &options_for(&field, d, samples, seed)).map_err(|e| e.to_string())?;
    let report = compare_to_trinomial(&emp, &build_trinomial(field.q() as u64), 10.0).map_err(|e| e.to_string())?;
    Ok(DistributionView {
        q: field.q(),
        d,
        mode: emp.mode,
        total: emp.total,
        bars: report
            .rows
            .iter()
            .map(|r| Bar { s: r.s, count: r.count, empirical: r.empirical, model: r.model })
            .collect(),
        tv_distance: report.aggregates.tv_distance,
        max_rel_err: report.aggregates.max_rel_err,
    })
}

pub fn moments_view(p: u64, k: u32, d: usize, samples: u64, seed: u64, k_max: u32) -> Result<MomentsView, String> {
    let field = FieldSpec::new(p, k).map_err(|e| e.to_string())?;
    if d == 0 {
        return Err("degree must be at least 1".into());
    }
    let emp = run_distribution(&field, d, &options_for(&field, d, samples, seed)).map_err(|e| e.to_string())?;
    let report = moments_from(&emp, k_max.min(12), 10.0);
    Ok(MomentsView {
        q: field.q(),
        d,
        mode: emp.mode,
        total: emp.total,
        points: report
            .rows
            .iter()
            .filter(|r| r.k >= 1)
            .map(|r| MomentPoint {
                k: r.k,
                empirical: r.empirical,
                model: r.model,
                gaussian: r.gaussian.parse().unwrap_or(f64::NAN),
                std_err: r.std_err,
            })
            .collect(),
    })
}

/// `coeffs` lists the non-leading coefficients from `X^{d-1}` down to the
/// constant, separated by spaces or commas; elements are integer indices.
pub fn char_sum_view(p: u64, k: u32, coeffs: &str) -> Result<CharSumView, String> {
    let field = FieldSpec::new(p, k).map_err(|e| e.to_string())?;
    let mut parsed = coeffs
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().map_err(|_| format!("not a field element index: {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    parsed.reverse();
    let f = MonicPoly::in_field(&field, parsed).map_err(|e| e.to_string())?;
    let values: Vec<u32> = field.elements().map(|x| evaluate(&field, &f, x)).collect();
    Ok(CharSumView {
        q: field.q(),
        polynomial: f.display(),
        degree: f.degree(),
        squarefree: is_squarefree(&field, &f),
        chi: values.iter().map(|&v| field.quad_char(v)).collect(),
        values,
        char_sum: char_sum(&field, &f),
        point_count: point_count(&field, &f),
        weil_bound: weil_bound(field.q(), f.degree()),
    })
}

/// Number of square-free monic polynomials of degree `d`, as a decimal string.
pub fn squarefree_total(q: u64, d: u32) -> String {
    count_squarefree(q, d).to_string()
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn distribution(p: u32, k: u32, d: u32, samples: u32, seed: u32) -> Result<String, JsValue> {
    to_json(distribution_view(p as u64, k, d as usize, samples as u64, seed as u64))
}

#[wasm_bindgen]
pub fn moments(p: u32, k: u32, d: u32, samples: u32, seed: u32, k_max: u32) -> Result<String, JsValue> {
    to_json(moments_view(p as u64, k, d as usize, samples as u64, seed as u64, k_max))
}

#[wasm_bindgen]
pub fn char_sum_of(p: u32, k: u32, coeffs: &str) -> Result<String, JsValue> {
    to_json(char_sum_view(p as u64, k, coeffs))
}
