//! Browser bindings: each export takes plain strings and numbers and returns
//! a JSON document the page renders onto a canvas.

use qmarginal::marginal::build_qmarginal;
use qmarginal::qmci::{convergence_study_with, GroverEngine, OutcomePredicate, StudyConfig};
use qmarginal::reversible::{compile, stats};
use qmarginal::sampler::{make_builtin, parse_netlist, Builtin, GateNetwork};
use qmarginal::{verify_qmarginal, VerificationReport};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Browser-side width guard; the native simulator allows more.
const DEMO_QUBIT_CAP: usize = 20;

fn load(source: &str) -> Result<GateNetwork, String> {
    let source = source.trim();
    if let Ok(builtin) = source.parse::<Builtin>() {
        return make_builtin(builtin).map_err(|e| e.to_string());
    }
    parse_netlist(source).map_err(|e| e.to_string())
}

fn check_width(network: &GateNetwork) -> Result<(), String> {
    let width = network.num_inputs() + network.num_outputs() + network.gates().len();
    if width > DEMO_QUBIT_CAP {
        return Err(format!(
            "{width} qubits exceeds the demo cap of {DEMO_QUBIT_CAP}; use the CLI"
        ));
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo payloads serialize")
}

#[derive(Serialize)]
struct MarginalView {
    report: VerificationReport,
    gate_count: usize,
    hadamards: usize,
}

/// Exact vs simulated output distribution for a netlist or `popcount:3`-style
/// builtin.
pub fn marginal_json(source: &str) -> Result<String, String> {
    let network = load(source)?;
    check_width(&network)?;
    let report = verify_qmarginal(&network).map_err(|e| e.to_string())?;
    let u = compile(&network);
    Ok(json(&MarginalView {
        report,
        gate_count: stats(&u).gate_count,
        hadamards: network.num_inputs(),
    }))
}

#[derive(Serialize)]
struct GroverView {
    amplitude: f64,
    simulated: Vec<f64>,
    closed_form: Vec<f64>,
}

/// Marked probability after `k = 0..=max_power` Grover iterates, simulated
/// and from `sin^2((2k+1) asin(sqrt(a)))`.
pub fn grover_json(source: &str, predicate: &str, max_power: usize) -> Result<String, String> {
    let network = load(source)?;
    check_width(&network)?;
    let pred: OutcomePredicate = predicate.parse().map_err(|e: qmarginal::Error| e.to_string())?;
    let circuit = build_qmarginal(&compile(&network));
    let engine = GroverEngine::new(&circuit, &pred).map_err(|e| e.to_string())?;
    let powers: Vec<usize> = (0..=max_power.min(256)).collect();
    let simulated = engine.probabilities(&powers).map_err(|e| e.to_string())?;
    let amplitude = simulated[0];
    let theta = amplitude.sqrt().asin();
    let closed_form = powers
        .iter()
        .map(|&k| ((2 * k + 1) as f64 * theta).sin().powi(2))
        .collect();
    Ok(json(&GroverView {
        amplitude,
        simulated,
        closed_form,
    }))
}

/// Convergence table and fitted slopes for budgets `2^lo ..= 2^hi`.
pub fn convergence_json(
    source: &str,
    predicate: &str,
    lo: u32,
    hi: u32,
    repeats: usize,
    seed: u64,
) -> Result<String, String> {
    let network = load(source)?;
    check_width(&network)?;
    let pred: OutcomePredicate = predicate.parse().map_err(|e: qmarginal::Error| e.to_string())?;
    if lo >= hi || hi > 16 {
        return Err("need budgets 2^lo < 2^hi <= 2^16".into());
    }
    let budgets: Vec<u64> = (lo..=hi).map(|e| 1u64 << e).collect();
    // A coarser grid keeps the page responsive; resolution stays far below
    // the statistical error at these budgets.
    let mut config = StudyConfig::default();
    config.mle.grid_points = 20_000;
    let study = convergence_study_with(&network, &pred, &budgets, repeats.clamp(1, 200), seed, &config)
        .map_err(|e| e.to_string())?;
    Ok(json(&study))
}

#[wasm_bindgen(js_name = marginal)]
pub fn marginal_js(source: &str) -> Result<String, JsValue> {
    marginal_json(source).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = grover)]
pub fn grover_js(source: &str, predicate: &str, max_power: usize) -> Result<String, JsValue> {
    grover_json(source, predicate, max_power).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = convergence)]
pub fn convergence_js(
    source: &str,
    predicate: &str,
    lo: u32,
    hi: u32,
    repeats: usize,
    seed: u64,
) -> Result<String, JsValue> {
    convergence_json(source, predicate, lo, hi, repeats, seed).map_err(|e| JsValue::from_str(&e))
}
