//! End-to-end check that the built circuit prepares a Q-marginal of the
//! network's distribution: the output-register marginal matches the exact
//! tally, and every nonzero amplitude is `2^(-m/2)` with clean ancillas.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marginal::build_qmarginal;
use crate::reversible::compile;
use crate::sampler::{brute_force_distribution_with_cap, ExactDistribution, GateNetwork, DEFAULT_ENUMERATION_CAP};
use crate::statevector::{MeasuredDistribution, Statevector, DEFAULT_QUBIT_CAP};

/// Magnitude below which an amplitude counts as zero.
pub const NONZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    pub enumeration_cap: usize,
    pub qubit_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRow {
    pub outcome: usize,
    pub exact: f64,
    pub measured: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub num_inputs: usize,
    pub num_outputs: usize,
    pub num_ancillas: usize,
    pub max_abs_probability_error: f64,
    pub total_variation: f64,
    /// max over nonzero entries of `| |a_j| - 2^(-m/2) |`
    pub amplitude_uniformity_error: f64,
    pub nonzero_count: usize,
    pub ancilla_clean: bool,
    /// Every nonzero basis entry `|j>|i>|0>` has `i = f(j)`.
    pub outputs_consistent: bool,
    /// Largest imaginary part seen on a nonzero entry.
    pub max_imaginary: f64,
    pub tol: f64,
    pub passed: bool,
    pub outcomes: Vec<OutcomeRow>,
}

impl VerificationReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "registers: m={} n={} k={}",
            self.num_inputs, self.num_outputs, self.num_ancillas
        );
        let _ = writeln!(out, "outcome  exact                measured");
        for row in &self.outcomes {
            let _ = writeln!(
                out,
                "{:<8} {:<20} {:<20}",
                row.outcome, row.exact, row.measured
            );
        }
        let _ = writeln!(out, "max |dp|            {:e}", self.max_abs_probability_error);
        let _ = writeln!(out, "total variation     {:e}", self.total_variation);
        let _ = writeln!(out, "amplitude error     {:e}", self.amplitude_uniformity_error);
        let _ = writeln!(
            out,
            "nonzero amplitudes  {} (expected {})",
            self.nonzero_count,
            1u64 << self.num_inputs
        );
        let _ = writeln!(out, "ancillas clean      {}", self.ancilla_clean);
        let _ = writeln!(out, "outputs = f(inputs) {}", self.outputs_consistent);
        let _ = writeln!(
            out,
            "result              {}",
            if self.passed { "PASS" } else { "FAIL" }
        );
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionDistance {
    pub max_abs: f64,
    pub total_variation: f64,
}

pub fn distribution_distance(
    exact: &ExactDistribution,
    measured: &MeasuredDistribution,
) -> Result<DistributionDistance> {
    if exact.counts.len() != measured.probabilities.len() {
        return Err(Error::SizeMismatch(format!(
            "{} exact outcomes vs {} measured",
            exact.counts.len(),
            measured.probabilities.len()
        )));
    }
    let diffs = exact
        .probabilities()
        .into_iter()
        .zip(&measured.probabilities)
        .map(|(p, q)| (p - q).abs());
    let (max_abs, sum) = diffs.fold((0.0f64, 0.0), |(mx, s), d| (mx.max(d), s + d));
    Ok(DistributionDistance {
        max_abs,
        total_variation: 0.5 * sum,
    })
}

pub fn verify_qmarginal(network: &GateNetwork) -> Result<VerificationReport> {
    verify_qmarginal_with(network, &VerifyOptions::default())
}

/// compile -> build -> simulate -> compare against brute force.
pub fn verify_qmarginal_with(
    network: &GateNetwork,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let exact = brute_force_distribution_with_cap(network, options.enumeration_cap)?;
    let u = compile(network);
    let layout = u.layout();
    let circuit = build_qmarginal(&u);
    let mut state = Statevector::zero_with_cap(circuit.width(), options.qubit_cap)?;
    state.apply_circuit(&circuit)?;
    let measured = state.marginal_distribution(layout.output_range())?;
    let distance = distribution_distance(&exact, &measured)?;

    let m = layout.inputs;
    let expected_magnitude = (-(m as f64) / 2.0).exp2();
    let input_mask = (1usize << m) - 1;
    let output_mask = (1usize << layout.outputs) - 1;
    let mut uniformity = 0.0f64;
    let mut max_imaginary = 0.0f64;
    let mut ancilla_clean = true;
    let mut outputs_consistent = true;
    let nonzero = state.nonzero_amplitudes(NONZERO_TOL);
    for &(index, amp) in &nonzero {
        uniformity = uniformity.max((amp.norm() - expected_magnitude).abs());
        max_imaginary = max_imaginary.max(amp.im.abs());
        ancilla_clean &= index >> (m + layout.outputs) == 0;
        let j = (index & input_mask) as u64;
        let i = ((index >> m) & output_mask) as u64;
        outputs_consistent &= network.evaluate_word(j) == i;
    }

    let outcomes = exact
        .probabilities()
        .into_iter()
        .zip(&measured.probabilities)
        .enumerate()
        .map(|(outcome, (exact, &measured))| OutcomeRow {
            outcome,
            exact,
            measured,
        })
        .collect();

    let passed = distance.max_abs <= options.tol && uniformity <= options.tol && ancilla_clean;
    Ok(VerificationReport {
        num_inputs: m,
        num_outputs: layout.outputs,
        num_ancillas: layout.ancillas,
        max_abs_probability_error: distance.max_abs,
        total_variation: distance.total_variation,
        amplitude_uniformity_error: uniformity,
        nonzero_count: nonzero.len(),
        ancilla_clean,
        outputs_consistent,
        max_imaginary,
        tol: options.tol,
        passed,
        outcomes,
    })
}
