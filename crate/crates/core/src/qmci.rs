//! Probability estimation over the Q-marginal circuit.
//!
//! The integrand is the indicator of an outcome set `S`, so the target is
//! `a = P(f(X) in S)`. The quantum estimator runs the Grover iterate
//! `Q = -A S_0 A^dag S_chi` at a schedule of powers and fits `a` by maximum
//! likelihood; the classical estimator evaluates the network on uniform
//! inputs. Both count queries as uses of the sampling circuit.
//!
//! Randomness comes from ChaCha8 keyed by `seed_from_u64(seed)`, with the
//! 64-bit stream selector distinguishing independent runs, so every record is
//! reproducible across platforms.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::distr::{Bernoulli, Distribution};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marginal::{build_qmarginal, QuantumCircuit};
use crate::reversible::compile;
use crate::sampler::{brute_force_distribution_with_cap, GateNetwork, DEFAULT_ENUMERATION_CAP};
use crate::statevector::{Statevector, DEFAULT_QUBIT_CAP};

/// Outcome set `S` on the output register.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomePredicate {
    Set(Vec<usize>),
    /// outcome >= K
    AtLeast(usize),
    /// outcome <= K
    AtMost(usize),
}

impl OutcomePredicate {
    pub fn contains(&self, outcome: usize) -> bool {
        match self {
            OutcomePredicate::Set(s) => s.contains(&outcome),
            OutcomePredicate::AtLeast(k) => outcome >= *k,
            OutcomePredicate::AtMost(k) => outcome <= *k,
        }
    }

    /// Membership table over all `2^n` outcomes.
    pub fn marked(&self, num_outputs: usize) -> Result<Vec<bool>> {
        if num_outputs >= 32 {
            return Err(Error::InvalidPredicate("too many output bits".into()));
        }
        let outcomes = 1usize << num_outputs;
        if let OutcomePredicate::Set(s) = self {
            if let Some(&bad) = s.iter().find(|&&o| o >= outcomes) {
                return Err(Error::InvalidPredicate(format!(
                    "outcome {bad} does not fit in {num_outputs} bits"
                )));
            }
        }
        let marked: Vec<bool> = (0..outcomes).map(|o| self.contains(o)).collect();
        match marked.iter().filter(|&&b| b).count() {
            0 => Err(Error::InvalidPredicate(format!("{self} selects no outcome"))),
            c if c == outcomes => Err(Error::InvalidPredicate(format!(
                "{self} selects every outcome"
            ))),
            _ => Ok(marked),
        }
    }
}

impl std::fmt::Display for OutcomePredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OutcomePredicate::Set(s) => {
                let items: Vec<String> = s.iter().map(|o| o.to_string()).collect();
                write!(f, "set:{}", items.join(","))
            }
            OutcomePredicate::AtLeast(k) => write!(f, "ge:{k}"),
            OutcomePredicate::AtMost(k) => write!(f, "le:{k}"),
        }
    }
}

impl FromStr for OutcomePredicate {
    type Err = Error;

    /// `set:0,1`, `ge:K` or `le:K`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPredicate(format!("cannot parse `{s}`"));
        let (mode, payload) = s.split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match mode {
            "set" => Ok(OutcomePredicate::Set(
                payload.split(',').map(num).collect::<Result<_>>()?,
            )),
            "ge" => Ok(OutcomePredicate::AtLeast(num(payload)?)),
            "le" => Ok(OutcomePredicate::AtMost(num(payload)?)),
            _ => Err(bad()),
        }
    }
}

/// `a = sum_{i in S} counts[i] / 2^m`.
pub fn exact_amplitude(network: &GateNetwork, pred: &OutcomePredicate) -> Result<f64> {
    exact_amplitude_with_cap(network, pred, DEFAULT_ENUMERATION_CAP)
}

pub fn exact_amplitude_with_cap(
    network: &GateNetwork,
    pred: &OutcomePredicate,
    cap: usize,
) -> Result<f64> {
    let dist = brute_force_distribution_with_cap(network, cap)?;
    let hits: u64 = dist
        .counts
        .iter()
        .enumerate()
        .filter(|(i, _)| pred.contains(*i))
        .map(|(_, &c)| c)
        .sum();
    Ok(hits as f64 / (dist.log2_denominator as f64).exp2())
}

/// Seeded generator for one independent run.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Amplitude amplification over a built Q-marginal circuit `A`.
#[derive(Debug, Clone)]
pub struct GroverEngine {
    forward: QuantumCircuit,
    inverse: QuantumCircuit,
    marked: Vec<bool>,
}

impl GroverEngine {
    pub fn new(circuit: &QuantumCircuit, pred: &OutcomePredicate) -> Result<Self> {
        Self::with_cap(circuit, pred, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(circuit: &QuantumCircuit, pred: &OutcomePredicate, cap: usize) -> Result<Self> {
        if circuit.width() > cap {
            return Err(Error::QubitCap {
                width: circuit.width(),
                cap,
            });
        }
        Ok(Self {
            forward: circuit.clone(),
            inverse: circuit.inverse(),
            marked: pred.marked(circuit.layout().outputs)?,
        })
    }

    fn output_value(&self, index: usize) -> usize {
        let layout = self.forward.layout();
        (index >> layout.inputs) & ((1 << layout.outputs) - 1)
    }

    fn reflect_marked(&self, state: &mut Statevector) {
        for (i, a) in state.amplitudes_mut().iter_mut().enumerate() {
            if self.marked[self.output_value(i)] {
                *a = -*a;
            }
        }
    }

    fn marked_probability(&self, state: &Statevector) -> f64 {
        state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| self.marked[self.output_value(*i)])
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// One application of `Q = -A S_0 A^dag S_chi`.
    fn iterate(&self, state: &mut Statevector) -> Result<()> {
        self.reflect_marked(state);
        state.apply_circuit(&self.inverse)?;
        let origin = &mut state.amplitudes_mut()[0];
        *origin = -*origin;
        state.apply_circuit(&self.forward)?;
        state.amplitudes_mut().iter_mut().for_each(|a| *a = -*a);
        Ok(())
    }

    /// Marked probability after `k` iterates, for each `k` in `powers`.
    pub fn probabilities(&self, powers: &[usize]) -> Result<Vec<f64>> {
        let max = powers.iter().copied().max().unwrap_or(0);
        let mut state = Statevector::zero_with_cap(self.forward.width(), usize::MAX)?;
        state.apply_circuit(&self.forward)?;
        let mut by_power = Vec::with_capacity(max + 1);
        by_power.push(self.marked_probability(&state));
        for _ in 0..max {
            self.iterate(&mut state)?;
            by_power.push(self.marked_probability(&state));
        }
        Ok(powers.iter().map(|&k| by_power[k]).collect())
    }
}

/// Probability of measuring an outcome in `S` after `Q^k A |0>`.
pub fn grover_power_probability(circuit: &QuantumCircuit, pred: &OutcomePredicate, k: usize) -> Result<f64> {
    Ok(GroverEngine::new(circuit, pred)?.probabilities(&[k])?[0])
}

/// Applications of `A` (or its inverse) used by one shot at power `k`.
pub fn queries_per_shot(k: usize) -> u64 {
    2 * k as u64 + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Classical,
    Mlae,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Classical => "classical",
            Method::Mlae => "mlae",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationRecord {
    pub method: Method,
    pub estimate: f64,
    pub true_value: f64,
    pub queries: u64,
    pub shots_used: u64,
    pub seed: u64,
    /// Every power saw all misses or all hits; the estimate sits on a grid edge.
    pub degenerate: bool,
}

impl EstimationRecord {
    pub const CSV_HEADER: &'static str = "method,estimate,true_value,queries,shots_used,seed,degenerate";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.method.name(),
            self.estimate,
            self.true_value,
            self.queries,
            self.shots_used,
            self.seed,
            self.degenerate
        )
    }
}

/// Likelihood maximization settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MleConfig {
    /// Points on the `[0, pi/2]` grid, endpoints included.
    pub grid_points: usize,
    pub refine_rounds: usize,
    pub ternary_steps: usize,
}

impl Default for MleConfig {
    fn default() -> Self {
        Self {
            grid_points: 100_000,
            refine_rounds: 3,
            ternary_steps: 20,
        }
    }
}

/// Hit counts observed at one Grover power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerObservation {
    pub power: usize,
    pub shots: u64,
    pub hits: u64,
}

fn log_likelihood(theta: f64, observations: &[PowerObservation]) -> f64 {
    observations
        .iter()
        .map(|o| {
            let (s, c) = ((2 * o.power + 1) as f64 * theta).sin_cos();
            let mut ll = 0.0;
            if o.hits > 0 {
                ll += o.hits as f64 * (s * s).ln();
            }
            if o.hits < o.shots {
                ll += (o.shots - o.hits) as f64 * (c * c).ln();
            }
            ll
        })
        .sum()
}

/// Returns `(theta_hat, degenerate)` maximizing
/// `prod_k sin^2((2k+1)theta)^h_k cos^2((2k+1)theta)^(N_k - h_k)`.
pub fn maximize_likelihood(observations: &[PowerObservation], config: &MleConfig) -> (f64, bool) {
    let degenerate = observations.iter().all(|o| o.hits == 0)
        || observations.iter().all(|o| o.hits == o.shots);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let points = config.grid_points.max(2);
    let step = half_pi / (points - 1) as f64;

    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..points {
        let ll = log_likelihood(i as f64 * step, observations);
        if ll > best.1 {
            best = (i, ll);
        }
    }
    let mut theta = best.0 as f64 * step;
    let mut best_ll = best.1;
    if degenerate {
        return (theta, true);
    }

    let mut half_width = step;
    for _ in 0..config.refine_rounds {
        let (mut lo, mut hi) = ((theta - half_width).max(0.0), (theta + half_width).min(half_pi));
        for _ in 0..config.ternary_steps {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if log_likelihood(m1, observations) < log_likelihood(m2, observations) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let candidate = 0.5 * (lo + hi);
        let ll = log_likelihood(candidate, observations);
        if ll >= best_ll {
            theta = candidate;
            best_ll = ll;
        }
        half_width = (hi - lo).max(f64::EPSILON);
    }
    (theta, false)
}

fn draw_hits<R: RngCore>(rng: &mut R, p: f64, shots: u64) -> u64 {
    let coin = Bernoulli::new(p.clamp(0.0, 1.0)).expect("probability clamped to [0, 1]");
    (0..shots).filter(|_| coin.sample(rng)).count() as u64
}

/// MLAE from precomputed marked probabilities, one per schedule entry.
pub fn mlae_from_probabilities<R: RngCore>(
    schedule: &[usize],
    probabilities: &[f64],
    shots_per_k: u64,
    rng: &mut R,
    config: &MleConfig,
) -> (f64, bool, u64) {
    let observations: Vec<PowerObservation> = schedule
        .iter()
        .zip(probabilities)
        .map(|(&power, &p)| PowerObservation {
            power,
            shots: shots_per_k,
            hits: draw_hits(rng, p, shots_per_k),
        })
        .collect();
    let (theta, degenerate) = maximize_likelihood(&observations, config);
    let queries = schedule.iter().map(|&k| shots_per_k * queries_per_shot(k)).sum();
    let s = theta.sin();
    (s * s, degenerate, queries)
}

pub fn mlae_estimate(
    circuit: &QuantumCircuit,
    pred: &OutcomePredicate,
    schedule: &[usize],
    shots_per_k: u64,
    seed: u64,
) -> Result<EstimationRecord> {
    if schedule.is_empty() {
        return Err(Error::InvalidParams("schedule is empty".into()));
    }
    if shots_per_k == 0 {
        return Err(Error::InvalidParams("shots must be at least 1".into()));
    }
    let engine = GroverEngine::new(circuit, pred)?;
    let true_value = engine.probabilities(&[0])?[0];
    let probabilities = engine.probabilities(schedule)?;
    let mut rng = stream_rng(seed, 0);
    let (estimate, degenerate, queries) =
        mlae_from_probabilities(schedule, &probabilities, shots_per_k, &mut rng, &MleConfig::default());
    Ok(EstimationRecord {
        method: Method::Mlae,
        estimate,
        true_value,
        queries,
        shots_used: shots_per_k * schedule.len() as u64,
        seed,
        degenerate,
    })
}

fn classical_hits<R: RngCore>(network: &GateNetwork, marked: &[bool], samples: u64, rng: &mut R) -> u64 {
    let m = network.num_inputs();
    let mask = if m >= 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut wires = Vec::with_capacity(network.num_wires());
    (0..samples)
        .filter(|_| {
            let x = rng.next_u64() & mask;
            marked[network.evaluate_word_with(x, &mut wires) as usize]
        })
        .count() as u64
}

/// Membership table without the nonempty/not-full requirement.
fn membership(pred: &OutcomePredicate, num_outputs: usize) -> Result<Vec<bool>> {
    if num_outputs >= 32 {
        return Err(Error::InvalidPredicate("too many output bits".into()));
    }
    if let OutcomePredicate::Set(s) = pred {
        if s.is_empty() || s.iter().any(|&o| o >> num_outputs != 0) {
            return Err(Error::InvalidPredicate(format!(
                "{pred} is not a nonempty set of {num_outputs}-bit outcomes"
            )));
        }
    }
    Ok((0..1usize << num_outputs).map(|o| pred.contains(o)).collect())
}

pub fn classical_mc_estimate(
    network: &GateNetwork,
    pred: &OutcomePredicate,
    num_samples: u64,
    seed: u64,
) -> Result<EstimationRecord> {
    if num_samples == 0 {
        return Err(Error::InvalidParams("need at least one sample".into()));
    }
    let marked = membership(pred, network.num_outputs())?;
    let true_value = exact_amplitude(network, pred)?;
    let hits = classical_hits(network, &marked, num_samples, &mut stream_rng(seed, 0));
    Ok(EstimationRecord {
        method: Method::Classical,
        estimate: hits as f64 / num_samples as f64,
        true_value,
        queries: num_samples,
        shots_used: num_samples,
        seed,
        degenerate: false,
    })
}

/// Largest power schedule `[0, 1, 2, 4, ...]` that fits `budget` with at
/// least `min_shots` per power; shots are then raised to fill the budget.
pub fn schedule_for_budget(budget: u64, min_shots: u64) -> Option<(Vec<usize>, u64)> {
    let min_shots = min_shots.max(1);
    let cost = |s: &[usize]| s.iter().map(|&k| queries_per_shot(k)).sum::<u64>();
    let mut schedule = vec![0usize];
    if cost(&schedule) * min_shots > budget {
        return None;
    }
    loop {
        let next = match schedule.last() {
            Some(0) => 1,
            Some(&k) => 2 * k,
            None => unreachable!(),
        };
        schedule.push(next);
        if cost(&schedule) * min_shots > budget {
            schedule.pop();
            break;
        }
    }
    let shots = budget / cost(&schedule);
    Some((schedule, shots))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudyConfig {
    pub min_shots: u64,
    pub mle: MleConfig,
    pub enumeration_cap: usize,
    pub qubit_cap: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            min_shots: 24,
            mle: MleConfig::default(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub method: Method,
    pub budget: u64,
    pub queries: u64,
    pub rmse: f64,
    /// Only MLAE rows carry a schedule.
    pub schedule: Vec<usize>,
    pub shots_per_k: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares of `ln(rmse)` on `ln(queries)`.
pub fn fit_log_log(points: &[(u64, f64)]) -> LogLogFit {
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    LogLogFit {
        slope,
        intercept: my - slope * mx,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fits {
    pub classical: LogLogFit,
    pub mlae: LogLogFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub true_value: f64,
    pub repeats: usize,
    pub seed: u64,
    pub rows: Vec<StudyRow>,
    pub fits: Fits,
}

#[derive(Serialize)]
struct PerMethod {
    classical: f64,
    mlae: f64,
}

#[derive(Serialize)]
struct Summary {
    slopes: PerMethod,
    intercepts: PerMethod,
    repeats: usize,
    seed: u64,
}

impl ConvergenceStudy {
    /// `method,queries,rmse`, classical rows first, budgets ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,queries,rmse\n");
        for row in &self.rows {
            let _ = writeln!(out, "{},{},{}", row.method.name(), row.queries, row.rmse);
        }
        out
    }

    /// Serializable `{slopes, intercepts, repeats, seed}` summary.
    pub fn summary(&self) -> impl Serialize {
        Summary {
            slopes: PerMethod {
                classical: self.fits.classical.slope,
                mlae: self.fits.mlae.slope,
            },
            intercepts: PerMethod {
                classical: self.fits.classical.intercept,
                mlae: self.fits.mlae.intercept,
            },
            repeats: self.repeats,
            seed: self.seed,
        }
    }

    /// MLAE slope over classical slope; 2 for a quadratic query advantage.
    pub fn advantage_ratio(&self) -> f64 {
        self.fits.mlae.slope / self.fits.classical.slope
    }

    pub fn rows_for(&self, method: Method) -> impl Iterator<Item = &StudyRow> {
        self.rows.iter().filter(move |r| r.method == method)
    }
}

fn stream_id(method: Method, budget_index: usize, repeat: usize) -> u64 {
    let tag = match method {
        Method::Classical => 1u64,
        Method::Mlae => 2,
    };
    (tag << 48) | ((budget_index as u64) << 24) | repeat as u64
}

#[cfg(feature = "parallel")]
fn map_repeats<F: Fn(usize) -> f64 + Sync + Send>(repeats: usize, f: F) -> Vec<f64> {
    use rayon::prelude::*;
    (0..repeats).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_repeats<F: Fn(usize) -> f64>(repeats: usize, f: F) -> Vec<f64> {
    (0..repeats).map(f).collect()
}

fn rmse(errors: &[f64]) -> f64 {
    (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt()
}

pub fn convergence_study(
    network: &GateNetwork,
    pred: &OutcomePredicate,
    budgets: &[u64],
    repeats: usize,
    seed: u64,
) -> Result<ConvergenceStudy> {
    convergence_study_with(network, pred, budgets, repeats, seed, &StudyConfig::default())
}

/// Runs `repeats` seeded estimates per (method, budget) and fits the
/// log-log error law of each method.
pub fn convergence_study_with(
    network: &GateNetwork,
    pred: &OutcomePredicate,
    budgets: &[u64],
    repeats: usize,
    seed: u64,
    config: &StudyConfig,
) -> Result<ConvergenceStudy> {
    if budgets.len() < 2 {
        return Err(Error::InvalidParams("need at least two budgets to fit a slope".into()));
    }
    if budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("budgets must be strictly ascending".into()));
    }
    if repeats == 0 {
        return Err(Error::InvalidParams("repeats must be at least 1".into()));
    }
    let marked = membership(pred, network.num_outputs())?;
    let true_value = exact_amplitude_with_cap(network, pred, config.enumeration_cap)?;
    if true_value <= 0.0 || true_value >= 1.0 {
        return Err(Error::InvalidPredicate(format!(
            "{pred} has probability {true_value}; estimation needs 0 < a < 1"
        )));
    }

    let schedules = budgets
        .iter()
        .map(|&b| schedule_for_budget(b, config.min_shots).ok_or(Error::BudgetTooSmall(b)))
        .collect::<Result<Vec<_>>>()?;
    let max_power = schedules
        .iter()
        .flat_map(|(s, _)| s.iter().copied())
        .max()
        .unwrap_or(0);
    let circuit = build_qmarginal(&compile(network));
    let engine = GroverEngine::with_cap(&circuit, pred, config.qubit_cap)?;
    let all_powers: Vec<usize> = (0..=max_power).collect();
    let by_power = engine.probabilities(&all_powers)?;

    let mut rows = Vec::with_capacity(2 * budgets.len());
    for (bi, &budget) in budgets.iter().enumerate() {
        let errors = map_repeats(repeats, |r| {
            let mut rng = stream_rng(seed, stream_id(Method::Classical, bi, r));
            let hits = classical_hits(network, &marked, budget, &mut rng);
            hits as f64 / budget as f64 - true_value
        });
        rows.push(StudyRow {
            method: Method::Classical,
            budget,
            queries: budget,
            rmse: rmse(&errors),
            schedule: Vec::new(),
            shots_per_k: 0,
        });
    }
    for (bi, (&budget, (schedule, shots))) in budgets.iter().zip(&schedules).enumerate() {
        let probabilities: Vec<f64> = schedule.iter().map(|&k| by_power[k]).collect();
        let errors = map_repeats(repeats, |r| {
            let mut rng = stream_rng(seed, stream_id(Method::Mlae, bi, r));
            let (estimate, _, _) =
                mlae_from_probabilities(schedule, &probabilities, *shots, &mut rng, &config.mle);
            estimate - true_value
        });
        rows.push(StudyRow {
            method: Method::Mlae,
            budget,
            queries: schedule.iter().map(|&k| shots * queries_per_shot(k)).sum(),
            rmse: rmse(&errors),
            schedule: schedule.clone(),
            shots_per_k: *shots,
        });
    }

    let fit = |method| {
        let points: Vec<(u64, f64)> = rows
            .iter()
            .filter(|r: &&StudyRow| r.method == method)
            .map(|r| (r.queries, r.rmse))
            .collect();
        fit_log_log(&points)
    };
    let fits = Fits {
        classical: fit(Method::Classical),
        mlae: fit(Method::Mlae),
    };
    Ok(ConvergenceStudy {
        true_value,
        repeats,
        seed,
        rows,
        fits,
    })
}
