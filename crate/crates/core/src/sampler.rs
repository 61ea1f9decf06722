//! Classical sampling circuits: a boolean gate network `f: {0,1}^m -> {0,1}^n`
//! which, fed uniformly random input bits, samples from a target distribution.
//!
//! Wires are numbered `0..m` for the inputs followed by one wire per gate in
//! definition order. Bit 0 of any integer encoding is the least significant
//! bit; bitstrings are printed most significant bit first.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, NetlistError, Result};

/// Default bound on `m` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Index into the wire space of a [`GateNetwork`].
pub type WireId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateOp {
    Not,
    And,
    Or,
    Xor,
    Const0,
    Const1,
}

impl GateOp {
    pub const ALL: [GateOp; 6] = [
        GateOp::Not,
        GateOp::And,
        GateOp::Or,
        GateOp::Xor,
        GateOp::Const0,
        GateOp::Const1,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateOp::Const0 | GateOp::Const1 => 0,
            GateOp::Not => 1,
            GateOp::And | GateOp::Or | GateOp::Xor => 2,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateOp::Not => "NOT",
            GateOp::And => "AND",
            GateOp::Or => "OR",
            GateOp::Xor => "XOR",
            GateOp::Const0 => "CONST0",
            GateOp::Const1 => "CONST1",
        }
    }

    #[inline]
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            GateOp::Not => !a,
            GateOp::And => a & b,
            GateOp::Or => a | b,
            GateOp::Xor => a ^ b,
            GateOp::Const0 => false,
            GateOp::Const1 => true,
        }
    }
}

impl FromStr for GateOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        GateOp::ALL
            .into_iter()
            .find(|op| op.mnemonic() == s)
            .ok_or_else(|| format!("unknown gate operation `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub op: GateOp,
    pub sources: Vec<WireId>,
}

/// A validated combinational network with `m` inputs and `n` outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateNetwork {
    num_inputs: usize,
    num_outputs: usize,
    gates: Vec<Gate>,
    output_map: Vec<WireId>,
}

fn is_input_name(name: &str) -> bool {
    name.strip_prefix("in")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

fn is_valid_gate_name(name: &str) -> bool {
    !name.is_empty()
        && !is_input_name(name)
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl GateNetwork {
    /// Builds a network, enforcing DAG order, arity and output references.
    pub fn new(
        num_inputs: usize,
        num_outputs: usize,
        gates: Vec<Gate>,
        output_map: Vec<WireId>,
    ) -> Result<Self> {
        if num_inputs == 0 || num_outputs == 0 {
            return Err(Error::InvalidNetwork(
                "networks need at least one input and one output".into(),
            ));
        }
        if num_inputs > 64 || num_outputs > 64 {
            return Err(Error::InvalidNetwork(
                "at most 64 inputs and 64 outputs are supported".into(),
            ));
        }
        let mut names = HashMap::new();
        for (i, gate) in gates.iter().enumerate() {
            if !is_valid_gate_name(&gate.name) {
                return Err(Error::InvalidNetwork(format!(
                    "invalid gate name `{}`",
                    gate.name
                )));
            }
            if names.insert(gate.name.as_str(), i).is_some() {
                return Err(Error::InvalidNetwork(format!(
                    "duplicate wire `{}`",
                    gate.name
                )));
            }
            if gate.sources.len() != gate.op.arity() {
                return Err(Error::InvalidNetwork(format!(
                    "gate `{}`: {} takes {} sources, got {}",
                    gate.name,
                    gate.op.mnemonic(),
                    gate.op.arity(),
                    gate.sources.len()
                )));
            }
            let own_wire = num_inputs + i;
            if let Some(&src) = gate.sources.iter().find(|&&s| s >= own_wire) {
                return Err(Error::InvalidNetwork(format!(
                    "gate `{}` reads wire {src}, which is not defined before it",
                    gate.name
                )));
            }
        }
        if output_map.len() != num_outputs {
            return Err(Error::InvalidNetwork(format!(
                "expected {num_outputs} output wires, got {}",
                output_map.len()
            )));
        }
        let num_wires = num_inputs + gates.len();
        if let Some((k, w)) = output_map.iter().enumerate().find(|(_, &w)| w >= num_wires) {
            return Err(Error::InvalidNetwork(format!(
                "output {k} references undefined wire {w}"
            )));
        }
        Ok(Self {
            num_inputs,
            num_outputs,
            gates,
            output_map,
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.num_outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output_map(&self) -> &[WireId] {
        &self.output_map
    }

    pub fn num_wires(&self) -> usize {
        self.num_inputs + self.gates.len()
    }

    /// Textual name of a wire: `in<i>` for inputs, the gate name otherwise.
    pub fn wire_name(&self, wire: WireId) -> String {
        if wire < self.num_inputs {
            format!("in{wire}")
        } else {
            self.gates[wire - self.num_inputs].name.clone()
        }
    }

    /// Evaluates `f` on an `m`-bit input, bit `i` feeding `in<i>`.
    pub fn evaluate(&self, input: &[bool]) -> Result<Vec<bool>> {
        if input.len() != self.num_inputs {
            return Err(Error::LengthMismatch {
                expected: self.num_inputs,
                actual: input.len(),
            });
        }
        let mut wires = Vec::with_capacity(self.num_wires());
        wires.extend_from_slice(input);
        self.propagate(&mut wires);
        Ok(self.output_map.iter().map(|&w| wires[w]).collect())
    }

    /// Evaluates `f` on the integer encoding of the input; returns the
    /// integer encoding of the output.
    pub fn evaluate_word(&self, input: u64) -> u64 {
        let mut wires = Vec::with_capacity(self.num_wires());
        self.evaluate_word_with(input, &mut wires)
    }

    /// As [`evaluate_word`](Self::evaluate_word), reusing a scratch buffer.
    pub fn evaluate_word_with(&self, input: u64, wires: &mut Vec<bool>) -> u64 {
        wires.clear();
        wires.extend((0..self.num_inputs).map(|i| (input >> i) & 1 == 1));
        self.propagate(wires);
        self.output_map
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &w)| acc | (u64::from(wires[w]) << k))
    }

    fn propagate(&self, wires: &mut Vec<bool>) {
        for gate in &self.gates {
            let a = gate.sources.first().is_some_and(|&s| wires[s]);
            let b = gate.sources.get(1).is_some_and(|&s| wires[s]);
            wires.push(gate.op.apply(a, b));
        }
    }
}

/// Exact outcome tally of a sampling circuit: `p_i = counts[i] / 2^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub counts: Vec<u64>,
    pub log2_denominator: usize,
}

impl ExactDistribution {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn probability(&self, outcome: usize) -> f64 {
        self.counts[outcome] as f64 / (self.log2_denominator as f64).exp2()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|i| self.probability(i)).collect()
    }
}

pub fn brute_force_distribution(network: &GateNetwork) -> Result<ExactDistribution> {
    brute_force_distribution_with_cap(network, DEFAULT_ENUMERATION_CAP)
}

/// Tallies `f(x)` over all `2^m` inputs.
pub fn brute_force_distribution_with_cap(
    network: &GateNetwork,
    cap: usize,
) -> Result<ExactDistribution> {
    let m = network.num_inputs();
    if m > cap || m >= 63 {
        return Err(Error::EnumerationCap { inputs: m, cap });
    }
    if network.num_outputs() > 32 {
        return Err(Error::EnumerationCap {
            inputs: network.num_outputs(),
            cap: 32,
        });
    }
    let outcomes = 1usize << network.num_outputs();
    let total = 1u64 << m;
    Ok(ExactDistribution {
        counts: tally(network, outcomes, total),
        log2_denominator: m,
    })
}

fn tally_range(network: &GateNetwork, outcomes: usize, range: std::ops::Range<u64>) -> Vec<u64> {
    let mut counts = vec![0u64; outcomes];
    let mut wires = Vec::with_capacity(network.num_wires());
    for x in range {
        counts[network.evaluate_word_with(x, &mut wires) as usize] += 1;
    }
    counts
}

#[cfg(feature = "parallel")]
fn tally(network: &GateNetwork, outcomes: usize, total: u64) -> Vec<u64> {
    use rayon::prelude::*;

    const BLOCK: u64 = 1 << 14;
    if total <= BLOCK {
        return tally_range(network, outcomes, 0..total);
    }
    (0..total.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| tally_range(network, outcomes, b * BLOCK..((b + 1) * BLOCK).min(total)))
        .reduce(
            || vec![0u64; outcomes],
            |mut acc, part| {
                acc.iter_mut().zip(part).for_each(|(a, p)| *a += p);
                acc
            },
        )
}

#[cfg(not(feature = "parallel"))]
fn tally(network: &GateNetwork, outcomes: usize, total: u64) -> Vec<u64> {
    tally_range(network, outcomes, 0..total)
}

/// Parses the line-oriented netlist format.
///
/// ```text
/// inputs 2
/// outputs 1
/// gate g0 = AND in0 in1
/// out 0 = g0
/// ```
pub fn parse_netlist(text: &str) -> Result<GateNetwork, NetlistError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let header = |entry: Option<(usize, &str)>, key: &'static str| match entry {
        Some((line, l)) => {
            let mut tokens = l.split_whitespace();
            if tokens.next() != Some(key) {
                return Err(NetlistError::MissingHeader(key));
            }
            let value = tokens
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .filter(|&v| v >= 1)
                .ok_or_else(|| NetlistError::Syntax {
                    line,
                    message: format!("`{key}` needs a positive integer"),
                })?;
            if tokens.next().is_some() {
                return Err(NetlistError::Syntax {
                    line,
                    message: format!("trailing tokens after `{key} {value}`"),
                });
            }
            Ok((line, value))
        }
        None => Err(NetlistError::MissingHeader(key)),
    };
    let (inputs_line, m) = header(lines.next(), "inputs")?;
    let (_, n) = header(lines.next(), "outputs")?;
    if m > 64 || n > 64 {
        return Err(NetlistError::Syntax {
            line: inputs_line,
            message: "at most 64 inputs and 64 outputs are supported".into(),
        });
    }

    let mut names: HashMap<String, WireId> = HashMap::new();
    let mut gates: Vec<Gate> = Vec::new();
    let mut outputs: Vec<Option<WireId>> = vec![None; n];

    let resolve = |names: &HashMap<String, WireId>, line: usize, tok: &str| {
        if let Some(idx) = tok.strip_prefix("in").filter(|_| is_input_name(tok)) {
            match idx.parse::<usize>() {
                Ok(i) if i < m => return Ok(i),
                _ => {}
            }
        } else if let Some(&w) = names.get(tok) {
            return Ok(w);
        }
        Err(NetlistError::UndefinedWire {
            line,
            name: tok.to_string(),
        })
    };

    for (line, l) in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        let syntax = |message: String| NetlistError::Syntax { line, message };
        match tokens.as_slice() {
            ["gate", name, "=", op, srcs @ ..] => {
                let op: GateOp = op.parse().map_err(syntax)?;
                if !is_valid_gate_name(name) {
                    return Err(syntax(format!("invalid gate name `{name}`")));
                }
                if names.contains_key(*name) {
                    return Err(NetlistError::DuplicateWire {
                        line,
                        name: name.to_string(),
                    });
                }
                if srcs.len() != op.arity() {
                    return Err(syntax(format!(
                        "{} takes {} sources, got {}",
                        op.mnemonic(),
                        op.arity(),
                        srcs.len()
                    )));
                }
                let sources = srcs
                    .iter()
                    .map(|s| resolve(&names, line, s))
                    .collect::<Result<Vec<_>, _>>()?;
                names.insert(name.to_string(), m + gates.len());
                gates.push(Gate {
                    name: name.to_string(),
                    op,
                    sources,
                });
            }
            ["out", index, "=", src] => {
                let k: usize = index
                    .parse()
                    .ok()
                    .filter(|&k| k < n)
                    .ok_or_else(|| syntax(format!("output index `{index}` out of range")))?;
                let wire = resolve(&names, line, src)?;
                if outputs[k].replace(wire).is_some() {
                    return Err(NetlistError::DuplicateOutput { line, index: k });
                }
            }
            ["inputs", ..] | ["outputs", ..] => {
                return Err(syntax("header repeated".into()));
            }
            _ => return Err(syntax(format!("unrecognized line `{l}`"))),
        }
    }

    let output_map = outputs
        .into_iter()
        .enumerate()
        .map(|(k, w)| w.ok_or(NetlistError::MissingOutput(k)))
        .collect::<Result<Vec<_>, _>>()?;

    // Every invariant has been checked above.
    Ok(GateNetwork {
        num_inputs: m,
        num_outputs: n,
        gates,
        output_map,
    })
}

/// Canonical netlist text; the inverse of [`parse_netlist`].
pub fn emit_netlist(network: &GateNetwork) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "inputs {}\noutputs {}",
        network.num_inputs, network.num_outputs
    );
    for gate in &network.gates {
        let _ = write!(out, "\ngate {} = {}", gate.name, gate.op.mnemonic());
        for &s in &gate.sources {
            let _ = write!(out, " {}", network.wire_name(s));
        }
    }
    for (k, &w) in network.output_map.iter().enumerate() {
        let _ = write!(out, "\nout {k} = {}", network.wire_name(w));
    }
    out
}

/// Named families of networks with known output laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Builtin {
    /// `n = m`, each output reads its input.
    Identity { m: usize },
    /// Every input maps to the `n`-bit constant `c`.
    Constant { m: usize, n: usize, c: u64 },
    /// Number of set input bits, via a half/full-adder tree.
    Popcount { m: usize },
}

impl FromStr for Builtin {
    type Err = Error;

    /// `identity:M`, `constant:M,N,C` or `popcount:M`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("cannot parse builtin `{s}`"));
        let (name, params) = s.split_once(':').ok_or_else(bad)?;
        let nums = params
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        match (name, nums.as_slice()) {
            ("identity", &[m]) => Ok(Builtin::Identity { m: m as usize }),
            ("popcount", &[m]) => Ok(Builtin::Popcount { m: m as usize }),
            ("constant", &[m, n, c]) => Ok(Builtin::Constant {
                m: m as usize,
                n: n as usize,
                c,
            }),
            _ => Err(bad()),
        }
    }
}

/// Number of bits needed to hold a count in `0..=m`.
pub fn popcount_width(m: usize) -> usize {
    (usize::BITS - m.leading_zeros()) as usize
}

pub fn make_builtin(builtin: Builtin) -> Result<GateNetwork> {
    match builtin {
        Builtin::Identity { m } => {
            if !(1..=64).contains(&m) {
                return Err(Error::InvalidParams(format!("identity needs 1 <= m <= 64, got {m}")));
            }
            GateNetwork::new(m, m, Vec::new(), (0..m).collect())
        }
        Builtin::Constant { m, n, c } => {
            if !(1..=64).contains(&m) || !(1..=64).contains(&n) {
                return Err(Error::InvalidParams(format!(
                    "constant needs 1 <= m, n <= 64, got m={m}, n={n}"
                )));
            }
            if n < 64 && c >> n != 0 {
                return Err(Error::InvalidParams(format!("constant {c} does not fit in {n} bits")));
            }
            let gates = (0..n)
                .map(|k| Gate {
                    name: format!("c{k}"),
                    op: if (c >> k) & 1 == 1 {
                        GateOp::Const1
                    } else {
                        GateOp::Const0
                    },
                    sources: Vec::new(),
                })
                .collect();
            GateNetwork::new(m, n, gates, (m..m + n).collect())
        }
        Builtin::Popcount { m } => {
            if !(1..=64).contains(&m) {
                return Err(Error::InvalidParams(format!("popcount needs 1 <= m <= 64, got {m}")));
            }
            popcount_network(m)
        }
    }
}

/// Column compression: full adders take three bits of a weight column, half
/// adders two, until every column holds at most one bit.
fn popcount_network(m: usize) -> Result<GateNetwork> {
    let n = popcount_width(m);
    let mut gates: Vec<Gate> = Vec::new();
    let push = |gates: &mut Vec<Gate>, op: GateOp, sources: Vec<WireId>| {
        let wire = m + gates.len();
        gates.push(Gate {
            name: format!("g{}", gates.len()),
            op,
            sources,
        });
        wire
    };

    let mut columns: Vec<Vec<WireId>> = vec![(0..m).collect()];
    let mut weight = 0;
    while weight < columns.len() {
        while columns[weight].len() >= 2 {
            if columns.len() == weight + 1 {
                columns.push(Vec::new());
            }
            let (sum, carry) = if columns[weight].len() >= 3 {
                let c = columns[weight].remove(2);
                let b = columns[weight].remove(1);
                let a = columns[weight].remove(0);
                let ab = push(&mut gates, GateOp::Xor, vec![a, b]);
                let sum = push(&mut gates, GateOp::Xor, vec![ab, c]);
                let c1 = push(&mut gates, GateOp::And, vec![a, b]);
                let c2 = push(&mut gates, GateOp::And, vec![ab, c]);
                (sum, push(&mut gates, GateOp::Or, vec![c1, c2]))
            } else {
                let b = columns[weight].remove(1);
                let a = columns[weight].remove(0);
                let sum = push(&mut gates, GateOp::Xor, vec![a, b]);
                (sum, push(&mut gates, GateOp::And, vec![a, b]))
            };
            columns[weight].push(sum);
            columns[weight + 1].push(carry);
        }
        weight += 1;
    }

    let mut output_map = Vec::with_capacity(n);
    let mut zero = None;
    for k in 0..n {
        let wire = match columns.get(k).and_then(|c| c.first()) {
            Some(&w) => w,
            None => *zero.get_or_insert_with(|| push(&mut gates, GateOp::Const0, Vec::new())),
        };
        output_map.push(wire);
    }
    GateNetwork::new(m, n, gates, output_map)
}

/// Bounds for [`random_network`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomNetworkParams {
    pub max_inputs: usize,
    pub max_outputs: usize,
    pub max_gates: usize,
    /// Upper bound on `m + n + gates`, the width of the compiled circuit.
    pub max_width: Option<usize>,
}

impl Default for RandomNetworkParams {
    fn default() -> Self {
        Self {
            max_inputs: 10,
            max_outputs: 4,
            max_gates: 64,
            max_width: None,
        }
    }
}

/// Draws a random DAG: sources are uniform over earlier wires, outputs
/// uniform over all wires.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, params: &RandomNetworkParams) -> GateNetwork {
    let n = rng.random_range(1..=params.max_outputs.max(1));
    let width_room = params.max_width.map_or(usize::MAX, |w| w.saturating_sub(n).max(1));
    let m = rng.random_range(1..=params.max_inputs.clamp(1, 64).min(width_room));
    let gate_room = params
        .max_width
        .map_or(params.max_gates, |w| params.max_gates.min(w.saturating_sub(m + n)));
    let num_gates = rng.random_range(0..=gate_room);

    const WEIGHTED: [GateOp; 13] = [
        GateOp::Not,
        GateOp::Not,
        GateOp::And,
        GateOp::And,
        GateOp::And,
        GateOp::Or,
        GateOp::Or,
        GateOp::Or,
        GateOp::Xor,
        GateOp::Xor,
        GateOp::Xor,
        GateOp::Const0,
        GateOp::Const1,
    ];
    let mut gates = Vec::with_capacity(num_gates);
    for i in 0..num_gates {
        let op = WEIGHTED[rng.random_range(0..WEIGHTED.len())];
        let sources = (0..op.arity()).map(|_| rng.random_range(0..m + i)).collect();
        gates.push(Gate {
            name: format!("g{i}"),
            op,
            sources,
        });
    }
    let output_map = (0..n).map(|_| rng.random_range(0..m + num_gates)).collect();
    GateNetwork::new(m, n, gates, output_map).expect("generator respects network invariants")
}

/// `len` low bits of `value`, bit 0 first.
pub fn bits_from_word(value: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| i < 64 && (value >> i) & 1 == 1).collect()
}

pub fn word_from_bits(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
}

/// Renders a bitstring most significant bit first ("10" is 2).
pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().rev().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Inverse of [`format_bits`].
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .rev()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidParams(format!("`{text}` is not a bitstring"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn binomial(m: u64, i: u64) -> u64 {
        (0..i).fold(1, |acc, j| acc * (m - j) / (j + 1))
    }

    #[test]
    fn parses_identity() {
        let net = parse_netlist("inputs 1\noutputs 1\nout 0 = in0").unwrap();
        assert_eq!(net.num_inputs(), 1);
        assert_eq!(net.num_outputs(), 1);
        assert!(net.gates().is_empty());
        assert_eq!(net.output_map(), &[0]);
    }

    #[test]
    fn parses_single_and() {
        let net = parse_netlist("inputs 2\noutputs 1\ngate g0 = AND in0 in1\nout 0 = g0").unwrap();
        assert_eq!(net.gates().len(), 1);
        assert_eq!(net.gates()[0].op, GateOp::And);
        assert_eq!(net.gates()[0].sources, vec![0, 1]);
        assert_eq!(net.output_map(), &[2]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\ninputs 2 # m\noutputs 1\n\ngate x = XOR in0 in1 # parity\nout 0 = x\n";
        let net = parse_netlist(text).unwrap();
        assert_eq!(net.evaluate_word(0b01), 1);
        assert_eq!(net.evaluate_word(0b11), 0);
    }

    #[test]
    fn undefined_wire_is_named() {
        let err = parse_netlist("inputs 1\noutputs 1\ngate g0 = NOT g9\nout 0 = g0").unwrap_err();
        assert_eq!(
            err,
            NetlistError::UndefinedWire {
                line: 3,
                name: "g9".into()
            }
        );
        assert!(err.to_string().contains("g9"));
    }

    #[test]
    fn output_to_undefined_wire() {
        let err = parse_netlist("inputs 1\noutputs 1\nout 0 = g3").unwrap_err();
        assert!(matches!(err, NetlistError::UndefinedWire { line: 3, ref name } if name == "g3"));
        // in1 does not exist when m = 1
        let err = parse_netlist("inputs 1\noutputs 1\nout 0 = in1").unwrap_err();
        assert!(matches!(err, NetlistError::UndefinedWire { .. }));
    }

    #[test]
    fn forward_reference_rejected() {
        let text = "inputs 1\noutputs 1\ngate a = NOT b\ngate b = NOT in0\nout 0 = a";
        assert!(matches!(
            parse_netlist(text),
            Err(NetlistError::UndefinedWire { line: 3, .. })
        ));
    }

    #[test]
    fn duplicate_wire_rejected() {
        let text = "inputs 1\noutputs 1\ngate a = NOT in0\ngate a = NOT in0\nout 0 = a";
        assert_eq!(
            parse_netlist(text).unwrap_err(),
            NetlistError::DuplicateWire {
                line: 4,
                name: "a".into()
            }
        );
        let text = "inputs 2\noutputs 1\ngate in1 = NOT in0\nout 0 = in1";
        assert!(matches!(parse_netlist(text), Err(NetlistError::Syntax { line: 3, .. })));
    }

    #[test]
    fn missing_headers() {
        assert_eq!(
            parse_netlist("outputs 1\nout 0 = in0").unwrap_err(),
            NetlistError::MissingHeader("inputs")
        );
        assert_eq!(
            parse_netlist("inputs 1\nout 0 = in0").unwrap_err(),
            NetlistError::MissingHeader("outputs")
        );
        assert_eq!(parse_netlist("").unwrap_err(), NetlistError::MissingHeader("inputs"));
    }

    #[test]
    fn output_assignment_errors() {
        assert_eq!(
            parse_netlist("inputs 1\noutputs 2\nout 0 = in0").unwrap_err(),
            NetlistError::MissingOutput(1)
        );
        assert_eq!(
            parse_netlist("inputs 1\noutputs 1\nout 0 = in0\nout 0 = in0").unwrap_err(),
            NetlistError::DuplicateOutput { line: 4, index: 0 }
        );
        assert!(matches!(
            parse_netlist("inputs 1\noutputs 1\nout 1 = in0"),
            Err(NetlistError::Syntax { line: 3, .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let cases = [
            ("inputs x\noutputs 1\nout 0 = in0", 1),
            ("inputs 1\noutputs 1\ngate g = NAND in0 in0\nout 0 = g", 3),
            ("inputs 1\noutputs 1\ngate g = NOT in0 in0\nout 0 = g", 3),
            ("inputs 1\noutputs 1\ngate g = CONST1 in0\nout 0 = g", 3),
            ("inputs 1\noutputs 1\n\nwire g\nout 0 = in0", 4),
        ];
        for (text, line) in cases {
            match parse_netlist(text) {
                Err(NetlistError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn emit_minimal_networks() {
        let id = make_builtin(Builtin::Identity { m: 1 }).unwrap();
        assert_eq!(emit_netlist(&id), "inputs 1\noutputs 1\nout 0 = in0");
        let text = "inputs 2\noutputs 1\ngate g0 = AND in0 in1\nout 0 = g0";
        assert_eq!(emit_netlist(&parse_netlist(text).unwrap()), text);
    }

    #[test]
    fn evaluate_examples() {
        let pop = make_builtin(Builtin::Popcount { m: 3 }).unwrap();
        let out = pop.evaluate(&parse_bits("101").unwrap()).unwrap();
        assert_eq!(format_bits(&out), "10");

        let id = make_builtin(Builtin::Identity { m: 4 }).unwrap();
        let out = id.evaluate(&parse_bits("1011").unwrap()).unwrap();
        assert_eq!(format_bits(&out), "1011");

        let konst = make_builtin(Builtin::Constant { m: 3, n: 2, c: 1 }).unwrap();
        for x in 0..8 {
            let out = konst.evaluate(&bits_from_word(x, 3)).unwrap();
            assert_eq!(format_bits(&out), "01");
        }
    }

    #[test]
    fn evaluate_length_mismatch() {
        let id = make_builtin(Builtin::Identity { m: 2 }).unwrap();
        assert_eq!(
            id.evaluate(&[true]).unwrap_err(),
            Error::LengthMismatch {
                expected: 2,
                actual: 1
            }
        );
    }

    #[test]
    fn brute_force_examples() {
        // Tally of popcounts over 000..111: one 0, three 1s, three 2s, one 3.
        let pop = make_builtin(Builtin::Popcount { m: 3 }).unwrap();
        let dist = brute_force_distribution(&pop).unwrap();
        assert_eq!(dist.counts, vec![1, 3, 3, 1]);
        assert_eq!(dist.log2_denominator, 3);
        assert_eq!(dist.probabilities(), vec![0.125, 0.375, 0.375, 0.125]);

        let id = make_builtin(Builtin::Identity { m: 2 }).unwrap();
        assert_eq!(brute_force_distribution(&id).unwrap().counts, vec![1, 1, 1, 1]);

        let zero = make_builtin(Builtin::Constant { m: 2, n: 1, c: 0 }).unwrap();
        assert_eq!(brute_force_distribution(&zero).unwrap().counts, vec![4, 0]);
    }

    #[test]
    fn enumeration_cap() {
        let pop = make_builtin(Builtin::Popcount { m: 21 }).unwrap();
        assert_eq!(
            brute_force_distribution(&pop).unwrap_err(),
            Error::EnumerationCap { inputs: 21, cap: 20 }
        );
        let id = make_builtin(Builtin::Identity { m: 5 }).unwrap();
        assert!(brute_force_distribution_with_cap(&id, 4).unwrap_err().is_resource_limit());
    }

    #[test]
    fn builtin_shapes() {
        let id = make_builtin(Builtin::Identity { m: 5 }).unwrap();
        assert_eq!((id.num_inputs(), id.num_outputs()), (5, 5));
        assert!(id.gates().is_empty());

        let konst = make_builtin(Builtin::Constant { m: 2, n: 2, c: 3 }).unwrap();
        let dist = brute_force_distribution(&konst).unwrap();
        assert_eq!(dist.counts, vec![0, 0, 0, 4]);

        assert_eq!(popcount_width(3), 2);
        assert_eq!(popcount_width(7), 3);
        assert_eq!(popcount_width(8), 4);
    }

    #[test]
    fn builtin_param_errors() {
        assert!(make_builtin(Builtin::Identity { m: 0 }).is_err());
        assert!(make_builtin(Builtin::Popcount { m: 65 }).is_err());
        assert!(make_builtin(Builtin::Constant { m: 2, n: 2, c: 4 }).is_err());
        assert!(make_builtin(Builtin::Constant { m: 2, n: 0, c: 0 }).is_err());
    }

    #[test]
    fn builtin_from_str() {
        assert_eq!("popcount:3".parse::<Builtin>().unwrap(), Builtin::Popcount { m: 3 });
        assert_eq!(
            "constant:2,2,3".parse::<Builtin>().unwrap(),
            Builtin::Constant { m: 2, n: 2, c: 3 }
        );
        assert!("popcount".parse::<Builtin>().is_err());
        assert!("sqrt:4".parse::<Builtin>().is_err());
    }

    #[test]
    fn popcount_law() {
        for m in 1..=10u64 {
            let net = make_builtin(Builtin::Popcount { m: m as usize }).unwrap();
            let dist = brute_force_distribution(&net).unwrap();
            for (i, &c) in dist.counts.iter().enumerate() {
                let expected = if (i as u64) <= m { binomial(m, i as u64) } else { 0 };
                assert_eq!(c, expected, "m={m} i={i}");
            }
        }
    }

    #[test]
    fn parallel_tally_matches_sequential() {
        let net = make_builtin(Builtin::Popcount { m: 17 }).unwrap();
        let dist = brute_force_distribution(&net).unwrap();
        assert_eq!(dist.counts, tally_range(&net, dist.counts.len(), 0..1 << 17));
    }

    #[test]
    fn random_networks_respect_width() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params = RandomNetworkParams {
            max_width: Some(16),
            ..Default::default()
        };
        for _ in 0..200 {
            let net = random_network(&mut rng, &params);
            assert!(net.num_inputs() + net.num_outputs() + net.gates().len() <= 16);
            assert!(net.num_inputs() <= 10 && net.num_outputs() <= 4);
        }
    }

    fn arb_network() -> impl Strategy<Value = GateNetwork> {
        any::<u64>().prop_map(|seed| {
            random_network(&mut ChaCha8Rng::seed_from_u64(seed), &RandomNetworkParams::default())
        })
    }

    proptest! {
        #[test]
        fn round_trip(net in arb_network()) {
            prop_assert_eq!(parse_netlist(&emit_netlist(&net)).unwrap(), net);
        }

        #[test]
        fn counts_conserve_mass(net in arb_network()) {
            let dist = brute_force_distribution(&net).unwrap();
            prop_assert_eq!(dist.total(), 1u64 << net.num_inputs());
        }

        #[test]
        fn evaluation_is_deterministic(net in arb_network(), x in any::<u64>()) {
            let input = bits_from_word(x, net.num_inputs());
            let first = net.evaluate(&input).unwrap();
            prop_assert_eq!(&first, &net.evaluate(&input).unwrap());
            prop_assert_eq!(word_from_bits(&first), net.evaluate_word(word_from_bits(&input)));
        }
    }
}
