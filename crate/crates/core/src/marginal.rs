//! The Q-marginal preparation circuit `U' = U (H^m (x) I)`: one layer of
//! Hadamards on the input register followed by the reversible sampler.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reversible::{check_indices, GateKind, Layout, ReversibleCircuit, ReversibleGate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuantumGate {
    H { target: usize },
    X { target: usize },
    Cnot { control: usize, target: usize },
    Ccnot { controls: [usize; 2], target: usize },
}

impl QuantumGate {
    pub fn kind(&self) -> GateKind {
        match self {
            QuantumGate::H { .. } => GateKind::H,
            QuantumGate::X { .. } => GateKind::X,
            QuantumGate::Cnot { .. } => GateKind::Cnot,
            QuantumGate::Ccnot { .. } => GateKind::Ccnot,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            QuantumGate::H { target }
            | QuantumGate::X { target }
            | QuantumGate::Cnot { target, .. }
            | QuantumGate::Ccnot { target, .. } => target,
        }
    }

    pub fn controls(&self) -> &[usize] {
        match self {
            QuantumGate::H { .. } | QuantumGate::X { .. } => &[],
            QuantumGate::Cnot { control, .. } => std::slice::from_ref(control),
            QuantumGate::Ccnot { controls, .. } => controls,
        }
    }
}

impl From<ReversibleGate> for QuantumGate {
    fn from(gate: ReversibleGate) -> Self {
        match gate {
            ReversibleGate::X { target } => QuantumGate::X { target },
            ReversibleGate::Cnot { control, target } => QuantumGate::Cnot { control, target },
            ReversibleGate::Ccnot { controls, target } => QuantumGate::Ccnot { controls, target },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumCircuit {
    layout: Layout,
    gates: Vec<QuantumGate>,
}

impl QuantumCircuit {
    pub fn new(layout: Layout, gates: Vec<QuantumGate>) -> Result<Self> {
        for gate in &gates {
            check_indices(gate.target(), gate.controls(), layout.width())?;
        }
        Ok(Self { layout, gates })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn width(&self) -> usize {
        self.layout.width()
    }

    pub fn gates(&self) -> &[QuantumGate] {
        &self.gates
    }

    /// Every gate here is self-inverse, so the adjoint is the reversed list.
    pub fn inverse(&self) -> QuantumCircuit {
        QuantumCircuit {
            layout: self.layout,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }
}

/// Prepends `H` on qubits `0..m` to the gates of `u`, verbatim.
pub fn build_qmarginal(u: &ReversibleCircuit) -> QuantumCircuit {
    let layout = u.layout();
    let gates = (0..layout.inputs)
        .map(|target| QuantumGate::H { target })
        .chain(u.gates().iter().map(|&g| g.into()))
        .collect();
    QuantumCircuit { layout, gates }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCost {
    pub hadamards: usize,
    pub u_gate_count: usize,
}

/// Checks the built form (an `H` layer over the inputs, then no further
/// `H`) and reports its cost.
pub fn query_cost(circuit: &QuantumCircuit) -> Result<QueryCost> {
    let m = circuit.layout().inputs;
    let (layer, rest) = circuit.gates().split_at(m.min(circuit.gates().len()));
    for (q, gate) in layer.iter().enumerate() {
        if *gate != (QuantumGate::H { target: q }) {
            return Err(Error::NotBuiltForm(format!(
                "gate {q} should be H on qubit {q}, found {gate:?}"
            )));
        }
    }
    if layer.len() < m {
        return Err(Error::NotBuiltForm("Hadamard layer is incomplete".into()));
    }
    if let Some(pos) = rest.iter().position(|g| g.kind() == GateKind::H) {
        return Err(Error::NotBuiltForm(format!(
            "unexpected H at position {}",
            pos + m
        )));
    }
    Ok(QueryCost {
        hadamards: m,
        u_gate_count: rest.len(),
    })
}

fn write_gate(out: &mut String, gate: &QuantumGate) {
    let _ = match *gate {
        QuantumGate::H { target } => write!(out, "\nH {target}"),
        QuantumGate::X { target } => write!(out, "\nX {target}"),
        QuantumGate::Cnot { control, target } => write!(out, "\nCNOT {control} {target}"),
        QuantumGate::Ccnot {
            controls: [a, b],
            target,
        } => write!(out, "\nCCNOT {a} {b} {target}"),
    };
}

fn header(layout: Layout) -> String {
    format!(
        "qubits {} {} {}",
        layout.inputs, layout.outputs, layout.ancillas
    )
}

/// `qubits m n k` followed by one gate per line, newline terminated.
pub fn emit_reversible(circuit: &ReversibleCircuit) -> String {
    let mut out = header(circuit.layout());
    for &gate in circuit.gates() {
        write_gate(&mut out, &gate.into());
    }
    out.push('\n');
    out
}

pub fn emit_quantum(circuit: &QuantumCircuit) -> String {
    let mut out = header(circuit.layout());
    for gate in circuit.gates() {
        write_gate(&mut out, gate);
    }
    out.push('\n');
    out
}

fn parse_lines(text: &str) -> Result<(Layout, Vec<QuantumGate>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line: usize, message: String| Error::CircuitFormat { line, message };
    let num = |line: usize, tok: &str| {
        tok.parse::<usize>()
            .map_err(|_| err(line, format!("expected a qubit index, got `{tok}`")))
    };

    let layout = match lines.next() {
        Some((line, l)) => match l.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["qubits", m, n, k] => Layout {
                inputs: num(line, m)?,
                outputs: num(line, n)?,
                ancillas: num(line, k)?,
            },
            _ => return Err(err(line, "expected header `qubits <m> <n> <k>`".into())),
        },
        None => return Err(err(0, "empty circuit text".into())),
    };

    let mut gates = Vec::new();
    for (line, l) in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        let gate = match tokens.as_slice() {
            ["H", t] => QuantumGate::H {
                target: num(line, t)?,
            },
            ["X", t] => QuantumGate::X {
                target: num(line, t)?,
            },
            ["CNOT", c, t] => QuantumGate::Cnot {
                control: num(line, c)?,
                target: num(line, t)?,
            },
            ["CCNOT", a, b, t] => QuantumGate::Ccnot {
                controls: [num(line, a)?, num(line, b)?],
                target: num(line, t)?,
            },
            _ => return Err(err(line, format!("unrecognized gate line `{l}`"))),
        };
        check_indices(gate.target(), gate.controls(), layout.width())
            .map_err(|e| err(line, e.to_string()))?;
        gates.push(gate);
    }
    Ok((layout, gates))
}

pub fn parse_quantum(text: &str) -> Result<QuantumCircuit> {
    let (layout, gates) = parse_lines(text)?;
    QuantumCircuit::new(layout, gates)
}

/// Reads the reversible subset; `H` lines are rejected.
pub fn parse_reversible(text: &str) -> Result<ReversibleCircuit> {
    let (layout, gates) = parse_lines(text)?;
    let gates = gates
        .into_iter()
        .map(|g| match g {
            QuantumGate::H { .. } => Err(Error::InvalidCircuit(
                "H is not a reversible classical gate".into(),
            )),
            QuantumGate::X { target } => Ok(ReversibleGate::X { target }),
            QuantumGate::Cnot { control, target } => Ok(ReversibleGate::Cnot { control, target }),
            QuantumGate::Ccnot { controls, target } => {
                Ok(ReversibleGate::Ccnot { controls, target })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ReversibleCircuit::new(layout, gates)
}
