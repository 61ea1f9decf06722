//! Bennett compute-copy-uncompute compilation of a [`GateNetwork`] into a
//! permutation circuit `U: |x>|y>|0^k> -> |x>|y ^ f(x)>|0^k>`.
//!
//! Qubit layout: inputs `0..m`, outputs `m..m+n`, one ancilla per classical
//! gate at `m+n..m+n+k`. Input qubits are never targeted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::{GateNetwork, GateOp, WireId};

/// Sizes of the three registers of a compiled circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layout {
    pub inputs: usize,
    pub outputs: usize,
    pub ancillas: usize,
}

impl Layout {
    pub fn width(&self) -> usize {
        self.inputs + self.outputs + self.ancillas
    }

    pub fn output_range(&self) -> std::ops::Range<usize> {
        self.inputs..self.inputs + self.outputs
    }

    pub fn ancilla_range(&self) -> std::ops::Range<usize> {
        self.inputs + self.outputs..self.width()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Cnot,
    Ccnot,
}

impl GateKind {
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Ccnot => "CCNOT",
        }
    }
}

/// A self-inverse classical reversible gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReversibleGate {
    X { target: usize },
    Cnot { control: usize, target: usize },
    Ccnot { controls: [usize; 2], target: usize },
}

impl ReversibleGate {
    pub fn kind(&self) -> GateKind {
        match self {
            ReversibleGate::X { .. } => GateKind::X,
            ReversibleGate::Cnot { .. } => GateKind::Cnot,
            ReversibleGate::Ccnot { .. } => GateKind::Ccnot,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            ReversibleGate::X { target }
            | ReversibleGate::Cnot { target, .. }
            | ReversibleGate::Ccnot { target, .. } => target,
        }
    }

    pub fn controls(&self) -> &[usize] {
        match self {
            ReversibleGate::X { .. } => &[],
            ReversibleGate::Cnot { control, .. } => std::slice::from_ref(control),
            ReversibleGate::Ccnot { controls, .. } => controls,
        }
    }

    /// Conditional bit flip.
    #[inline]
    pub fn apply_bits(&self, bits: &mut [bool]) {
        if self.controls().iter().all(|&c| bits[c]) {
            bits[self.target()] ^= true;
        }
    }
}

/// Checks index bounds and pairwise distinctness.
pub(crate) fn check_indices(target: usize, controls: &[usize], width: usize) -> Result<()> {
    let all = controls.iter().chain(std::iter::once(&target));
    if let Some(q) = all.clone().find(|&&q| q >= width) {
        return Err(Error::InvalidCircuit(format!(
            "qubit {q} out of range for width {width}"
        )));
    }
    let distinct = match controls {
        [] => true,
        [c] => *c != target,
        [a, b] => a != b && *a != target && *b != target,
        _ => false,
    };
    if !distinct {
        return Err(Error::InvalidCircuit(format!(
            "gate on qubits {controls:?} -> {target} reuses a qubit"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReversibleCircuit {
    layout: Layout,
    gates: Vec<ReversibleGate>,
}

impl ReversibleCircuit {
    pub fn new(layout: Layout, gates: Vec<ReversibleGate>) -> Result<Self> {
        for gate in &gates {
            check_indices(gate.target(), gate.controls(), layout.width())?;
            if gate.target() < layout.inputs {
                return Err(Error::InvalidCircuit(format!(
                    "gate targets input qubit {}",
                    gate.target()
                )));
            }
        }
        Ok(Self { layout, gates })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn width(&self) -> usize {
        self.layout.width()
    }

    pub fn gates(&self) -> &[ReversibleGate] {
        &self.gates
    }
}

/// Bennett compilation. Every classical gate writes a fresh ancilla:
///
/// | gate   | compute                         |
/// |--------|---------------------------------|
/// | NOT a  | CNOT a->t, X t                  |
/// | XOR ab | CNOT a->t, CNOT b->t            |
/// | AND ab | CCNOT a,b->t                    |
/// | OR ab  | CNOT a->t, CNOT b->t, CCNOT a,b->t |
/// | CONST0 | (nothing)                       |
/// | CONST1 | X t                             |
///
/// then each output wire is CNOT-copied into the output register and the
/// compute phase is replayed in reverse.
pub fn compile(network: &GateNetwork) -> ReversibleCircuit {
    let m = network.num_inputs();
    let n = network.num_outputs();
    let layout = Layout {
        inputs: m,
        outputs: n,
        ancillas: network.gates().len(),
    };
    let qubit = |wire: WireId| if wire < m { wire } else { m + n + (wire - m) };

    let mut compute = Vec::new();
    for (i, gate) in network.gates().iter().enumerate() {
        let target = m + n + i;
        let src = |j: usize| qubit(gate.sources[j]);
        let cnot = |control| ReversibleGate::Cnot { control, target };
        match gate.op {
            GateOp::Not => {
                compute.push(cnot(src(0)));
                compute.push(ReversibleGate::X { target });
            }
            GateOp::Xor if src(0) != src(1) => {
                compute.push(cnot(src(0)));
                compute.push(cnot(src(1)));
            }
            // a ^ a = 0
            GateOp::Xor => {}
            GateOp::And if src(0) != src(1) => compute.push(ReversibleGate::Ccnot {
                controls: [src(0), src(1)],
                target,
            }),
            GateOp::Or if src(0) != src(1) => {
                compute.push(cnot(src(0)));
                compute.push(cnot(src(1)));
                compute.push(ReversibleGate::Ccnot {
                    controls: [src(0), src(1)],
                    target,
                });
            }
            // a & a = a | a = a
            GateOp::And | GateOp::Or => compute.push(cnot(src(0))),
            GateOp::Const0 => {}
            GateOp::Const1 => compute.push(ReversibleGate::X { target }),
        }
    }

    let mut gates = Vec::with_capacity(2 * compute.len() + n);
    gates.extend_from_slice(&compute);
    gates.extend(
        network
            .output_map()
            .iter()
            .enumerate()
            .map(|(k, &w)| ReversibleGate::Cnot {
                control: qubit(w),
                target: m + k,
            }),
    );
    gates.extend(compute.iter().rev());

    ReversibleCircuit::new(layout, gates).expect("compiler emits valid gates")
}

/// Runs the circuit on a computational basis state, bit `q` being qubit `q`.
pub fn classical_simulate(circuit: &ReversibleCircuit, basis_state: &[bool]) -> Result<Vec<bool>> {
    if basis_state.len() != circuit.width() {
        return Err(Error::LengthMismatch {
            expected: circuit.width(),
            actual: basis_state.len(),
        });
    }
    let mut bits = basis_state.to_vec();
    for gate in circuit.gates() {
        gate.apply_bits(&mut bits);
    }
    Ok(bits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub width: usize,
    pub gate_count: usize,
    pub ancilla_count: usize,
    pub x: usize,
    pub cnot: usize,
    pub ccnot: usize,
}

pub fn stats(circuit: &ReversibleCircuit) -> CircuitStats {
    let count = |kind| circuit.gates().iter().filter(|g| g.kind() == kind).count();
    CircuitStats {
        width: circuit.width(),
        gate_count: circuit.gates().len(),
        ancilla_count: circuit.layout().ancillas,
        x: count(GateKind::X),
        cnot: count(GateKind::Cnot),
        ccnot: count(GateKind::Ccnot),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{
        bits_from_word, make_builtin, parse_netlist, random_network, Builtin, RandomNetworkParams,
    };
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn basis(layout: Layout, x: u64, y: u64) -> Vec<bool> {
        let mut bits = bits_from_word(x, layout.inputs);
        bits.extend(bits_from_word(y, layout.outputs));
        bits.extend(std::iter::repeat_n(false, layout.ancillas));
        bits
    }

    #[test]
    fn identity_is_copy_only() {
        let c = compile(&make_builtin(Builtin::Identity { m: 2 }).unwrap());
        assert_eq!(c.layout().ancillas, 0);
        assert_eq!(
            c.gates(),
            &[
                ReversibleGate::Cnot { control: 0, target: 2 },
                ReversibleGate::Cnot { control: 1, target: 3 },
            ]
        );
        let s = stats(&c);
        assert_eq!((s.width, s.gate_count, s.ancilla_count, s.cnot), (4, 2, 0, 2));
        assert_eq!(s.x + s.ccnot, 0);
    }

    #[test]
    fn identity_copies_input() {
        let c = compile(&make_builtin(Builtin::Identity { m: 2 }).unwrap());
        // x = 10 (x1 = 1), y = 00
        let out = classical_simulate(&c, &[false, true, false, false]).unwrap();
        assert_eq!(out, vec![false, true, false, true]);
    }

    #[test]
    fn constant_one_uses_ancilla_path() {
        let c = compile(&make_builtin(Builtin::Constant { m: 2, n: 1, c: 1 }).unwrap());
        assert_eq!(
            c.gates(),
            &[
                ReversibleGate::X { target: 3 },
                ReversibleGate::Cnot { control: 3, target: 2 },
                ReversibleGate::X { target: 3 },
            ]
        );
        for x in 0..4 {
            let out = classical_simulate(&c, &basis(c.layout(), x, 0)).unwrap();
            assert_eq!(out, basis(c.layout(), x, 1));
        }
    }

    #[test]
    fn popcount_three_exhaustive() {
        let net = make_builtin(Builtin::Popcount { m: 3 }).unwrap();
        let c = compile(&net);
        for x in 0..8u64 {
            let out = classical_simulate(&c, &basis(c.layout(), x, 0)).unwrap();
            assert_eq!(out, basis(c.layout(), x, u64::from(x.count_ones())), "x={x:03b}");
        }
        // compute phase + one copy per output + mirrored compute
        let s = stats(&c);
        let compute = (s.gate_count - net.num_outputs()) / 2;
        assert_eq!(s.gate_count, 2 * compute + 2);
        assert_eq!(&c.gates()[..compute], {
            let mut rev = c.gates()[compute + 2..].to_vec();
            rev.reverse();
            rev
        });
    }

    #[test]
    fn passthrough_network_stats() {
        let c = compile(&parse_netlist("inputs 1\noutputs 1\nout 0 = in0").unwrap());
        assert_eq!(stats(&c).cnot, 1);
        assert_eq!(stats(&c).gate_count, 1);
    }

    #[test]
    fn degenerate_sources() {
        let text = "inputs 1\noutputs 3\ngate a = AND in0 in0\ngate o = OR in0 in0\n\
                    gate x = XOR in0 in0\nout 0 = a\nout 1 = o\nout 2 = x";
        let c = compile(&parse_netlist(text).unwrap());
        for x in 0..2 {
            let out = classical_simulate(&c, &basis(c.layout(), x, 0)).unwrap();
            assert_eq!(out, basis(c.layout(), x, x | (x << 1)));
        }
    }

    #[test]
    fn applying_twice_cancels() {
        let c = compile(&make_builtin(Builtin::Popcount { m: 3 }).unwrap());
        for x in 0..8 {
            let start = basis(c.layout(), x, 0);
            let once = classical_simulate(&c, &start).unwrap();
            assert_eq!(classical_simulate(&c, &once).unwrap(), start);
        }
    }

    #[test]
    fn length_mismatch() {
        let c = compile(&make_builtin(Builtin::Identity { m: 1 }).unwrap());
        assert_eq!(
            classical_simulate(&c, &[true]).unwrap_err(),
            Error::LengthMismatch { expected: 2, actual: 1 }
        );
    }

    #[test]
    fn rejects_invalid_gates() {
        let layout = Layout { inputs: 1, outputs: 1, ancillas: 1 };
        let bad = [
            ReversibleGate::X { target: 0 },
            ReversibleGate::X { target: 3 },
            ReversibleGate::Cnot { control: 1, target: 1 },
            ReversibleGate::Ccnot { controls: [0, 0], target: 2 },
            ReversibleGate::Ccnot { controls: [0, 2], target: 2 },
        ];
        for gate in bad {
            assert!(ReversibleCircuit::new(layout, vec![gate]).is_err(), "{gate:?}");
        }
    }

    proptest! {
        #[test]
        fn reversible_contract(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let net = random_network(&mut rng, &RandomNetworkParams::default());
            let c = compile(&net);
            let layout = c.layout();
            prop_assert_eq!(layout.ancillas, net.gates().len());
            let n_mask = (1u64 << layout.outputs) - 1;
            for x in 0..1u64 << layout.inputs {
                let y = rng.random::<u64>() & n_mask;
                let out = classical_simulate(&c, &basis(layout, x, y)).unwrap();
                prop_assert_eq!(out, basis(layout, x, y ^ net.evaluate_word(x)));
            }
        }
    }
}
