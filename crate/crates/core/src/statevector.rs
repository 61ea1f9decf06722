//! Dense double-precision statevector simulation.
//!
//! Index bit `q` of an amplitude's position is the value of qubit `q`.

use std::fmt::Write as _;
use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marginal::{QuantumCircuit, QuantumGate};

/// Largest width `Statevector::zero` will allocate (2^26 amplitudes, 1 GiB).
pub const DEFAULT_QUBIT_CAP: usize = 26;

#[cfg(feature = "parallel")]
const PARALLEL_MIN_QUBITS: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Outcome probabilities of a measured register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredDistribution {
    pub probabilities: Vec<f64>,
}

impl MeasuredDistribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

impl Statevector {
    /// `|0^w>` with the default cap.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::zero_with_cap(num_qubits, DEFAULT_QUBIT_CAP)
    }

    pub fn zero_with_cap(num_qubits: usize, cap: usize) -> Result<Self> {
        if num_qubits > cap || num_qubits >= usize::BITS as usize - 1 {
            return Err(Error::QubitCap {
                width: num_qubits,
                cap,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::SizeMismatch(format!(
                "{} amplitudes is not a power of two",
                amplitudes.len()
            )));
        }
        Ok(Self {
            num_qubits: amplitudes.len().trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Direct access for diagonal operators such as reflections.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_gate(&mut self, gate: &QuantumGate) -> Result<()> {
        let width = self.num_qubits;
        if let Some(q) = gate
            .controls()
            .iter()
            .chain(std::iter::once(&gate.target()))
            .find(|&&q| q >= width)
        {
            return Err(Error::InvalidCircuit(format!(
                "qubit {q} out of range for a {width}-qubit state"
            )));
        }
        let target = gate.target();
        match *gate {
            QuantumGate::H { .. } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.for_each_pair(target, move |_, lo, hi| {
                    let (a, b) = (*lo, *hi);
                    *lo = (a + b) * s;
                    *hi = (a - b) * s;
                });
            }
            QuantumGate::X { .. } => {
                self.for_each_pair(target, |_, lo, hi| std::mem::swap(lo, hi));
            }
            QuantumGate::Cnot { control, .. } => {
                let mask = 1usize << control;
                self.for_each_pair(target, move |i, lo, hi| {
                    if i & mask == mask {
                        std::mem::swap(lo, hi);
                    }
                });
            }
            QuantumGate::Ccnot {
                controls: [a, b], ..
            } => {
                let mask = (1usize << a) | (1usize << b);
                self.for_each_pair(target, move |i, lo, hi| {
                    if i & mask == mask {
                        std::mem::swap(lo, hi);
                    }
                });
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &QuantumCircuit) -> Result<()> {
        if circuit.width() != self.num_qubits {
            return Err(Error::SizeMismatch(format!(
                "circuit spans {} qubits, state has {}",
                circuit.width(),
                self.num_qubits
            )));
        }
        for gate in circuit.gates() {
            self.apply_gate(gate)?;
        }
        Ok(())
    }

    /// Visits every amplitude pair differing only in `target`, passing the
    /// index of the member with the target bit clear.
    fn for_each_pair<F>(&mut self, target: usize, f: F)
    where
        F: Fn(usize, &mut Complex64, &mut Complex64) + Send + Sync,
    {
        let stride = 1usize << target;
        #[cfg(feature = "parallel")]
        if self.num_qubits >= PARALLEL_MIN_QUBITS {
            use rayon::prelude::*;
            if stride >= 1 << 12 {
                for (b, chunk) in self.amplitudes.chunks_mut(2 * stride).enumerate() {
                    let (lo, hi) = chunk.split_at_mut(stride);
                    let base = b * 2 * stride;
                    lo.par_iter_mut()
                        .zip(hi.par_iter_mut())
                        .enumerate()
                        .for_each(|(i, (l, h))| f(base + i, l, h));
                }
            } else {
                self.amplitudes
                    .par_chunks_mut(2 * stride)
                    .enumerate()
                    .for_each(|(b, chunk)| pair_block(chunk, b * 2 * stride, stride, &f));
            }
            return;
        }
        for (b, chunk) in self.amplitudes.chunks_mut(2 * stride).enumerate() {
            pair_block(chunk, b * 2 * stride, stride, &f);
        }
    }

    /// Probability of each value of the qubits in `register`.
    pub fn marginal_distribution(&self, register: Range<usize>) -> Result<MeasuredDistribution> {
        if register.start > register.end || register.end > self.num_qubits {
            return Err(Error::SizeMismatch(format!(
                "register {register:?} outside a {}-qubit state",
                self.num_qubits
            )));
        }
        let len = register.end - register.start;
        let mask = (1usize << len) - 1;
        let mut probabilities = vec![0.0; 1 << len];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probabilities[(i >> register.start) & mask] += a.norm_sqr();
        }
        Ok(MeasuredDistribution { probabilities })
    }

    /// Entries with `|amplitude| > tol`, in index order.
    pub fn nonzero_amplitudes(&self, tol: f64) -> Vec<(usize, Complex64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > tol)
            .map(|(i, &a)| (i, a))
            .collect()
    }

    /// `index re im` per line for entries above `tol`.
    pub fn dump(&self, tol: f64) -> String {
        let mut out = String::new();
        for (i, a) in self.nonzero_amplitudes(tol) {
            let _ = writeln!(out, "{i} {:e} {:e}", a.re, a.im);
        }
        out
    }
}

#[inline]
fn pair_block<F>(chunk: &mut [Complex64], base: usize, stride: usize, f: &F)
where
    F: Fn(usize, &mut Complex64, &mut Complex64),
{
    let (lo, hi) = chunk.split_at_mut(stride);
    for (i, (l, h)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
        f(base + i, l, h);
    }
}

pub fn init_zero(num_qubits: usize) -> Result<Statevector> {
    Statevector::zero(num_qubits)
}

pub fn apply_gate(mut state: Statevector, gate: &QuantumGate) -> Result<Statevector> {
    state.apply_gate(gate)?;
    Ok(state)
}

pub fn run(circuit: &QuantumCircuit, mut state: Statevector) -> Result<Statevector> {
    state.apply_circuit(circuit)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marginal::build_qmarginal;
    use crate::reversible::{compile, Layout};
    use crate::sampler::{make_builtin, random_network, Builtin, RandomNetworkParams};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn bell() -> Statevector {
        let layout = Layout { inputs: 1, outputs: 1, ancillas: 0 };
        let circuit = QuantumCircuit::new(
            layout,
            vec![QuantumGate::H { target: 0 }, QuantumGate::Cnot { control: 0, target: 1 }],
        )
        .unwrap();
        run(&circuit, init_zero(2).unwrap()).unwrap()
    }

    #[test]
    fn zero_states() {
        assert_eq!(init_zero(1).unwrap().amplitudes(), &[c(1.0), c(0.0)]);
        assert_eq!(init_zero(2).unwrap().amplitudes(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert_eq!(init_zero(27).unwrap_err(), Error::QubitCap { width: 27, cap: 26 });
    }

    #[test]
    fn hadamard_on_zero() {
        let s = apply_gate(init_zero(1).unwrap(), &QuantumGate::H { target: 0 }).unwrap();
        assert!(close(s.amplitudes(), &[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)], 1e-15));
    }

    #[test]
    fn cnot_permutes() {
        let s = Statevector::from_amplitudes(vec![c(0.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        let s = apply_gate(s, &QuantumGate::Cnot { control: 0, target: 1 }).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0), c(0.0), c(0.0), c(1.0)]);
    }

    #[test]
    fn out_of_range_gate() {
        let err = apply_gate(init_zero(2).unwrap(), &QuantumGate::X { target: 2 });
        assert!(err.is_err());
    }

    #[test]
    fn bell_pair() {
        let s = bell();
        assert!(close(
            s.amplitudes(),
            &[c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)],
            1e-15
        ));
        let p = s.marginal_distribution(1..2).unwrap().probabilities;
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        let nz = s.nonzero_amplitudes(1e-12);
        assert_eq!(nz.iter().map(|e| e.0).collect::<Vec<_>>(), vec![0, 3]);
        assert!(nz.iter().all(|e| (e.1.re - FRAC_1_SQRT_2).abs() < 1e-15));
        assert!(s.dump(1e-12).lines().count() == 2);
    }

    #[test]
    fn product_state_marginal() {
        // qubit 0 = 0, qubit 1 = 1 -> index 2
        let s = Statevector::from_amplitudes(vec![c(0.0), c(0.0), c(1.0), c(0.0)]).unwrap();
        assert_eq!(s.marginal_distribution(1..2).unwrap().probabilities, vec![0.0, 1.0]);
        assert!(s.marginal_distribution(1..3).is_err());
    }

    #[test]
    fn empty_circuit_is_identity() {
        let layout = Layout { inputs: 2, outputs: 0, ancillas: 0 };
        let circuit = QuantumCircuit::new(layout, Vec::new()).unwrap();
        let s = bell();
        assert_eq!(run(&circuit, s.clone()).unwrap(), s);
        let wrong = QuantumCircuit::new(Layout { inputs: 3, outputs: 0, ancillas: 0 }, Vec::new()).unwrap();
        assert!(run(&wrong, s).is_err());
    }

    #[test]
    fn unit_state_marginal() {
        assert_eq!(init_zero(3).unwrap().nonzero_amplitudes(0.0), vec![(0, c(1.0))]);
    }

    #[test]
    fn popcount_qmarginal_amplitudes() {
        let u = compile(&make_builtin(Builtin::Popcount { m: 3 }).unwrap());
        let circuit = build_qmarginal(&u);
        let s = run(&circuit, init_zero(circuit.width()).unwrap()).unwrap();
        let nz = s.nonzero_amplitudes(1e-12);
        assert_eq!(nz.len(), 8);
        let expected = 1.0 / 8f64.sqrt();
        for (_, a) in nz {
            assert!((a.re - expected).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
        let p = s.marginal_distribution(u.layout().output_range()).unwrap().probabilities;
        for (got, want) in p.iter().zip([0.125, 0.375, 0.375, 0.125]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn parallel_path_matches_sequential() {
        // 15 qubits crosses the parallel threshold; compare against a
        // reference built from single-qubit sweeps on a small-chunk copy.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let amps: Vec<Complex64> = (0..1 << 15)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let gates = [
            QuantumGate::H { target: 14 },
            QuantumGate::H { target: 0 },
            QuantumGate::Cnot { control: 3, target: 13 },
            QuantumGate::Ccnot { controls: [14, 2], target: 7 },
        ];
        let mut fast = Statevector::from_amplitudes(amps.clone()).unwrap();
        let mut reference = amps;
        for g in &gates {
            fast.apply_gate(g).unwrap();
            naive_apply(&mut reference, g);
        }
        assert_eq!(fast.amplitudes(), reference.as_slice());
    }

    fn naive_apply(amps: &mut [Complex64], gate: &QuantumGate) {
        let t = 1usize << gate.target();
        let mask: usize = gate.controls().iter().map(|&q| 1usize << q).sum();
        let s = FRAC_1_SQRT_2;
        for i in 0..amps.len() {
            if i & t != 0 {
                continue;
            }
            let (a, b) = (amps[i], amps[i | t]);
            match gate {
                QuantumGate::H { .. } => {
                    amps[i] = (a + b) * s;
                    amps[i | t] = (a - b) * s;
                }
                _ if i & mask == mask => {
                    amps[i] = b;
                    amps[i | t] = a;
                }
                _ => {}
            }
        }
    }

    proptest! {
        #[test]
        fn norm_and_realness(seed in any::<u64>()) {
            let params = RandomNetworkParams { max_width: Some(14), ..Default::default() };
            let net = random_network(&mut ChaCha8Rng::seed_from_u64(seed), &params);
            let circuit = build_qmarginal(&compile(&net));
            let mut s = init_zero(circuit.width()).unwrap();
            for g in circuit.gates() {
                s.apply_gate(g).unwrap();
                prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
            }
            for a in s.amplitudes() {
                prop_assert!(a.im.abs() <= 1e-12 && a.re >= -1e-12);
            }
            let full = s.marginal_distribution(0..s.num_qubits()).unwrap().probabilities;
            for (p, a) in full.iter().zip(s.amplitudes()) {
                prop_assert_eq!(*p, a.norm_sqr());
            }
        }

        #[test]
        fn double_hadamard_restores(seed in any::<u64>(), q in 0usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let amps: Vec<Complex64> = (0..16).map(|_| Complex64::new(rng.random(), rng.random())).collect();
            let mut s = Statevector::from_amplitudes(amps.clone()).unwrap();
            s.apply_gate(&QuantumGate::H { target: q }).unwrap();
            s.apply_gate(&QuantumGate::H { target: q }).unwrap();
            prop_assert!(close(s.amplitudes(), &amps, 1e-12));
        }

        #[test]
        fn permutations_preserve_multiset(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let amps: Vec<Complex64> = (0..32).map(|_| Complex64::new(rng.random(), rng.random())).collect();
            let mut s = Statevector::from_amplitudes(amps.clone()).unwrap();
            let gates = [
                QuantumGate::X { target: rng.random_range(0..5) },
                QuantumGate::Cnot { control: 0, target: 4 },
                QuantumGate::Ccnot { controls: [1, 3], target: 2 },
            ];
            for g in &gates { s.apply_gate(g).unwrap(); }
            let key = |a: &Complex64| (a.re.to_bits(), a.im.to_bits());
            let mut before: Vec<_> = amps.iter().map(key).collect();
            let mut after: Vec<_> = s.amplitudes().iter().map(key).collect();
            before.sort_unstable();
            after.sort_unstable();
            prop_assert_eq!(before, after);
        }
    }
}
