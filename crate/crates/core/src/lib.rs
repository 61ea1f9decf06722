//! Q-marginal state preparation from classical sampling circuits.
//!
//! A classical sampler `f: {0,1}^m -> {0,1}^n` ([`sampler`]) is compiled into
//! a reversible circuit `U` ([`reversible`]); preceding it with one layer of
//! Hadamards on the input register ([`marginal`]) prepares
//!
//! ```text
//! 2^(-m/2) sum_j |j>|f(j)>|0^k>
//! ```
//!
//! whose output-register marginal is exactly the sampler's distribution.
//! [`statevector`] simulates the construction, [`analysis`] checks it against
//! brute-force enumeration, and [`qmci`] estimates outcome probabilities by
//! amplitude estimation and by classical sampling for comparison.

pub mod analysis;
pub mod error;
pub mod marginal;
pub mod qmci;
pub mod reversible;
pub mod sampler;
pub mod statevector;

pub use analysis::{distribution_distance, verify_qmarginal, verify_qmarginal_with, VerificationReport, VerifyOptions};
pub use error::{Error, NetlistError, Result};
pub use marginal::{build_qmarginal, query_cost, QuantumCircuit, QuantumGate};
pub use qmci::{
    classical_mc_estimate, convergence_study, exact_amplitude, grover_power_probability, mlae_estimate,
    EstimationRecord, OutcomePredicate,
};
pub use reversible::{classical_simulate, compile, stats, Layout, ReversibleCircuit, ReversibleGate};
pub use sampler::{
    brute_force_distribution, emit_netlist, make_builtin, parse_netlist, Builtin, ExactDistribution, GateNetwork,
    GateOp,
};
pub use statevector::{MeasuredDistribution, Statevector};
