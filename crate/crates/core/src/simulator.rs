//! Exact statevector simulation of the fixed gate set, plus ancilla
//! probability extraction and seeded shot sampling.
//!
//! Amplitude indexing is little-endian: bit `q` of a basis index is qubit
//! `q`, matching the bit layout of
//! [`IsingHamiltonian::energy_of_index`](crate::hamiltonian::IsingHamiltonian::energy_of_index).
//!
//! Gate matrices are fixed as
//!
//! ```text
//!   H      = (1/√2) [[1, 1], [1, −1]]
//!   RZ(θ)  = diag(e^{−iθ/2}, e^{+iθ/2})
//!   RX(θ)  = [[cos(θ/2), −i·sin(θ/2)], [−i·sin(θ/2), cos(θ/2)]]
//! ```
//!
//! and controlled variants apply the base gate on the target when every
//! control bit is 1. With these conventions `RZ(−2tβ)` equals `e^{itβZ}`
//! with no global-phase discrepancy, which keeps the exponential-circuit
//! equalities exact rather than merely up-to-phase. Controlled gates
//! (including the three-qubit Toffoli marker) are simulated directly on the
//! control-bit-1 subspace; decomposition into CNOTs happens only in the
//! cost model.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// One gate of the fixed set.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H { target: usize },
    Rx { target: usize, theta: f64 },
    Rz { target: usize, theta: f64 },
    Cnot { control: usize, target: usize },
    ControlledH { control: usize, target: usize },
    ControlledRz { control: usize, target: usize, theta: f64 },
    ControlledRx { control: usize, target: usize, theta: f64 },
    /// Doubly-controlled NOT. Produced when a CNOT inside a circuit body is
    /// promoted by an extra control; simulated exactly and expanded to six
    /// CNOTs only in the cost model.
    Toffoli { control_a: usize, control_b: usize, target: usize },
}

impl Gate {
    /// Qubits the gate touches (controls first, then target).
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { target } | Gate::Rx { target, .. } | Gate::Rz { target, .. } => {
                vec![target]
            }
            Gate::Cnot { control, target }
            | Gate::ControlledH { control, target }
            | Gate::ControlledRz {
                control, target, ..
            }
            | Gate::ControlledRx {
                control, target, ..
            } => vec![control, target],
            Gate::Toffoli {
                control_a,
                control_b,
                target,
            } => vec![control_a, control_b, target],
        }
    }

    /// Rotation angle where applicable.
    pub fn theta(&self) -> Option<f64> {
        match *self {
            Gate::Rx { theta, .. }
            | Gate::Rz { theta, .. }
            | Gate::ControlledRz { theta, .. }
            | Gate::ControlledRx { theta, .. } => Some(theta),
            _ => None,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for &q in &qubits {
            if q >= n_qubits {
                return Err(Error::IndexOutOfRange(format!(
                    "gate {self:?} touches qubit {q} but the register has {n_qubits} qubits"
                )));
            }
        }
        for (i, &a) in qubits.iter().enumerate() {
            if qubits[i + 1..].contains(&a) {
                return Err(Error::InvalidInput(format!(
                    "gate {self:?} uses qubit {a} more than once"
                )));
            }
        }
        if let Some(theta) = self.theta() {
            if !theta.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "gate {self:?} has a non-finite angle"
                )));
            }
        }
        Ok(())
    }
}

/// An ordered gate list over a fixed register size.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Append every gate of `other` (which may act on a smaller register).
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::ShapeMismatch(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.n_qubits, self.n_qubits
            )));
        }
        for g in &other.gates {
            self.gates.push(g.clone());
        }
        Ok(())
    }

    pub fn h(&mut self, target: usize) -> Result<()> {
        self.push(Gate::H { target })
    }

    pub fn rx(&mut self, target: usize, theta: f64) -> Result<()> {
        self.push(Gate::Rx { target, theta })
    }

    pub fn rz(&mut self, target: usize, theta: f64) -> Result<()> {
        self.push(Gate::Rz { target, theta })
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(Gate::Cnot { control, target })
    }
}

/// 2^n complex amplitudes, unit norm within 1e-10.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `n_qubits` qubits.
    pub fn zero_state(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "amplitude vector length must be a power of two, got {dim}"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "amplitudes are not normalized: Σ|a|² = {norm}"
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// |amplitude|² of one basis state.
    pub fn probability_of(&self, index: u64) -> f64 {
        self.amps[index as usize].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

fn h_matrix() -> [[Complex64; 2]; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
    ]
}

fn rz_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let half = theta / 2.0;
    [
        [Complex64::from_polar(1.0, -half), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, half)],
    ]
}

fn rx_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
        [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
    ]
}

/// Apply a 2×2 unitary on `target`, restricted to basis states where every
/// bit of `control_mask` is set (0 for no controls).
fn apply_single(amps: &mut [Complex64], target: usize, control_mask: u64, m: [[Complex64; 2]; 2]) {
    let t_bit = 1u64 << target;
    for i in 0..amps.len() as u64 {
        if i & t_bit == 0 && (i & control_mask) == control_mask {
            let j = i | t_bit;
            let (a, b) = (amps[i as usize], amps[j as usize]);
            amps[i as usize] = m[0][0] * a + m[0][1] * b;
            amps[j as usize] = m[1][0] * a + m[1][1] * b;
        }
    }
}

/// Flip `target` where every bit of `control_mask` is set.
fn apply_not(amps: &mut [Complex64], target: usize, control_mask: u64) {
    let t_bit = 1u64 << target;
    for i in 0..amps.len() as u64 {
        if i & t_bit == 0 && (i & control_mask) == control_mask {
            amps.swap(i as usize, (i | t_bit) as usize);
        }
    }
}

fn apply_gate(amps: &mut [Complex64], gate: &Gate) {
    match *gate {
        Gate::H { target } => apply_single(amps, target, 0, h_matrix()),
        Gate::Rx { target, theta } => apply_single(amps, target, 0, rx_matrix(theta)),
        Gate::Rz { target, theta } => apply_single(amps, target, 0, rz_matrix(theta)),
        Gate::Cnot { control, target } => apply_not(amps, target, 1 << control),
        Gate::ControlledH { control, target } => {
            apply_single(amps, target, 1 << control, h_matrix())
        }
        Gate::ControlledRz {
            control,
            target,
            theta,
        } => apply_single(amps, target, 1 << control, rz_matrix(theta)),
        Gate::ControlledRx {
            control,
            target,
            theta,
        } => apply_single(amps, target, 1 << control, rx_matrix(theta)),
        Gate::Toffoli {
            control_a,
            control_b,
            target,
        } => apply_not(amps, target, (1 << control_a) | (1 << control_b)),
    }
}

/// Apply every gate of `circuit` in order to `initial`.
pub fn run(circuit: &Circuit, initial: &StateVector) -> Result<StateVector> {
    if circuit.n_qubits() != initial.n_qubits() {
        return Err(Error::ShapeMismatch(format!(
            "circuit has {} qubits, state has {}",
            circuit.n_qubits(),
            initial.n_qubits()
        )));
    }
    let mut amps = initial.amps.clone();
    for gate in circuit.gates() {
        apply_gate(&mut amps, gate);
    }
    Ok(StateVector {
        n_qubits: initial.n_qubits,
        amps,
    })
}

/// Marginal probabilities (p0, p1) of one qubit, both clamped to [0, 1].
pub fn ancilla_probabilities(state: &StateVector, qubit: usize) -> Result<(f64, f64)> {
    if qubit >= state.n_qubits() {
        return Err(Error::IndexOutOfRange(format!(
            "qubit {qubit} out of range for a {}-qubit state",
            state.n_qubits()
        )));
    }
    let bit = 1u64 << qubit;
    let mut p0 = 0.0;
    for (i, a) in state.amps.iter().enumerate() {
        if i as u64 & bit == 0 {
            p0 += a.norm_sqr();
        }
    }
    let p0 = p0.clamp(0.0, 1.0);
    Ok((p0, 1.0 - p0))
}

/// Tally of single-qubit measurement outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementCounts {
    pub zeros: u64,
    pub ones: u64,
}

impl MeasurementCounts {
    pub fn total(&self) -> u64 {
        self.zeros + self.ones
    }
}

/// Draw `shots` independent measurements of one qubit. Deterministic for a
/// fixed seed.
pub fn sample_qubit(
    state: &StateVector,
    qubit: usize,
    shots: u64,
    seed: u64,
) -> Result<MeasurementCounts> {
    if shots == 0 {
        return Err(Error::InvalidInput("shot count must be at least 1".into()));
    }
    let (_, p1) = ancilla_probabilities(state, qubit)?;
    let mut rng = rng_from_seed(seed);
    let mut ones = 0u64;
    for _ in 0..shots {
        if rng.gen::<f64>() < p1 {
            ones += 1;
        }
    }
    Ok(MeasurementCounts {
        zeros: shots - ones,
        ones,
    })
}

/// (zeros − ones) / total.
pub fn p0_minus_p1(counts: &MeasurementCounts) -> Result<f64> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::InvalidInput(
            "cannot form p0 − p1 from zero shots".into(),
        ));
    }
    Ok((counts.zeros as f64 - counts.ones as f64) / total as f64)
}

/// Draw `shots` full-register samples; returns basis-index → count in
/// ascending index order. Deterministic for a fixed seed.
pub fn sample_bitstrings(
    state: &StateVector,
    shots: u64,
    seed: u64,
) -> std::collections::BTreeMap<u64, u64> {
    // cumulative distribution, then one binary search per shot
    let mut cumulative = Vec::with_capacity(state.amps.len());
    let mut acc = 0.0;
    for a in &state.amps {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let mut rng = rng_from_seed(seed);
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.gen::<f64>() * acc;
        let idx = cumulative.partition_point(|&c| c <= u);
        let idx = idx.min(state.amps.len() - 1) as u64;
        *counts.entry(idx).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_on_zero() {
        let mut circuit = Circuit::new(1);
        circuit.h(0).unwrap();
        let out = run(&circuit, &StateVector::zero_state(1)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitudes()[0] - c(s, 0.0)).norm() < 1e-12);
        assert!((out.amplitudes()[1] - c(s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rz_phases_zero_component() {
        let mut circuit = Circuit::new(1);
        circuit.rz(0, -1.4).unwrap();
        let out = run(&circuit, &StateVector::zero_state(1)).unwrap();
        assert!((out.amplitudes()[0] - Complex64::from_polar(1.0, 0.7)).norm() < 1e-12);
        assert!(out.amplitudes()[1].norm() < 1e-12);
    }

    #[test]
    fn cnot_builds_bell_pair() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_amplitudes(vec![c(s, 0.0), c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let mut circuit = Circuit::new(2);
        circuit.cnot(0, 1).unwrap();
        let out = run(&circuit, &plus).unwrap();
        assert!((out.amplitudes()[0] - c(s, 0.0)).norm() < 1e-12);
        assert!(out.amplitudes()[1].norm() < 1e-12);
        assert!(out.amplitudes()[2].norm() < 1e-12);
        assert!((out.amplitudes()[3] - c(s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn run_rejects_size_mismatch() {
        let circuit = Circuit::new(2);
        assert!(matches!(
            run(&circuit, &StateVector::zero_state(1)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn circuit_validates_gates() {
        let mut circuit = Circuit::new(2);
        assert!(circuit.h(2).is_err());
        assert!(circuit.cnot(1, 1).is_err());
        assert!(circuit.rx(0, f64::NAN).is_err());
    }

    #[test]
    fn probabilities_on_basis_and_superposition() {
        let state = StateVector::zero_state(1);
        assert_eq!(ancilla_probabilities(&state, 0).unwrap(), (1.0, 0.0));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_amplitudes(vec![c(s, 0.0), c(s, 0.0)]).unwrap();
        let (p0, p1) = ancilla_probabilities(&plus, 0).unwrap();
        assert!((p0 - 0.5).abs() < 1e-12 && (p1 - 0.5).abs() < 1e-12);

        assert!(ancilla_probabilities(&state, 1).is_err());
    }

    #[test]
    fn sampling_degenerate_probabilities() {
        let zero = StateVector::zero_state(1);
        let counts = sample_qubit(&zero, 0, 100, 1).unwrap();
        assert_eq!((counts.zeros, counts.ones), (100, 0));

        let one = StateVector::from_amplitudes(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let counts = sample_qubit(&one, 0, 7, 1).unwrap();
        assert_eq!((counts.zeros, counts.ones), (0, 7));
    }

    #[test]
    fn sampling_matches_binomial_error_scale() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_amplitudes(vec![c(s, 0.0), c(s, 0.0)]).unwrap();
        let shots = 1_000_000;
        let counts = sample_qubit(&plus, 0, shots, 42).unwrap();
        let freq = counts.ones as f64 / shots as f64;
        assert!((freq - 0.5).abs() < 0.002, "freq = {freq}");
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_amplitudes(vec![c(s, 0.0), c(s, 0.0)]).unwrap();
        let a = sample_qubit(&plus, 0, 1000, 5).unwrap();
        let b = sample_qubit(&plus, 0, 1000, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn p0_minus_p1_cases() {
        let f = |zeros, ones| p0_minus_p1(&MeasurementCounts { zeros, ones });
        assert!((f(600, 400).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(f(500, 500).unwrap(), 0.0);
        assert_eq!(f(1000, 0).unwrap(), 1.0);
        assert!(matches!(f(0, 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn bitstring_sampling_concentrates_on_support() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell =
            StateVector::from_amplitudes(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)])
                .unwrap();
        let counts = sample_bitstrings(&bell, 10_000, 9);
        let total: u64 = counts.values().sum();
        assert_eq!(total, 10_000);
        assert!(counts.keys().all(|&k| k == 0 || k == 3));
        let frac = counts[&0] as f64 / 10_000.0;
        assert!((frac - 0.5).abs() < 0.05);
    }
}
