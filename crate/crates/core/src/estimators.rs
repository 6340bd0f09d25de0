//! Expectation-value estimators and their a-priori error bounds.
//!
//! Five ways to get at ⟨φ|H|φ⟩ for a diagonal H:
//!
//! - [`exact_expectation`] — the analytic diagonal sum (reference value).
//! - [`eva_estimate`] — one ancilla test circuit measuring
//!   Im⟨φ|e^{iH/k}|φ⟩, rescaled by k. Error of the rescaled estimate is
//!   bounded by ‖H‖³/(6k²); sampling noise is also rescaled by k, which the
//!   k²-shot policy ([`shots_for_k`]) compensates.
//! - [`reduced_eva_estimate`] — the Toffoli-free variant, valid for
//!   single-axis ansatz states and small angles, bounded by ‖H‖²/(2k).
//! - [`vqe_naive_estimate`] — one sampling circuit per Hamiltonian term.
//! - [`vqe_grouped_estimate`] — one sampling circuit per qubit-wise
//!   commuting group of terms (a single group for any Z-only Hamiltonian).
//!
//! All sampled estimators accept [`Shots::Exact`], which reads the outcome
//! distribution analytically instead of sampling; bound checks and estimator
//! agreement become deterministic that way.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::circuits::{
    cost_report, hadamard_test_circuit, reduced_eva_circuit, Ansatz, CostReport,
};
use crate::error::{Error, Result};
use crate::hamiltonian::IsingHamiltonian;
use crate::rng::derive_seed;
use crate::simulator::{
    ancilla_probabilities, p0_minus_p1, run, sample_bitstrings, sample_qubit, Circuit,
    StateVector,
};

/// Largest register for analytic diagonal sums (2^24 amplitudes).
pub const EXACT_MAX_QUBITS: usize = 24;

/// Which estimator produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Eva,
    ReducedEva,
    VqeNaive,
    VqeGrouped,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Exact,
        Method::Eva,
        Method::ReducedEva,
        Method::VqeNaive,
        Method::VqeGrouped,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Eva => "eva",
            Method::ReducedEva => "reduced_eva",
            Method::VqeNaive => "vqe_naive",
            Method::VqeGrouped => "vqe_grouped",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "eva" => Ok(Method::Eva),
            "reduced_eva" | "reduced" => Ok(Method::ReducedEva),
            "vqe_naive" => Ok(Method::VqeNaive),
            "vqe_grouped" => Ok(Method::VqeGrouped),
            other => Err(Error::InvalidInput(format!(
                "unknown method '{other}' (expected exact, eva, reduced_eva, vqe_naive or vqe_grouped)"
            ))),
        }
    }
}

/// Shot budget for a sampled estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Finite(u64),
    /// Read outcome probabilities analytically instead of sampling.
    Exact,
}

/// Output of one estimator run. `value` is in the original
/// (pre-normalization) energy units; `bound` is the a-priori error bound in
/// the same units where the method has one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub method: Method,
    pub value: f64,
    pub k: f64,
    /// Total samples drawn (0 in exact-probability mode).
    pub shots_used: u64,
    pub circuit_count: usize,
    pub cost: CostReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub seed: u64,
}

fn check_sizes(h: &IsingHamiltonian, ansatz: &Ansatz) -> Result<()> {
    if ansatz.n_qubits() != h.n_qubits() {
        return Err(Error::ShapeMismatch(format!(
            "ansatz has {} qubits, hamiltonian has {}",
            ansatz.n_qubits(),
            h.n_qubits()
        )));
    }
    if h.n_qubits() > EXACT_MAX_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "analytic evaluation supports at most {EXACT_MAX_QUBITS} qubits, got {}",
            h.n_qubits()
        )));
    }
    Ok(())
}

fn check_k(k: f64) -> Result<()> {
    if !k.is_finite() || k < 1.0 {
        return Err(Error::InvalidInput(format!(
            "k must be a finite value ≥ 1, got {k}"
        )));
    }
    Ok(())
}

fn prepared_state(ansatz: &Ansatz) -> Result<StateVector> {
    run(
        &ansatz.to_circuit(),
        &StateVector::zero_state(ansatz.n_qubits()),
    )
}

/// ⟨φ|H|φ⟩ = Σ_x |⟨x|φ⟩|² · E_x, by simulation of the ansatz.
pub fn exact_expectation(h: &IsingHamiltonian, ansatz: &Ansatz) -> Result<f64> {
    check_sizes(h, ansatz)?;
    let state = prepared_state(ansatz)?;
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(x, a)| a.norm_sqr() * h.energy_of_index(x as u64))
        .sum())
}

/// Im⟨φ|e^{iH/k}|φ⟩ = Σ_x |⟨x|φ⟩|² · sin(E_x/k) — the analytic value the
/// test circuit measures.
pub fn imag_exponential_exact(h: &IsingHamiltonian, ansatz: &Ansatz, k: f64) -> Result<f64> {
    check_sizes(h, ansatz)?;
    check_k(k)?;
    let state = prepared_state(ansatz)?;
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(x, a)| a.norm_sqr() * (h.energy_of_index(x as u64) / k).sin())
        .sum())
}

/// ceil(base_shots · k²): matching the k-rescaled estimate's variance needs
/// k² times the shots of the unscaled one.
pub fn shots_for_k(base_shots: u64, k: f64) -> u64 {
    (base_shots as f64 * k * k).ceil() as u64
}

fn check_normalized(h: &IsingHamiltonian) -> Result<f64> {
    let norm = h.norm();
    if norm.value > 1.0 + 1e-12 {
        return Err(Error::InvalidInput(format!(
            "bound formulas require a normalized hamiltonian (‖H‖ ≤ 1), got ‖H‖ = {}",
            norm.value
        )));
    }
    Ok(norm.value)
}

/// ‖H‖³/(6k³): bound on |Im⟨e^{iH/k}⟩ − ⟨H⟩/k| for normalized H.
pub fn eva_error_bound(h: &IsingHamiltonian, k: f64) -> Result<f64> {
    check_k(k)?;
    let norm = check_normalized(h)?;
    Ok(norm.powi(3) / (6.0 * k.powi(3)))
}

/// ‖H‖²/(2k²): bound on |P(0)−P(1) − ⟨H⟩/k| for the reduced circuit with a
/// single-axis ansatz and normalized H.
pub fn reduced_error_bound(h: &IsingHamiltonian, k: f64) -> Result<f64> {
    check_k(k)?;
    let norm = check_normalized(h)?;
    Ok(norm.powi(2) / (2.0 * k.powi(2)))
}

/// Measure or read the ancilla of a test circuit; returns (p0 − p1, shots).
fn ancilla_estimate(circuit: &Circuit, shots: Shots, seed: u64) -> Result<(f64, u64)> {
    let state = run(circuit, &StateVector::zero_state(circuit.n_qubits()))?;
    let ancilla = circuit.n_qubits() - 1;
    match shots {
        Shots::Exact => {
            let (p0, p1) = ancilla_probabilities(&state, ancilla)?;
            Ok((p0 - p1, 0))
        }
        Shots::Finite(n) => {
            let counts = sample_qubit(&state, ancilla, n, seed)?;
            Ok((p0_minus_p1(&counts)?, n))
        }
    }
}

fn run_single_circuit_estimate(
    h: &IsingHamiltonian,
    ansatz: &Ansatz,
    k: f64,
    shots: Shots,
    seed: u64,
    method: Method,
) -> Result<EstimateReport> {
    check_sizes(h, ansatz)?;
    check_k(k)?;
    let normalized = h.normalize()?;
    let scale = normalized.scale();
    let inner = normalized.hamiltonian();
    let circuit = match method {
        Method::Eva => hadamard_test_circuit(inner, k, ansatz)?,
        Method::ReducedEva => reduced_eva_circuit(inner, k, ansatz)?,
        _ => unreachable!("single-circuit estimators only"),
    };
    let (p01, shots_used) = ancilla_estimate(&circuit, shots, seed)?;
    let norm = inner.norm().value;
    let bound = match method {
        Method::Eva => scale * norm.powi(3) / (6.0 * k.powi(2)),
        Method::ReducedEva => scale * norm.powi(2) / (2.0 * k),
        _ => unreachable!(),
    };
    Ok(EstimateReport {
        method,
        value: scale * k * p01,
        k,
        shots_used,
        circuit_count: 1,
        cost: cost_report(&circuit, 1, shots_used),
        bound: Some(bound),
        seed,
    })
}

/// Single-circuit estimate of ⟨φ|H|φ⟩ via the controlled exponential.
///
/// The Hamiltonian is normalized internally; the estimate and bound are
/// rescaled back to original units. `Shots::Finite(base)` is scaled by the
/// k² policy; use [`eva_estimate_fixed_shots`] to bypass it.
pub fn eva_estimate(
    h: &IsingHamiltonian,
    ansatz: &Ansatz,
    k: f64,
    base_shots: Shots,
    seed: u64,
) -> Result<EstimateReport> {
    check_k(k)?;
    let shots = match base_shots {
        Shots::Finite(base) => Shots::Finite(shots_for_k(base, k)),
        Shots::Exact => Shots::Exact,
    };
    run_single_circuit_estimate(h, ansatz, k, shots, seed, Method::Eva)
}

/// [`eva_estimate`] with a literal shot count (no k² scaling).
pub fn eva_estimate_fixed_shots(
    h: &IsingHamiltonian,
    ansatz: &Ansatz,
    k: f64,
    shots: u64,
    seed: u64,
) -> Result<EstimateReport> {
    run_single_circuit_estimate(h, ansatz, k, Shots::Finite(shots), seed, Method::Eva)
}

/// Single-circuit estimate via the Toffoli-free reduced circuit.
///
/// Requires a single-axis ansatz. Shot policy as in [`eva_estimate`].
pub fn reduced_eva_estimate(
    h: &IsingHamiltonian,
    ansatz: &Ansatz,
    k: f64,
    base_shots: Shots,
    seed: u64,
) -> Result<EstimateReport> {
    check_k(k)?;
    let shots = match base_shots {
        Shots::Finite(base) => Shots::Finite(shots_for_k(base, k)),
        Shots::Exact => Shots::Exact,
    };
    run_single_circuit_estimate(h, ansatz, k, shots, seed, Method::ReducedEva)
}

/// [`reduced_eva_estimate`] with a literal shot count (no k² scaling).
pub fn reduced_eva_estimate_fixed_shots(
    h: &IsingHamiltonian,
    ansatz: &Ansatz,
    k: f64,
    shots: u64,
    seed: u64,
) -> Result<EstimateReport> {
    run_single_circuit_estimate(h, ansatz, k, Shots::Finite(shots), seed, Method::ReducedEva)
}

/// Wrap [`exact_expectation`] in a report so the harness can treat every
/// method uniformly.
pub fn exact_estimate(h: &IsingHamiltonian, ansatz: &Ansatz) -> Result<EstimateReport> {
    let value = exact_expectation(h, ansatz)?;
    let circuit = ansatz.to_circuit();
    Ok(EstimateReport {
        method: Method::Exact,
        value,
        k: 1.0,
        shots_used: 0,
        circuit_count: 1,
        cost: cost_report(&circuit, 1, 0),
        bound: None,
        seed: 0,
    })
}

fn term_mean_from_counts(
    counts: &std::collections::BTreeMap<u64, u64>,
    shots: u64,
    mask: u64,
) -> f64 {
    let mut acc = 0.0;
    for (&x, &c) in counts {
        let sign = 1.0 - 2.0 * ((x & mask).count_ones() & 1) as f64;
        acc += c as f64 * sign;
    }
    acc / shots as f64
}

fn term_mask(term: &crate::hamiltonian::PauliZTerm) -> u64 {
    term.support().iter().fold(0u64, |m, &q| m | (1 << q))
}

/// Per-term estimator: one sampling circuit per Hamiltonian term, each
/// circuit being the ansatz followed by full computational-basis sampling.
pub fn vqe_naive_estimate(
    h: &IsingHamiltonian,
    ansatz: &Ansatz,
    shots_per_circuit: Shots,
    seed: u64,
) -> Result<EstimateReport> {
    check_sizes(h, ansatz)?;
    if h.is_empty() {
        return Err(Error::InvalidInput(
            "per-term estimation needs at least one term".into(),
        ));
    }
    let circuit_count = h.n_terms();
    let state = prepared_state(ansatz)?;
    let (value, shots_used) = match shots_per_circuit {
        Shots::Exact => (
            state
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(x, a)| a.norm_sqr() * h.energy_of_index(x as u64))
                .sum(),
            0,
        ),
        Shots::Finite(shots) => {
            let mut value = 0.0;
            for (i, term) in h.terms().iter().enumerate() {
                let counts = sample_bitstrings(&state, shots, derive_seed(seed, i as u64));
                value += term.coeff() * term_mean_from_counts(&counts, shots, term_mask(term));
            }
            (value, shots * circuit_count as u64)
        }
    };
    let ansatz_circuit = ansatz.to_circuit();
    Ok(EstimateReport {
        method: Method::VqeNaive,
        value,
        k: 1.0,
        shots_used,
        circuit_count,
        cost: cost_report(&ansatz_circuit, circuit_count, shots_used),
        bound: None,
        seed,
    })
}

/// Per-qubit Pauli letter of a measurement string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

/// A general Pauli string with a coefficient; used by the grouped baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
    coeff: f64,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>, coeff: f64) -> Result<Self> {
        if letters.iter().all(|&l| l == PauliLetter::I) {
            return Err(Error::InvalidInput(
                "pauli string must have at least one non-identity letter".into(),
            ));
        }
        Ok(Self { letters, coeff })
    }

    /// Z-string over `support` on an `n_qubits` register.
    pub fn z_string(n_qubits: usize, support: &[usize], coeff: f64) -> Result<Self> {
        let mut letters = vec![PauliLetter::I; n_qubits];
        for &q in support {
            if q >= n_qubits {
                return Err(Error::IndexOutOfRange(format!(
                    "qubit {q} out of range for {n_qubits} qubits"
                )));
            }
            letters[q] = PauliLetter::Z;
        }
        Self::new(letters, coeff)
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    /// Per qubit, the letters agree or at least one is the identity.
    pub fn qubit_wise_commutes(&self, other: &PauliString) -> bool {
        self.letters
            .iter()
            .zip(&other.letters)
            .all(|(&a, &b)| a == PauliLetter::I || b == PauliLetter::I || a == b)
    }
}

/// Partition strings into qubit-wise commuting groups: greedy first-fit
/// over strings sorted by descending |coeff|. Returns groups of indices
/// into the input slice.
pub fn group_pauli_strings(strings: &[PauliString]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..strings.len()).collect();
    order.sort_by(|&a, &b| {
        strings[b]
            .coeff
            .abs()
            .partial_cmp(&strings[a].coeff.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        let fit = groups.iter_mut().find(|group| {
            group
                .iter()
                .all(|&member| strings[idx].qubit_wise_commutes(&strings[member]))
        });
        match fit {
            Some(group) => group.push(idx),
            None => groups.push(vec![idx]),
        }
    }
    for group in &mut groups {
        group.sort_unstable();
    }
    groups
}

/// Grouped estimator: one sampling circuit per qubit-wise commuting group;
/// every member of a group is estimated from the same samples. Z-only
/// Hamiltonians always form a single group.
pub fn vqe_grouped_estimate(
    h: &IsingHamiltonian,
    ansatz: &Ansatz,
    shots_per_circuit: Shots,
    seed: u64,
) -> Result<EstimateReport> {
    check_sizes(h, ansatz)?;
    if h.is_empty() {
        return Err(Error::InvalidInput(
            "grouped estimation needs at least one term".into(),
        ));
    }
    let strings = h
        .terms()
        .iter()
        .map(|t| PauliString::z_string(h.n_qubits(), t.support(), t.coeff()))
        .collect::<Result<Vec<_>>>()?;
    let groups = group_pauli_strings(&strings);
    let circuit_count = groups.len();
    let state = prepared_state(ansatz)?;
    let (value, shots_used) = match shots_per_circuit {
        Shots::Exact => (
            state
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(x, a)| a.norm_sqr() * h.energy_of_index(x as u64))
                .sum(),
            0,
        ),
        Shots::Finite(shots) => {
            let mut value = 0.0;
            for (g, group) in groups.iter().enumerate() {
                let counts = sample_bitstrings(&state, shots, derive_seed(seed, g as u64));
                for &idx in group {
                    let term = &h.terms()[idx];
                    value += term.coeff() * term_mean_from_counts(&counts, shots, term_mask(term));
                }
            }
            (value, shots * circuit_count as u64)
        }
    };
    let ansatz_circuit = ansatz.to_circuit();
    Ok(EstimateReport {
        method: Method::VqeGrouped,
        value,
        k: 1.0,
        shots_used,
        circuit_count,
        cost: cost_report(&ansatz_circuit, circuit_count, shots_used),
        bound: None,
        seed,
    })
}
