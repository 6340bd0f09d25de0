//! Diagonal (Ising-type) Hamiltonians: weighted products of Pauli-Z
//! operators.
//!
//! Everything here is diagonal in the computational basis, so a Hamiltonian
//! is fully described by its action on bitstrings: bit 0 maps to the Z
//! eigenvalue +1 and bit 1 to −1 (little-endian, bit `q` of a basis index is
//! qubit `q`). Types are immutable after construction and safe to share
//! across threads.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Coefficients smaller than this (after merging duplicate supports) are
/// dropped so no zero-angle rotation gates are emitted downstream.
pub const COEFF_EPSILON: f64 = 1e-15;

/// Exact norm computation enumerates all 2^n basis states up to this qubit
/// count; beyond it the Σ|coeff| upper bound is reported instead.
pub const EXACT_NORM_MAX_QUBITS: usize = 20;

/// One weighted product of Pauli-Z operators, e.g. `0.5·Z0Z2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliZTerm {
    support: Vec<usize>,
    coeff: f64,
}

impl PauliZTerm {
    /// Build a term from qubit indices (any order, must be distinct, 1..=3
    /// of them) and a finite coefficient.
    pub fn new(support: impl Into<Vec<usize>>, coeff: f64) -> Result<Self> {
        let mut support = support.into();
        support.sort_unstable();
        if support.is_empty() || support.len() > 3 {
            return Err(Error::InvalidInput(format!(
                "term support must contain 1..=3 qubits, got {}",
                support.len()
            )));
        }
        if support.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!(
                "term support has a repeated qubit index: {support:?}"
            )));
        }
        if !coeff.is_finite() {
            return Err(Error::InvalidInput(format!(
                "term coefficient must be finite, got {coeff}"
            )));
        }
        Ok(Self { support, coeff })
    }

    /// Qubit indices, strictly increasing.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    /// Number of Z factors (1, 2 or 3).
    pub fn degree(&self) -> usize {
        self.support.len()
    }
}

/// A sum of [`PauliZTerm`]s over a fixed register size.
///
/// Construction canonicalizes: duplicate supports are merged by coefficient
/// addition, near-zero coefficients are dropped, and terms are sorted by
/// support. Two Hamiltonians built from the same terms in any order compare
/// equal.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingHamiltonian {
    n_qubits: usize,
    terms: Vec<PauliZTerm>,
    /// Bitmask per term, cached for fast diagonal evaluation.
    masks: Vec<u64>,
}

impl IsingHamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<PauliZTerm>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidInput(
                "hamiltonian needs at least one qubit".into(),
            ));
        }
        if n_qubits > 64 {
            return Err(Error::ResourceLimit(format!(
                "at most 64 qubits supported, got {n_qubits}"
            )));
        }
        let mut merged: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for term in terms {
            if let Some(&q) = term.support.iter().find(|&&q| q >= n_qubits) {
                return Err(Error::IndexOutOfRange(format!(
                    "term touches qubit {q} but the register has {n_qubits} qubits"
                )));
            }
            *merged.entry(term.support).or_insert(0.0) += term.coeff;
        }
        let mut out = Vec::with_capacity(merged.len());
        let mut masks = Vec::with_capacity(merged.len());
        for (support, coeff) in merged {
            if coeff.abs() < COEFF_EPSILON {
                continue;
            }
            masks.push(support.iter().fold(0u64, |m, &q| m | (1 << q)));
            out.push(PauliZTerm { support, coeff });
        }
        Ok(Self {
            n_qubits,
            terms: out,
            masks,
        })
    }

    /// Convenience constructor from `(qubits, coeff)` pairs.
    pub fn from_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, f64)>,
    ) -> Result<Self> {
        let terms = terms
            .into_iter()
            .map(|(q, c)| PauliZTerm::new(q, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_qubits, terms)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Terms in canonical (support-sorted) order.
    pub fn terms(&self) -> &[PauliZTerm] {
        &self.terms
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest term degree present (0 for an empty Hamiltonian).
    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(|t| t.degree()).max().unwrap_or(0)
    }

    /// Σ|coeff|, an upper bound on the norm for any term structure.
    pub fn coeff_l1(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// Diagonal entry for a basis state given as a bit vector
    /// (`bits[q]` is qubit `q`; false ↔ +1 eigenvalue, true ↔ −1).
    pub fn energy_of_bitstring(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.n_qubits {
            return Err(Error::ShapeMismatch(format!(
                "bit vector has length {}, hamiltonian has {} qubits",
                bits.len(),
                self.n_qubits
            )));
        }
        let index = bits
            .iter()
            .enumerate()
            .fold(0u64, |x, (q, &b)| x | ((b as u64) << q));
        Ok(self.energy_of_index(index))
    }

    /// Diagonal entry for a basis state given as a little-endian index.
    pub fn energy_of_index(&self, index: u64) -> f64 {
        self.terms
            .iter()
            .zip(&self.masks)
            .map(|(term, &mask)| {
                let parity = (index & mask).count_ones() & 1;
                term.coeff * (1.0 - 2.0 * parity as f64)
            })
            .sum()
    }

    /// `max_φ |⟨φ|H|φ⟩|`. For a diagonal operator this is the largest
    /// |diagonal entry|, found by enumeration up to
    /// [`EXACT_NORM_MAX_QUBITS`]; past that the Σ|coeff| upper bound is
    /// returned and flagged.
    pub fn norm(&self) -> HamiltonianNorm {
        if self.n_qubits > EXACT_NORM_MAX_QUBITS {
            return HamiltonianNorm {
                value: self.coeff_l1(),
                is_upper_bound: true,
            };
        }
        let mut max = 0.0f64;
        for index in 0..(1u64 << self.n_qubits) {
            max = max.max(self.energy_of_index(index).abs());
        }
        HamiltonianNorm {
            value: max,
            is_upper_bound: false,
        }
    }

    /// Rescale so the norm is at most 1; see [`NormalizedHamiltonian`].
    pub fn normalize(&self) -> Result<NormalizedHamiltonian> {
        if self.is_empty() {
            return Err(Error::InvalidInput(
                "cannot normalize a hamiltonian with no terms".into(),
            ));
        }
        let norm = self.norm();
        let scale = if norm.value > 1.0 { norm.value } else { 1.0 };
        let hamiltonian = if scale == 1.0 {
            self.clone()
        } else {
            let terms = self
                .terms
                .iter()
                .map(|t| PauliZTerm {
                    support: t.support.clone(),
                    coeff: t.coeff / scale,
                })
                .collect();
            IsingHamiltonian::new(self.n_qubits, terms)?
        };
        Ok(NormalizedHamiltonian { hamiltonian, scale })
    }
}

impl fmt::Display for IsingHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (n={})", self.n_qubits);
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·", term.coeff)?;
            for q in &term.support {
                write!(f, "Z{q}")?;
            }
        }
        Ok(())
    }
}

/// Result of [`IsingHamiltonian::norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianNorm {
    pub value: f64,
    /// True when the value is the Σ|coeff| bound rather than the exact
    /// maximum (registers too large to enumerate).
    pub is_upper_bound: bool,
}

/// A Hamiltonian together with the divisor that brought its norm to ≤ 1.
///
/// `scale` is 1 for Hamiltonians that were already normalized; multiplying
/// the stored coefficients by `scale` recovers the originals.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedHamiltonian {
    hamiltonian: IsingHamiltonian,
    scale: f64,
}

impl NormalizedHamiltonian {
    pub fn hamiltonian(&self) -> &IsingHamiltonian {
        &self.hamiltonian
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Draw a random Ising-type instance.
///
/// Every candidate support of size 1..=degree (all singletons, all pairs,
/// and all triples when `degree` is 3) is included independently with
/// probability `p`, with coefficient uniform on [−1, 1]. Deterministic for a
/// fixed seed. `p = 0` can yield an empty Hamiltonian.
pub fn random_ising(n: usize, p: f64, degree: u8, seed: u64) -> Result<IsingHamiltonian> {
    if !(2..=3).contains(&degree) {
        return Err(Error::InvalidInput(format!(
            "degree must be 2 or 3, got {degree}"
        )));
    }
    if n < degree as usize {
        return Err(Error::InvalidInput(format!(
            "need at least {degree} qubits for degree-{degree} instances, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "inclusion probability must lie in [0, 1], got {p}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut terms = Vec::new();
    let mut candidate = |support: Vec<usize>, rng: &mut rand_chacha::ChaCha8Rng| {
        if rng.gen::<f64>() < p {
            let coeff = rng.gen_range(-1.0..=1.0);
            terms.push(PauliZTerm {
                support,
                coeff,
            });
        }
    };
    for i in 0..n {
        candidate(vec![i], &mut rng);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            candidate(vec![i, j], &mut rng);
        }
    }
    if degree == 3 {
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    candidate(vec![i, j, k], &mut rng);
                }
            }
        }
    }
    IsingHamiltonian::new(n, terms)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HamiltonianDoc {
    n: usize,
    terms: Vec<TermDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    qubits: Vec<usize>,
    coeff: f64,
}

/// Parse the JSON schema
/// `{"n": <int>, "terms": [{"qubits": [<int>...], "coeff": <float>}, ...]}`.
///
/// Qubit lists must be strictly increasing and in range; two terms with the
/// same support are rejected (programmatic construction merges them, but in
/// a document a repeated support is almost certainly a mistake).
pub fn parse_hamiltonian(text: &str) -> Result<IsingHamiltonian> {
    let doc: HamiltonianDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("hamiltonian JSON: {e}")))?;
    let mut seen: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    let mut terms = Vec::with_capacity(doc.terms.len());
    for t in doc.terms {
        if t.qubits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!(
                "qubit list {:?} is not strictly increasing",
                t.qubits
            )));
        }
        if seen.insert(t.qubits.clone(), ()).is_some() {
            return Err(Error::Parse(format!(
                "duplicate term support {:?}",
                t.qubits
            )));
        }
        terms.push(PauliZTerm::new(t.qubits, t.coeff)?);
    }
    IsingHamiltonian::new(doc.n, terms)
}

/// Serialize to the schema accepted by [`parse_hamiltonian`], with floats at
/// 17 significant digits so the round trip is exact.
pub fn serialize_hamiltonian(h: &IsingHamiltonian) -> String {
    let mut out = String::with_capacity(32 + 64 * h.n_terms());
    out.push_str(&format!("{{\"n\":{},\"terms\":[", h.n_qubits));
    for (i, term) in h.terms.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let qubits = term
            .support
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!(
            "{{\"qubits\":[{}],\"coeff\":{:.16e}}}",
            qubits, term.coeff
        ));
    }
    out.push_str("]}");
    out
}
