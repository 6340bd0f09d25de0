//! Dense-matrix reference implementations.
//!
//! Everything here recomputes quantities through a second, deliberately
//! separate route so tests can cross-check the fast paths:
//!
//! - [`dense_oracle_unitary`] materializes a circuit's full 2^n × 2^n
//!   unitary by embedding each gate as a tensor-product matrix and
//!   multiplying them out, never touching the statevector kernels in
//!   [`crate::simulator`].
//! - [`dense_hamiltonian_matrix`] builds Σ coeff · (⊗ Z/I) by Kronecker
//!   products, never touching
//!   [`energy_of_index`](crate::hamiltonian::IsingHamiltonian::energy_of_index).
//! - [`diagonal_exponential`] exponentiates a verified-diagonal matrix.
//!
//! Exponential memory; capped at [`ORACLE_MAX_QUBITS`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::IsingHamiltonian;
use crate::simulator::{Circuit, Gate};

/// Hard cap for dense-matrix construction (2^10 × 2^10 complex entries).
pub const ORACLE_MAX_QUBITS: usize = 10;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o += r;
        }
        out
    }

    pub fn scaled(&self, factor: Complex64) -> DenseMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= factor;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> DenseMatrix {
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Kronecker product; `rhs` occupies the low index bits.
    pub fn kron(&self, rhs: &DenseMatrix) -> DenseMatrix {
        let d = self.dim * rhs.dim;
        let mut out = DenseMatrix::zeros(d);
        for i1 in 0..self.dim {
            for j1 in 0..self.dim {
                let a = self.get(i1, j1);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for i2 in 0..rhs.dim {
                    for j2 in 0..rhs.dim {
                        out.set(
                            i1 * rhs.dim + i2,
                            j1 * rhs.dim + j2,
                            a * rhs.get(i2, j2),
                        );
                    }
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.dim {
                acc += self.data[i * self.dim + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Largest entrywise |difference|.
    pub fn max_abs_diff(&self, rhs: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |off-diagonal entry|.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    max = max.max(self.get(i, j).norm());
                }
            }
        }
        max
    }
}

// The oracle defines the base 2×2 matrices itself so the two verification
// routes share nothing but the published gate definitions.
fn base_h() -> DenseMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DenseMatrix::zeros(2);
    m.set(0, 0, Complex64::new(s, 0.0));
    m.set(0, 1, Complex64::new(s, 0.0));
    m.set(1, 0, Complex64::new(s, 0.0));
    m.set(1, 1, Complex64::new(-s, 0.0));
    m
}

fn base_rz(theta: f64) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(2);
    m.set(0, 0, Complex64::from_polar(1.0, -theta / 2.0));
    m.set(1, 1, Complex64::from_polar(1.0, theta / 2.0));
    m
}

fn base_rx(theta: f64) -> DenseMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let mut m = DenseMatrix::zeros(2);
    m.set(0, 0, Complex64::new(c, 0.0));
    m.set(0, 1, Complex64::new(0.0, -s));
    m.set(1, 0, Complex64::new(0.0, -s));
    m.set(1, 1, Complex64::new(c, 0.0));
    m
}

fn base_x() -> DenseMatrix {
    let mut m = DenseMatrix::zeros(2);
    m.set(0, 1, Complex64::new(1.0, 0.0));
    m.set(1, 0, Complex64::new(1.0, 0.0));
    m
}

fn base_z() -> DenseMatrix {
    let mut m = DenseMatrix::zeros(2);
    m.set(0, 0, Complex64::new(1.0, 0.0));
    m.set(1, 1, Complex64::new(-1.0, 0.0));
    m
}

fn base_projector(outcome: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(2);
    m.set(outcome, outcome, Complex64::new(1.0, 0.0));
    m
}

/// Embed a 2×2 operator on one qubit of an n-qubit register:
/// I^{⊗(n−1−q)} ⊗ M ⊗ I^{⊗q} (little-endian, qubit 0 in the low bits).
fn embed_single(m: &DenseMatrix, qubit: usize, n_qubits: usize) -> DenseMatrix {
    let mut acc = DenseMatrix::identity(1);
    for q in (0..n_qubits).rev() {
        if q == qubit {
            acc = acc.kron(m);
        } else {
            acc = acc.kron(&DenseMatrix::identity(2));
        }
    }
    acc
}

/// Promote an embedded operator by one control qubit:
/// P0_c ⊗ I + P1_c ⊗ U.
fn with_control(embedded: &DenseMatrix, control: usize, n_qubits: usize) -> DenseMatrix {
    let p0 = embed_single(&base_projector(0), control, n_qubits);
    let p1 = embed_single(&base_projector(1), control, n_qubits);
    p0.add(&p1.mul(embedded))
}

fn embedded_gate_matrix(gate: &Gate, n_qubits: usize) -> DenseMatrix {
    match *gate {
        Gate::H { target } => embed_single(&base_h(), target, n_qubits),
        Gate::Rx { target, theta } => embed_single(&base_rx(theta), target, n_qubits),
        Gate::Rz { target, theta } => embed_single(&base_rz(theta), target, n_qubits),
        Gate::Cnot { control, target } => {
            with_control(&embed_single(&base_x(), target, n_qubits), control, n_qubits)
        }
        Gate::ControlledH { control, target } => {
            with_control(&embed_single(&base_h(), target, n_qubits), control, n_qubits)
        }
        Gate::ControlledRz {
            control,
            target,
            theta,
        } => with_control(
            &embed_single(&base_rz(theta), target, n_qubits),
            control,
            n_qubits,
        ),
        Gate::ControlledRx {
            control,
            target,
            theta,
        } => with_control(
            &embed_single(&base_rx(theta), target, n_qubits),
            control,
            n_qubits,
        ),
        Gate::Toffoli {
            control_a,
            control_b,
            target,
        } => {
            let inner = with_control(
                &embed_single(&base_x(), target, n_qubits),
                control_b,
                n_qubits,
            );
            with_control(&inner, control_a, n_qubits)
        }
    }
}

/// Full 2^n × 2^n unitary of a circuit, built gate by gate.
pub fn dense_oracle_unitary(circuit: &Circuit) -> Result<DenseMatrix> {
    let n = circuit.n_qubits();
    if n > ORACLE_MAX_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "dense oracle supports at most {ORACLE_MAX_QUBITS} qubits, got {n}"
        )));
    }
    let mut unitary = DenseMatrix::identity(1 << n);
    for gate in circuit.gates() {
        unitary = embedded_gate_matrix(gate, n).mul(&unitary);
    }
    Ok(unitary)
}

/// Dense matrix of an Ising Hamiltonian: Σ coeff · (⊗_q Z or I).
pub fn dense_hamiltonian_matrix(h: &IsingHamiltonian) -> Result<DenseMatrix> {
    let n = h.n_qubits();
    if n > ORACLE_MAX_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "dense oracle supports at most {ORACLE_MAX_QUBITS} qubits, got {n}"
        )));
    }
    let mut acc = DenseMatrix::zeros(1 << n);
    for term in h.terms() {
        let mut factor = DenseMatrix::identity(1);
        for q in (0..n).rev() {
            if term.support().contains(&q) {
                factor = factor.kron(&base_z());
            } else {
                factor = factor.kron(&DenseMatrix::identity(2));
            }
        }
        acc = acc.add(&factor.scaled(Complex64::new(term.coeff(), 0.0)));
    }
    Ok(acc)
}

/// exp(i·t·M) for a diagonal matrix M (off-diagonal entries must vanish).
pub fn diagonal_exponential(m: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    let off = m.max_off_diagonal();
    if off > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "matrix is not diagonal (max off-diagonal {off:e})"
        )));
    }
    let mut out = DenseMatrix::zeros(m.dim());
    for i in 0..m.dim() {
        let d = m.get(i, i);
        if d.im.abs() > 1e-12 {
            return Err(Error::InvalidInput(
                "diagonal entries must be real".into(),
            ));
        }
        out.set(i, i, Complex64::from_polar(1.0, t * d.re));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::IsingHamiltonian;

    #[test]
    fn empty_circuit_is_identity() {
        let u = dense_oracle_unitary(&Circuit::new(2)).unwrap();
        assert_eq!(u.max_abs_diff(&DenseMatrix::identity(4)), 0.0);
    }

    #[test]
    fn single_hadamard_matches_base_matrix() {
        let mut circuit = Circuit::new(1);
        circuit.h(0).unwrap();
        let u = dense_oracle_unitary(&circuit).unwrap();
        assert!(u.max_abs_diff(&base_h()) < 1e-15);
    }

    #[test]
    fn oracle_rejects_large_registers() {
        let circuit = Circuit::new(11);
        assert!(matches!(
            dense_oracle_unitary(&circuit),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn hamiltonian_matrix_is_diagonal_with_bitstring_energies() {
        let h =
            IsingHamiltonian::from_terms(3, [(vec![0, 1], 0.5), (vec![0], 0.25), (vec![2], -0.7)])
                .unwrap();
        let m = dense_hamiltonian_matrix(&h).unwrap();
        assert!(m.max_off_diagonal() < 1e-15);
        for index in 0..8u64 {
            let want = h.energy_of_index(index);
            let got = m.get(index as usize, index as usize);
            assert!((got.re - want).abs() < 1e-12);
            assert!(got.im.abs() < 1e-15);
        }
    }

    #[test]
    fn norm_matches_largest_eigenvalue_of_dense_matrix() {
        // diagonal matrix, so the eigenvalues are the diagonal entries
        for seed in 0..20u64 {
            for n in 2..=8usize {
                let h = match crate::hamiltonian::random_ising(n, 0.6, 3, seed) {
                    Ok(h) if !h.is_empty() => h,
                    _ => continue,
                };
                let m = dense_hamiltonian_matrix(&h).unwrap();
                assert!(m.max_off_diagonal() < 1e-15);
                let eig_max = (0..m.dim())
                    .map(|i| m.get(i, i).norm())
                    .fold(0.0, f64::max);
                assert!((h.norm().value - eig_max).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_exponential_rejects_off_diagonal() {
        let mut circuit = Circuit::new(1);
        circuit.h(0).unwrap();
        let u = dense_oracle_unitary(&circuit).unwrap();
        assert!(diagonal_exponential(&u, 1.0).is_err());
    }
}
