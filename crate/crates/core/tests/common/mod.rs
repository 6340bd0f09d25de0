//! Shared corpus helpers for the integration tests.

use eva_core::circuits::Ansatz;
use eva_core::hamiltonian::{random_ising, IsingHamiltonian};
use eva_core::rng::{derive_seed, rng_from_seed};
use eva_core::simulator::{Circuit, Gate, StateVector};
use num_complex::Complex64;
use rand::Rng;

/// Random instance that is guaranteed non-empty (resampling with derived
/// seeds until a term survives; deterministic).
pub fn non_empty_random_ising(n: usize, p: f64, degree: u8, seed: u64) -> IsingHamiltonian {
    for attempt in 0..1000 {
        let h = random_ising(n, p, degree, derive_seed(seed, attempt)).unwrap();
        if !h.is_empty() {
            return h;
        }
    }
    unreachable!("p is large enough that an instance appears quickly");
}

/// Test corpus instance i: register size cycling over `sizes`, degree
/// alternating 2/3, inclusion probability 0.5.
pub fn corpus_instance(i: usize, sizes: &[usize], master_seed: u64) -> (IsingHamiltonian, Ansatz) {
    let n = sizes[i % sizes.len()];
    let degree = 2 + (i % 2) as u8;
    let seed = derive_seed(master_seed, i as u64);
    let h = non_empty_random_ising(n, 0.5, degree, seed);
    let ansatz = Ansatz::random_single_axis(n, derive_seed(seed, 7001));
    (h, ansatz)
}

/// Uniformly random circuit over the full gate set.
pub fn random_circuit(n: usize, n_gates: usize, seed: u64) -> Circuit {
    let mut rng = rng_from_seed(seed);
    let mut circuit = Circuit::new(n);
    for _ in 0..n_gates {
        let theta = rng.gen_range(-3.0..3.0);
        let target = rng.gen_range(0..n);
        let kind = rng.gen_range(0..8);
        let gate = match kind {
            0 => Gate::H { target },
            1 => Gate::Rx { target, theta },
            2 => Gate::Rz { target, theta },
            3 | 4 | 5 | 6 if n >= 2 => {
                let mut control = rng.gen_range(0..n);
                while control == target {
                    control = rng.gen_range(0..n);
                }
                match kind {
                    3 => Gate::Cnot { control, target },
                    4 => Gate::ControlledH { control, target },
                    5 => Gate::ControlledRz {
                        control,
                        target,
                        theta,
                    },
                    _ => Gate::ControlledRx {
                        control,
                        target,
                        theta,
                    },
                }
            }
            7 if n >= 3 => {
                let mut control_a = rng.gen_range(0..n);
                while control_a == target {
                    control_a = rng.gen_range(0..n);
                }
                let mut control_b = rng.gen_range(0..n);
                while control_b == target || control_b == control_a {
                    control_b = rng.gen_range(0..n);
                }
                Gate::Toffoli {
                    control_a,
                    control_b,
                    target,
                }
            }
            _ => Gate::Rz { target, theta },
        };
        circuit.push(gate).unwrap();
    }
    circuit
}

/// Haar-ish random normalized state (Gaussian components, normalized).
pub fn random_state(n: usize, seed: u64) -> StateVector {
    let mut rng = rng_from_seed(seed);
    let mut amps: Vec<Complex64> = (0..(1usize << n))
        .map(|_| {
            // Box-Muller pairs
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen::<f64>();
            let r = (-2.0 * u1.ln()).sqrt();
            Complex64::new(
                r * (std::f64::consts::TAU * u2).cos(),
                r * (std::f64::consts::TAU * u2).sin(),
            )
        })
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).unwrap()
}
