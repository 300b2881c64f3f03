//! Seeded inputs shared by the criterion benchmarks in `benches/`.

use mucs::statefam::{random_density, random_hermitian, random_operator, random_pure, random_vector};
use mucs::{ComplexMatrix, ComplexVector, Mode, QuantumState};

/// `m` random complex vectors of dimension `dim`.
pub fn vectors(m: usize, dim: usize, seed: u64) -> Vec<ComplexVector> {
    (0..m as u64).map(|j| random_vector(dim, seed.wrapping_mul(31).wrapping_add(j))).collect()
}

/// `m` random operators, Hermitian or arbitrary per `mode`.
pub fn operators(m: usize, dim: usize, mode: Mode, seed: u64) -> Vec<ComplexMatrix> {
    (0..m as u64)
        .map(|j| {
            let s = seed.wrapping_mul(31).wrapping_add(j);
            match mode {
                Mode::Hermitian => random_hermitian(dim, s),
                Mode::General => random_operator(dim, s),
            }
        })
        .collect()
}

/// A random pure state, or a full-rank density matrix when `mixed`.
pub fn state(dim: usize, mixed: bool, seed: u64) -> QuantumState {
    if mixed {
        random_density(dim, dim, seed).expect("rank within dimension")
    } else {
        random_pure(dim, seed)
    }
}
