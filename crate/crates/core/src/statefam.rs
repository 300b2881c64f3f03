//! Parameterized state families, seeded random states and operators,
//! concurrence, and truncated Fock-space operators.
//!
//! Random draws use ChaCha20 (`rand_chacha` 0.9) seeded with
//! `seed_from_u64(seed)`; independent streams come from `set_stream`.
//! Complex normal entries have real and imaginary parts `N(0, 1)/√2`.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, Complex64, ComplexMatrix, ComplexVector, QuantumState, ZERO};

/// Larger eigenvalue of the one-qubit family, `cos²(π/8)`.
pub fn one_qubit_lambda1() -> f64 {
    FRAC_PI_8.cos().powi(2)
}

/// Smaller eigenvalue of the one-qubit family, `sin²(π/8)`.
pub fn one_qubit_lambda2() -> f64 {
    FRAC_PI_8.sin().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneQubitFamilyParams {
    pub theta: f64,
    pub phi: f64,
}

impl OneQubitFamilyParams {
    pub fn state(&self) -> QuantumState {
        one_qubit_family(self.theta, self.phi)
    }
}

/// `ρ = εΛε†` with `ε = ((cθ, −sθ e^{−iφ}), (sθ e^{iφ}, cθ))` and
/// `Λ = diag(cos²(π/8), sin²(π/8))`.
pub fn one_qubit_family(theta: f64, phi: f64) -> QuantumState {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let eps = ComplexMatrix::new(2, 2, vec![c64(c, 0.0), -s * e.conj(), s * e, c64(c, 0.0)])
        .expect("2x2 shape");
    let lam = ComplexMatrix::diagonal(&[one_qubit_lambda1(), one_qubit_lambda2()]);
    let rho = eps.mul_unchecked(&lam).mul_unchecked(&eps.adjoint());
    QuantumState::Density(rho.hermitian_part().expect("square"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitFamilyParams {
    pub vartheta: f64,
    pub eta: f64,
}

impl TwoQubitFamilyParams {
    pub fn state(&self) -> Result<QuantumState> {
        two_qubit_family(self.vartheta, self.eta)
    }
}

/// Rank-2 two-qubit state with spectrum `{cos²ϑ, sin²ϑ, 0, 0}` and
/// concurrence `η cos²ϑ`:
/// `ρ = cos²ϑ |Φ⟩⟨Φ| + sin²ϑ |01⟩⟨01|`, `|Φ⟩ = cos α|00⟩ + sin α|11⟩`,
/// `sin 2α = η`.
pub fn two_qubit_family(vartheta: f64, eta: f64) -> Result<QuantumState> {
    const EDGE: f64 = 1e-12;
    if !(-EDGE..=FRAC_PI_4 + EDGE).contains(&vartheta) {
        return Err(Error::Parameter(format!("vartheta {vartheta} outside [0, π/4]")));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Parameter(format!("eta {eta} outside [0, 1]")));
    }
    let (l1, l2) = (vartheta.cos().powi(2), vartheta.sin().powi(2));
    let alpha = eta.asin() / 2.0;
    let phi1 = ComplexVector::new(vec![c64(alpha.cos(), 0.0), ZERO, ZERO, c64(alpha.sin(), 0.0)])?;
    let rho = phi1
        .outer()
        .scale(c64(l1, 0.0))
        .add(&ComplexVector::basis(4, 1)?.outer().scale(c64(l2, 0.0)))?;
    Ok(QuantumState::Density(rho))
}

fn sigma_y_sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| match (i, j) {
        (0, 3) | (3, 0) => c64(-1.0, 0.0),
        (1, 2) | (2, 1) => c64(1.0, 0.0),
        _ => ZERO,
    })
}

/// Wootters concurrence of a two-qubit state.
///
/// Computed from an ensemble decomposition `ρ = WW†`: the `μ_i` are the
/// singular values of `Wᵀ(σ_y⊗σ_y)W`, which avoids square roots of the
/// near-zero eigenvalues that rank-deficient states produce.
pub fn concurrence(rho: &QuantumState) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::Dimension(format!("concurrence needs a 4-dimensional state, got {}", rho.dim())));
    }
    let (vals, vecs) = rho.to_density_matrix().eigh()?;
    let top = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let cut = 1e-14 * top.max(f64::MIN_POSITIVE);
    let kept: Vec<usize> = (0..4).filter(|&k| vals[k] > cut).collect();
    if kept.is_empty() {
        return Ok(0.0);
    }
    let w = ComplexMatrix::from_fn(4, kept.len(), |i, c| vecs.get(i, kept[c]) * vals[kept[c]].sqrt());
    let tau = w.transpose().mul_unchecked(&sigma_y_sigma_y()).mul_unchecked(&w);
    let gram = tau.adjoint().mul_unchecked(&tau);
    let mut mu: Vec<f64> = gram.eigvalsh()?.into_iter().map(|x| x.max(0.0).sqrt()).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1..].iter().sum::<f64>()).max(0.0))
}

/// ChaCha20 generator for `(seed, stream)`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn complex_normal_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Unnormalized complex normal vector.
pub fn random_vector_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexVector {
    assert!(dim > 0, "vector dimension must be positive");
    ComplexVector::new((0..dim).map(|_| complex_normal(rng)).collect()).expect("nonempty")
}

/// Unnormalized standard normal vector with zero imaginary parts.
pub fn random_real_vector_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexVector {
    assert!(dim > 0, "vector dimension must be positive");
    ComplexVector::new((0..dim).map(|_| c64(rng.sample(StandardNormal), 0.0)).collect()).expect("nonempty")
}

/// `(G + G†)/2` for complex normal `G`.
pub fn random_hermitian_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    complex_normal_matrix(rng, dim, dim).hermitian_part().expect("square")
}

/// Complex normal matrix with no symmetry.
pub fn random_operator_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    complex_normal_matrix(rng, dim, dim)
}

pub fn random_pure_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> QuantumState {
    let v = random_vector_with(rng, dim);
    QuantumState::Pure(v.normalized().expect("nonzero with probability one"))
}

/// `GG†/tr(GG†)` for a complex normal `dim × rank` matrix `G`.
pub fn random_density_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Result<QuantumState> {
    if rank == 0 || rank > dim {
        return Err(Error::Parameter(format!("rank {rank} outside 1..={dim}")));
    }
    let g = complex_normal_matrix(rng, dim, rank);
    let rho = g.mul_unchecked(&g.adjoint());
    let t = rho.trace()?.re;
    Ok(QuantumState::Density(rho.scale(c64(1.0 / t, 0.0)).hermitian_part()?))
}

pub fn random_vector(dim: usize, seed: u64) -> ComplexVector {
    random_vector_with(&mut seeded_rng(seed, 0), dim)
}

pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    random_hermitian_with(&mut seeded_rng(seed, 0), dim)
}

pub fn random_operator(dim: usize, seed: u64) -> ComplexMatrix {
    random_operator_with(&mut seeded_rng(seed, 0), dim)
}

pub fn random_pure(dim: usize, seed: u64) -> QuantumState {
    random_pure_with(&mut seeded_rng(seed, 0), dim)
}

pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<QuantumState> {
    random_density_with(&mut seeded_rng(seed, 0), dim, rank)
}

fn require_fock_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::Dimension(format!("Fock truncation needs dim ≥ 2, got {dim}")));
    }
    Ok(())
}

/// Truncated annihilation operator, `a|n⟩ = √n |n−1⟩`.
pub fn fock_ladder(dim: usize) -> Result<ComplexMatrix> {
    require_fock_dim(dim)?;
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            c64((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    }))
}

/// `x = √(ħ/2)(a + a†)`.
pub fn position_op(dim: usize, hbar: f64) -> Result<ComplexMatrix> {
    let a = fock_ladder(dim)?;
    Ok(a.add(&a.adjoint())?.scale(c64((hbar / 2.0).sqrt(), 0.0)))
}

/// `p = i√(ħ/2)(a† − a)`.
pub fn momentum_op(dim: usize, hbar: f64) -> Result<ComplexMatrix> {
    let a = fock_ladder(dim)?;
    Ok(a.adjoint().sub(&a)?.scale(c64(0.0, (hbar / 2.0).sqrt())))
}

/// Number state `|n⟩` in a `dim`-level truncation.
pub fn number_ket(dim: usize, n: usize) -> Result<ComplexVector> {
    require_fock_dim(dim)?;
    ComplexVector::basis(dim, n)
}

/// First `dim` Fock amplitudes `e^{−|α|²/2} αⁿ/√n!` of a coherent state,
/// without renormalization.
pub fn coherent_amplitudes(dim: usize, alpha: Complex64) -> Result<ComplexVector> {
    require_fock_dim(dim)?;
    let mut amps = Vec::with_capacity(dim);
    let mut c = c64((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            c = c * alpha / (n as f64).sqrt();
        }
        amps.push(c);
    }
    ComplexVector::new(amps)
}
