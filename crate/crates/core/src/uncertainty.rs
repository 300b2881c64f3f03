//! Covariances, generalized covariances and the balanced/unbalanced
//! multi-operator uncertainty relations.
//!
//! Hermitian mode works with `σ²_{A,B} = ⟨AB⟩ − ⟨A⟩⟨B⟩` on normalized states.
//! General mode accepts any square operators and any positive semidefinite
//! state, normalized or not, through
//! `σ̃²_{A,B} = ⟨A†B⟩ − (2 − tr ρ)⟨A†⟩⟨B⟩`.

use serde::{Deserialize, Serialize};

use crate::cs_ineq::{OverlapTable, PairSet};
use crate::error::{Error, Result};
use crate::linalg::{scale_of, Complex64, ComplexMatrix, QuantumState, HERMITICITY_TOL};
use crate::report::{InequalityReport, RelationId};

/// Relative tolerance below zero tolerated in a variance before it is
/// treated as a positivity failure.
pub const VARIANCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Hermitian,
    General,
}

impl Mode {
    pub fn balanced_id(self) -> RelationId {
        match self {
            Mode::Hermitian => RelationId::BalancedHermitian,
            Mode::General => RelationId::BalancedGeneral,
        }
    }

    pub fn unbalanced_id(self) -> RelationId {
        match self {
            Mode::Hermitian => RelationId::UnbalancedHermitian,
            Mode::General => RelationId::UnbalancedGeneral,
        }
    }
}

/// Real/imaginary split of a (generalized) covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceDecomposition {
    /// Anticommutator term.
    pub symmetric_part: f64,
    /// Commutator term.
    pub antisymmetric_part: f64,
    /// `√(symmetric² + antisymmetric²)`.
    pub modulus: f64,
    pub raw: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedMoments {
    /// `σ̃²_{A,B}`.
    pub gen_covariance: Complex64,
    /// `σ̃²_A`.
    pub gen_variance: f64,
    /// `σ̃_A`.
    pub gen_std: f64,
    /// `2 − tr ρ`.
    pub trace_factor: f64,
}

fn require_hermitian(op: &ComplexMatrix) -> Result<()> {
    let defect = op.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::Hermiticity(format!("operator defect {defect:e}")));
    }
    Ok(())
}

fn require_normalized(state: &QuantumState) -> Result<()> {
    if !state.is_normalized(HERMITICITY_TOL) {
        return Err(Error::Normalization(format!(
            "trace {} differs from 1; use the generalized covariance",
            state.trace()
        )));
    }
    Ok(())
}

fn clamp_variance(value: f64, scale: f64) -> Result<f64> {
    if value < -VARIANCE_TOL * scale {
        return Err(Error::Positivity(format!("variance {value:e} below zero")));
    }
    Ok(value.max(0.0))
}

/// `⟨AB⟩ − ⟨A⟩⟨B⟩` for Hermitian `A`, `B` on a normalized state.
pub fn covariance(state: &QuantumState, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    require_normalized(state)?;
    require_hermitian(a)?;
    require_hermitian(b)?;
    let ma = state.real_expectation(a)?;
    let mb = state.real_expectation(b)?;
    Ok(state.expectation(&a.matmul(b)?)? - ma * mb)
}

/// `⟨A²⟩ − ⟨A⟩²`, clamped at zero.
pub fn variance(state: &QuantumState, a: &ComplexMatrix) -> Result<f64> {
    require_normalized(state)?;
    require_hermitian(a)?;
    let m = state.real_expectation(a)?;
    let (sq, mag) = state.expectation_scaled(&a.matmul(a)?)?;
    clamp_variance(sq.re - m * m, scale_of(&[mag, m * m]))
}

pub fn std_dev(state: &QuantumState, a: &ComplexMatrix) -> Result<f64> {
    Ok(variance(state, a)?.sqrt())
}

/// Generalized covariance `σ̃²_{A,B}` together with `σ̃²_A`.
pub fn gen_covariance(state: &QuantumState, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<GeneralizedMoments> {
    let f = 2.0 - state.trace();
    let ma = state.expectation(a)?;
    let mb = state.expectation(b)?;
    let ad = a.adjoint();
    let cov = state.expectation(&ad.matmul(b)?)? - f * ma.conj() * mb;
    let (aa, mag) = state.expectation_scaled(&ad.matmul(a)?)?;
    let sub = f * ma.norm_sqr();
    let var = clamp_variance(aa.re - sub, scale_of(&[mag, sub]))?;
    Ok(GeneralizedMoments { gen_covariance: cov, gen_variance: var, gen_std: var.sqrt(), trace_factor: f })
}

/// `σ̃²_{A,B}` alone.
pub fn gen_cov(state: &QuantumState, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    Ok(gen_covariance(state, a, b)?.gen_covariance)
}

/// `σ̃²_A = ⟨A†A⟩ − (2 − tr ρ)|⟨A⟩|²`.
pub fn gen_variance(state: &QuantumState, a: &ComplexMatrix) -> Result<f64> {
    Ok(gen_covariance(state, a, a)?.gen_variance)
}

fn require_same_square(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// `A†B − B†A`.
pub fn pseudo_commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_same_square(a, b)?;
    a.adjoint().matmul(b)?.sub(&b.adjoint().matmul(a)?)
}

/// `A†B + B†A`.
pub fn pseudo_anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_same_square(a, b)?;
    a.adjoint().matmul(b)?.add(&b.adjoint().matmul(a)?)
}

/// Splits a covariance into its anticommutator and commutator terms.
///
/// Hermitian form: `⟨{A,B}⟩/2 − ⟨A⟩⟨B⟩` and `⟨[A,B]⟩/(2i)`. Generalized form:
/// the pseudo-brackets with `(2 − tr ρ)`-weighted real and imaginary parts of
/// `⟨A†⟩⟨B⟩` subtracted.
pub fn covariance_decomposition(
    state: &QuantumState,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    generalized: bool,
) -> Result<CovarianceDecomposition> {
    let (symmetric_part, antisymmetric_part, raw) = if generalized {
        let f = 2.0 - state.trace();
        let cross = state.expectation(a)?.conj() * state.expectation(b)?;
        let anti = state.expectation(&pseudo_anticommutator(a, b)?)?;
        let comm = state.expectation(&pseudo_commutator(a, b)?)? / Complex64::new(0.0, 2.0);
        (anti.re / 2.0 - f * cross.re, comm.re - f * cross.im, gen_cov(state, a, b)?)
    } else {
        let raw = covariance(state, a, b)?;
        let ma = state.real_expectation(a)?;
        let mb = state.real_expectation(b)?;
        let ab = a.matmul(b)?;
        let ba = b.matmul(a)?;
        let anti = state.expectation(&ab.add(&ba)?)?;
        let comm = state.expectation(&ab.sub(&ba)?)? / Complex64::new(0.0, 2.0);
        (anti.re / 2.0 - ma * mb, comm.re, raw)
    };
    Ok(CovarianceDecomposition {
        symmetric_part,
        antisymmetric_part,
        modulus: symmetric_part.hypot(antisymmetric_part),
        raw,
    })
}

/// The covariance modulus evaluated three ways: `|σ²_{A,B}|`,
/// `√(σ²_{B,A}·σ²_{A,B})`, and the radical of the real/imaginary split.
pub fn covariance_modulus_forms(
    state: &QuantumState,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    mode: Mode,
) -> Result<[f64; 3]> {
    let (ab, ba) = match mode {
        Mode::Hermitian => (covariance(state, a, b)?, covariance(state, b, a)?),
        Mode::General => (gen_cov(state, a, b)?, gen_cov(state, b, a)?),
    };
    let split = covariance_decomposition(state, a, b, mode == Mode::General)?;
    Ok([ab.norm(), (ba * ab).re.max(0.0).sqrt(), split.modulus])
}

/// Validates `ops` for a relation in `mode`; Hermitian mode returns the
/// exactly Hermitian parts.
fn prepare_ops(state: &QuantumState, ops: &[ComplexMatrix], mode: Mode, min_len: usize) -> Result<Vec<ComplexMatrix>> {
    if ops.len() < min_len {
        return Err(Error::Arity(format!("need at least {min_len} operators, got {}", ops.len())));
    }
    for op in ops {
        state.check_operator(op)?;
    }
    match mode {
        Mode::General => Ok(ops.to_vec()),
        Mode::Hermitian => {
            if !state.is_normalized(HERMITICITY_TOL) {
                return Err(Error::Mode(format!(
                    "Hermitian mode needs a normalized state, trace is {}",
                    state.trace()
                )));
            }
            ops.iter()
                .enumerate()
                .map(|(j, op)| {
                    let defect = op.hermiticity_defect();
                    if defect > HERMITICITY_TOL {
                        return Err(Error::Mode(format!(
                            "operator {} is not Hermitian (defect {defect:e}); use general mode",
                            j + 1
                        )));
                    }
                    op.hermitian_part()
                })
                .collect()
        }
    }
}

/// Standard deviations and pairwise covariance moduli for `ops`.
///
/// Entries come from the Gram matrix `G_jk = tr(ρ ΔA_j† ΔA_k)`, which equals
/// `σ²_{A_j,A_k}` (Hermitian, normalized) and `σ̃²_{A_j,A_k}` (general).
pub fn covariance_table(state: &QuantumState, ops: &[ComplexMatrix], mode: Mode) -> Result<OverlapTable> {
    let ops = prepare_ops(state, ops, mode, 2)?;
    covariance_table_prepared(state, &ops, mode)
}

pub(crate) fn covariance_table_prepared(state: &QuantumState, ops: &[ComplexMatrix], mode: Mode) -> Result<OverlapTable> {
    let m = ops.len();
    let deviations = ops
        .iter()
        .map(|op| {
            let mean = match mode {
                Mode::Hermitian => state.real_expectation(op)?.into(),
                Mode::General => state.expectation(op)?,
            };
            op.shift_diagonal(-mean)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut norms = Vec::with_capacity(m);
    let mut moduli = vec![0.0; m * m];
    for j in 0..m {
        let d = &deviations[j];
        let g = state.sesquilinear_unchecked(d, d).re;
        let mag = d.max_abs().powi(2) * state.trace();
        norms.push(clamp_variance(g, scale_of(&[mag]))?.sqrt());
        for k in j + 1..m {
            let z = state.sesquilinear_unchecked(d, &deviations[k]).norm();
            moduli[j * m + k] = z;
            moduli[k * m + j] = z;
        }
    }
    OverlapTable::new(norms, moduli)
}

/// `Π_j σ_{A_j} ≥ (Π_{j<k} |σ²_{A_j,A_k}|)^{1/(M−1)}` (tilde quantities in
/// general mode).
pub fn balanced_relation(state: &QuantumState, ops: &[ComplexMatrix], mode: Mode, tol: f64) -> Result<InequalityReport> {
    Ok(covariance_table(state, ops, mode)?.balanced(mode.balanced_id(), tol))
}

/// `Π_q σ_{A_{j_q}} σ_{A_{k_q}} ≥ Π_q |σ²_{A_{j_q},A_{k_q}}|`.
pub fn unbalanced_relation(
    state: &QuantumState,
    ops: &[ComplexMatrix],
    pairs: &PairSet,
    mode: Mode,
    tol: f64,
) -> Result<InequalityReport> {
    covariance_table(state, ops, mode)?.unbalanced(mode.unbalanced_id(), pairs, tol)
}

/// The uncertainty product `Π_j σ_{A_j}` itself; identical to the left side
/// of [`balanced_relation`].
pub fn tightest_product(state: &QuantumState, ops: &[ComplexMatrix], mode: Mode) -> Result<f64> {
    Ok(covariance_table(state, ops, mode)?.norm_product())
}

/// The monomial `Π_q σ_{A_{j_q}} σ_{A_{k_q}}` of an unbalanced relation; it
/// bounds that relation's right side.
pub fn tightest_pair_product(state: &QuantumState, ops: &[ComplexMatrix], pairs: &PairSet, mode: Mode) -> Result<f64> {
    covariance_table(state, ops, mode)?.pair_norm_product(pairs)
}
