//! Ordered multivariance `⟨ΔA_1⋯ΔA_M⟩`, deviation-product states, the
//! partitioned multivariance relations and the symmetric multivariance.
//!
//! Means are `⟨A⟩ = tr(ρA)` without dividing by the trace, so unnormalized
//! kets behave like raw vectors. Mixed states use the positive semidefinite
//! form `tr(ρ X†Y)` wherever a pure state would use `⟨Xψ|Yψ⟩`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{scale_of, Complex64, ComplexMatrix, ComplexVector, QuantumState, StateKind, HERMITICITY_TOL};
use crate::report::{InequalityReport, RelationId};

/// Default cap on `M` for sums over all `M!` orderings.
pub const M_MAX: usize = 8;

/// Relative tolerance for a negative radicand before it is an error.
const RADICAND_TOL: f64 = 1e-10;

/// Ordered list of Hermitian operators of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSequence {
    ops: Vec<ComplexMatrix>,
    labels: Option<Vec<String>>,
}

impl OperatorSequence {
    /// Validates and stores the exactly Hermitian part of each operator.
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = ops.first() else {
            return Err(Error::Arity("operator sequence is empty".into()));
        };
        let dim = first.rows();
        let mut out = Vec::with_capacity(ops.len());
        for (j, op) in ops.iter().enumerate() {
            if !op.is_square() || op.rows() != dim {
                return Err(Error::Dimension(format!(
                    "operator {} is {}x{}, expected {dim}x{dim}",
                    j + 1,
                    op.rows(),
                    op.cols()
                )));
            }
            let defect = op.hermiticity_defect();
            if defect > HERMITICITY_TOL {
                return Err(Error::Hermiticity(format!("operator {} defect {defect:e}", j + 1)));
            }
            out.push(op.hermitian_part()?);
        }
        Ok(Self { ops: out, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.ops.len() {
            return Err(Error::Arity(format!("{} labels for {} operators", labels.len(), self.ops.len())));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].rows()
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Reordered copy: position `i` holds operator `order[i]` (0-based).
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len() || order.iter().any(|&i| i >= self.len() || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::Index(format!("{order:?} is not a permutation of 0..{}", self.len())));
        }
        Ok(Self {
            ops: order.iter().map(|&i| self.ops[i].clone()).collect(),
            labels: self.labels.as_ref().map(|l| order.iter().map(|&i| l[i].clone()).collect()),
        })
    }

    pub fn reversed(&self) -> Self {
        let order: Vec<usize> = (0..self.len()).rev().collect();
        self.permuted(&order).expect("reversal is a permutation")
    }

    fn deviations(&self, state: &QuantumState) -> Result<Vec<ComplexMatrix>> {
        if state.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "operators of dimension {} on state of dimension {}",
                self.dim(),
                state.dim()
            )));
        }
        self.ops
            .iter()
            .map(|op| op.shift_diagonal((-state.real_expectation(op)?).into()))
            .collect()
    }
}

/// `⟨X_1 X_2 ⋯ X_k⟩`; the identity expectation `tr ρ` when `factors` is empty.
fn ordered_expectation(state: &QuantumState, factors: &[&ComplexMatrix]) -> Complex64 {
    match state {
        QuantumState::Pure(psi) => {
            let v = factors.iter().rev().fold(psi.clone(), |v, x| x.mul_vec_unchecked(&v));
            psi.entries().iter().zip(v.entries()).map(|(a, b)| a.conj() * b).sum()
        }
        QuantumState::Density(rho) => match factors.split_first() {
            None => rho.trace().expect("square"),
            Some((first, rest)) => {
                let product = rest.iter().fold((*first).clone(), |acc, x| acc.mul_unchecked(x));
                state.sesquilinear_unchecked(&ComplexMatrix::identity(rho.rows()), &product)
            }
        },
    }
}

/// `σ^M = ⟨ΔA_1 ΔA_2 ⋯ ΔA_M⟩`, with `ΔA_M` acting on the ket first.
pub fn multivariance(state: &QuantumState, seq: &OperatorSequence) -> Result<Complex64> {
    let d = seq.deviations(state)?;
    Ok(ordered_expectation(state, &d.iter().collect::<Vec<_>>()))
}

/// Multivariance of the operators at 1-based `indices` (repeats allowed).
/// An empty list gives `tr ρ`.
pub fn multivariance_of_indices(state: &QuantumState, seq: &OperatorSequence, indices: &[usize]) -> Result<Complex64> {
    let d = seq.deviations(state)?;
    let factors = pick(&d, indices)?;
    Ok(ordered_expectation(state, &factors))
}

fn pick<'a>(d: &'a [ComplexMatrix], indices: &[usize]) -> Result<Vec<&'a ComplexMatrix>> {
    indices
        .iter()
        .map(|&j| {
            if j == 0 || j > d.len() {
                return Err(Error::Index(format!("operator index {j} outside 1..={}", d.len())));
            }
            Ok(&d[j - 1])
        })
        .collect()
}

/// `|ψ_{j_1,…,j_q}⟩ = ΔA_{j_1}⋯ΔA_{j_q}|ψ⟩` for 1-based indices.
pub fn deviation_product_state(state: &QuantumState, seq: &OperatorSequence, indices: &[usize]) -> Result<ComplexVector> {
    let Some(psi) = state.as_ket() else {
        return Err(Error::Purity("deviation-product states need a pure ket".into()));
    };
    let d = seq.deviations(state)?;
    let factors = pick(&d, indices)?;
    Ok(factors.iter().rev().fold(psi.clone(), |v, x| x.mul_vec_unchecked(&v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionedRelationReport {
    pub p: usize,
    /// `√σ^{2p}_{A_1,…,A_p,A_p,…,A_1}`.
    pub lhs_left: f64,
    /// `√σ^{2(M−p)}_{A_M,…,A_{p+1},A_{p+1},…,A_M}`.
    pub lhs_right: f64,
    pub lhs: f64,
    /// `|σ^M|`.
    pub rhs: f64,
    pub slack: f64,
    pub scale: f64,
    pub satisfied: bool,
    pub state_kind: StateKind,
}

impl PartitionedRelationReport {
    pub fn to_report(&self, tol: f64) -> InequalityReport {
        InequalityReport::evaluate(RelationId::PartitionedMultivariance, self.lhs, self.rhs, tol)
    }
}

fn sqrt_radicand(value: Complex64, what: &str) -> Result<f64> {
    let scale = scale_of(&[value.norm()]);
    if value.re < -RADICAND_TOL * scale {
        return Err(Error::Positivity(format!("{what} radicand {:e} is negative", value.re)));
    }
    Ok(value.re.max(0.0).sqrt())
}

/// `√σ^{2p}·√σ^{2(M−p)} ≥ |σ^M|` from the palindromic multivariances.
pub fn partitioned_relation(state: &QuantumState, seq: &OperatorSequence, p: usize, tol: f64) -> Result<PartitionedRelationReport> {
    let m = seq.len();
    if p > m {
        return Err(Error::Arity(format!("partition point {p} outside 0..={m}")));
    }
    let d = seq.deviations(state)?;
    let all: Vec<usize> = (1..=m).collect();
    let rhs = ordered_expectation(state, &pick(&d, &all)?).norm();
    partitioned_from_deviations(state, &d, p, rhs, tol)
}

fn partitioned_from_deviations(
    state: &QuantumState,
    d: &[ComplexMatrix],
    p: usize,
    rhs: f64,
    tol: f64,
) -> Result<PartitionedRelationReport> {
    let m = d.len();
    let left: Vec<usize> = (1..=p).chain((1..=p).rev()).collect();
    let right: Vec<usize> = (p + 1..=m).rev().chain(p + 1..=m).collect();
    let lhs_left = sqrt_radicand(ordered_expectation(state, &pick(d, &left)?), "left")?;
    let lhs_right = sqrt_radicand(ordered_expectation(state, &pick(d, &right)?), "right")?;
    let lhs = lhs_left * lhs_right;
    let r = InequalityReport::evaluate(RelationId::PartitionedMultivariance, lhs, rhs, tol);
    Ok(PartitionedRelationReport {
        p,
        lhs_left,
        lhs_right,
        lhs,
        rhs,
        slack: r.slack,
        scale: r.scale,
        satisfied: r.satisfied,
        state_kind: state.kind(),
    })
}

/// Reports for `p = 0, …, M` in order.
pub fn all_partitioned_relations(state: &QuantumState, seq: &OperatorSequence, tol: f64) -> Result<Vec<PartitionedRelationReport>> {
    let d = seq.deviations(state)?;
    let all: Vec<usize> = (1..=seq.len()).collect();
    let rhs = ordered_expectation(state, &pick(&d, &all)?).norm();
    (0..=seq.len()).map(|p| partitioned_from_deviations(state, &d, p, rhs, tol)).collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_limit(m: usize, max_m: usize) -> Result<()> {
    if m > max_m {
        return Err(Error::Arity(format!("{m} operators exceed the permutation limit {max_m}")));
    }
    Ok(())
}

/// `σ̂^M = (1/M!) Σ_q σ^M_{P_q(A_1,…,A_M)}` over all orderings, enumerated
/// lexicographically.
pub fn symmetric_multivariance(state: &QuantumState, seq: &OperatorSequence) -> Result<Complex64> {
    symmetric_multivariance_with_limit(state, seq, M_MAX)
}

pub fn symmetric_multivariance_with_limit(state: &QuantumState, seq: &OperatorSequence, max_m: usize) -> Result<Complex64> {
    let m = seq.len();
    check_limit(m, max_m)?;
    let d = seq.deviations(state)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for perm in (0..m).permutations(m) {
        let factors: Vec<&ComplexMatrix> = perm.iter().map(|&i| &d[i]).collect();
        sum += ordered_expectation(state, &factors);
    }
    Ok(sum / factorial(m))
}

/// `(1/M!) Σ_q |σ^M_{P_q}|`, the intermediate term of the triangle bound on
/// `|σ̂^M|`.
pub fn mean_abs_multivariance(state: &QuantumState, seq: &OperatorSequence) -> Result<f64> {
    let m = seq.len();
    check_limit(m, M_MAX)?;
    let d = seq.deviations(state)?;
    let total: f64 = (0..m)
        .permutations(m)
        .map(|perm| {
            let factors: Vec<&ComplexMatrix> = perm.iter().map(|&i| &d[i]).collect();
            ordered_expectation(state, &factors).norm()
        })
        .sum();
    Ok(total / factorial(m))
}

/// Symmetric multivariance relation: the average over all orderings and all
/// partition points of the partitioned left sides bounds `|σ̂^M|`.
///
/// The left factors are evaluated as norms `tr(ρ X†X)` of the partial
/// deviation products rather than through palindromic multivariances.
pub fn symmetric_relation(state: &QuantumState, seq: &OperatorSequence, tol: f64) -> Result<InequalityReport> {
    let m = seq.len();
    check_limit(m, M_MAX)?;
    let d = seq.deviations(state)?;
    let mut lhs_sum = 0.0;
    let mut sym = Complex64::new(0.0, 0.0);
    for perm in (0..m).permutations(m) {
        let ordered: Vec<&ComplexMatrix> = perm.iter().map(|&i| &d[i]).collect();
        let (left, right, overlap) = partial_norms(state, &ordered);
        lhs_sum += left.iter().zip(&right).map(|(l, r)| l * r).sum::<f64>();
        sym += overlap;
    }
    let lhs = lhs_sum / factorial(m + 1);
    let rhs = (sym / factorial(m)).norm();
    Ok(InequalityReport::evaluate(RelationId::SymmetricMultivariance, lhs, rhs, tol))
}

/// For `p = 0..=M`: `‖X_p⋯X_1 ψ‖`, `‖X_{p+1}⋯X_M ψ‖`, plus the full ordered
/// expectation. Mixed states use `√tr(ρ Y†Y)`.
fn partial_norms(state: &QuantumState, x: &[&ComplexMatrix]) -> (Vec<f64>, Vec<f64>, Complex64) {
    let m = x.len();
    match state {
        QuantumState::Pure(psi) => {
            let mut left = Vec::with_capacity(m + 1);
            let mut v = psi.clone();
            left.push(v.norm());
            for xi in x {
                v = xi.mul_vec_unchecked(&v);
                left.push(v.norm());
            }
            let mut right = vec![0.0; m + 1];
            let mut w = psi.clone();
            right[m] = w.norm();
            for p in (0..m).rev() {
                w = x[p].mul_vec_unchecked(&w);
                right[p] = w.norm();
            }
            let overlap = psi.entries().iter().zip(w.entries()).map(|(a, b)| a.conj() * b).sum();
            (left, right, overlap)
        }
        QuantumState::Density(rho) => {
            let n = rho.rows();
            let norm = |y: &ComplexMatrix| state.sesquilinear_unchecked(y, y).re.max(0.0).sqrt();
            let mut left = Vec::with_capacity(m + 1);
            let mut l = ComplexMatrix::identity(n);
            left.push(norm(&l));
            for xi in x {
                l = xi.mul_unchecked(&l);
                left.push(norm(&l));
            }
            let mut right = vec![0.0; m + 1];
            let mut r = ComplexMatrix::identity(n);
            right[m] = norm(&r);
            for p in (0..m).rev() {
                r = x[p].mul_unchecked(&r);
                right[p] = norm(&r);
            }
            let overlap = state.sesquilinear_unchecked(&ComplexMatrix::identity(n), &r);
            (left, right, overlap)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, hermitian_inner};
    use crate::report::DEFAULT_TOL;
    use crate::statefam::{random_density, random_hermitian, random_pure};
    use crate::uncertainty::covariance;
    use proptest::prelude::*;

    fn seq(dim: usize, m: usize, seed: u64) -> OperatorSequence {
        OperatorSequence::new((0..m as u64).map(|s| random_hermitian(dim, seed * 101 + s)).collect()).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn two_operators_give_covariance() {
        let rho = random_density(4, 2, 1).unwrap();
        let s = seq(4, 2, 1);
        let cov = covariance(&rho, &s.ops()[0], &s.ops()[1]).unwrap();
        assert!(close(multivariance(&rho, &s).unwrap(), cov, 1e-13));
    }

    #[test]
    fn identity_annihilates() {
        let psi = random_pure(3, 2);
        let mut ops = seq(3, 3, 2).ops().to_vec();
        ops[1] = ComplexMatrix::identity(3);
        let s = OperatorSequence::new(ops).unwrap();
        assert!(multivariance(&psi, &s).unwrap().norm() < 1e-14);
    }

    #[test]
    fn five_term_expansion() {
        let rho = random_density(5, 3, 3).unwrap();
        let s = seq(5, 3, 3);
        let [a, b, c] = [&s.ops()[0], &s.ops()[1], &s.ops()[2]];
        let e = |x: &ComplexMatrix| rho.expectation(x).unwrap();
        let mm = |x: &ComplexMatrix, y: &ComplexMatrix| x.matmul(y).unwrap();
        let expansion = e(&mm(&mm(a, b), c)) - e(a) * e(&mm(b, c)) - e(b) * e(&mm(a, c)) - e(c) * e(&mm(a, b))
            + 2.0 * e(a) * e(b) * e(c);
        assert!(close(multivariance(&rho, &s).unwrap(), expansion, 1e-12));
    }

    #[test]
    fn deviation_product_states() {
        let psi = random_pure(4, 4);
        let s = seq(4, 3, 4);
        assert_eq!(deviation_product_state(&psi, &s, &[]).unwrap(), psi.as_ket().unwrap().clone());
        let one = deviation_product_state(&psi, &s, &[1]).unwrap();
        let two_three = deviation_product_state(&psi, &s, &[2, 3]).unwrap();
        assert!(close(hermitian_inner(&one, &two_three).unwrap(), multivariance(&psi, &s).unwrap(), 1e-12));

        // eigenvector of A_1 is annihilated by ΔA_1
        let (_, vecs) = s.ops()[0].eigh().unwrap();
        let eigvec = ComplexVector::new((0..4).map(|i| vecs.get(i, 0)).collect()).unwrap();
        let z = deviation_product_state(&QuantumState::pure(eigvec), &s, &[1]).unwrap();
        assert!(z.norm() < 1e-13);

        let mixed = random_density(4, 2, 4).unwrap();
        assert!(matches!(deviation_product_state(&mixed, &s, &[1]), Err(Error::Purity(_))));
        assert!(matches!(deviation_product_state(&psi, &s, &[4]), Err(Error::Index(_))));
    }

    #[test]
    fn overlap_representations_agree() {
        let psi = random_pure(5, 5);
        let s = seq(5, 3, 5);
        let k = |idx: &[usize]| deviation_product_state(&psi, &s, idx).unwrap();
        let ket = psi.as_ket().unwrap().clone();
        let vals = [
            hermitian_inner(&ket, &k(&[1, 2, 3])).unwrap().norm(),
            hermitian_inner(&k(&[1]), &k(&[2, 3])).unwrap().norm(),
            hermitian_inner(&k(&[2, 1]), &k(&[3])).unwrap().norm(),
            hermitian_inner(&k(&[3, 2, 1]), &ket).unwrap().norm(),
        ];
        for v in &vals[1..] {
            assert!((v - vals[0]).abs() <= 1e-12 * vals[0].max(1.0));
        }
    }

    #[test]
    fn two_operator_partitions_are_schrodinger() {
        let rho = random_density(3, 3, 6).unwrap();
        let s = seq(3, 2, 6);
        let reports = all_partitioned_relations(&rho, &s, DEFAULT_TOL).unwrap();
        assert_eq!(reports.len(), 3);
        let middle = reports[1];
        let sa = crate::uncertainty::std_dev(&rho, &s.ops()[0]).unwrap();
        let sb = crate::uncertainty::std_dev(&rho, &s.ops()[1]).unwrap();
        assert!((middle.lhs_left - sa).abs() < 1e-12 && (middle.lhs_right - sb).abs() < 1e-12);
        assert!(reports.iter().all(|r| r.satisfied));
    }

    #[test]
    fn four_operator_middle_partition() {
        let psi = random_pure(4, 7);
        let s = seq(4, 4, 7);
        let r = partitioned_relation(&psi, &s, 2, DEFAULT_TOL).unwrap();
        let abba = multivariance_of_indices(&psi, &s, &[1, 2, 2, 1]).unwrap();
        let dccd = multivariance_of_indices(&psi, &s, &[4, 3, 3, 4]).unwrap();
        assert!((r.lhs_left - abba.re.sqrt()).abs() < 1e-13);
        assert!((r.lhs_right - dccd.re.sqrt()).abs() < 1e-13);
        assert!(r.satisfied);
        assert_eq!(all_partitioned_relations(&psi, &s, DEFAULT_TOL).unwrap().len(), 5);
        assert!(matches!(partitioned_relation(&psi, &s, 5, DEFAULT_TOL), Err(Error::Arity(_))));
    }

    #[test]
    fn single_operator_partitions() {
        let psi = random_pure(3, 8);
        let s = seq(3, 1, 8);
        let reports = all_partitioned_relations(&psi, &s, DEFAULT_TOL).unwrap();
        assert_eq!(reports.len(), 2);
        for r in reports {
            assert!(r.rhs < 1e-14);
            assert!(r.satisfied);
        }
    }

    #[test]
    fn symmetric_two_operator_closed_form() {
        let rho = random_density(4, 4, 9).unwrap();
        let s = seq(4, 2, 9);
        let (a, b) = (&s.ops()[0], &s.ops()[1]);
        let anti = a.matmul(b).unwrap().add(&b.matmul(a).unwrap()).unwrap();
        let closed = rho.expectation(&anti).unwrap() / 2.0 - rho.expectation(a).unwrap() * rho.expectation(b).unwrap();
        assert!(close(symmetric_multivariance(&rho, &s).unwrap(), closed, 1e-12));
    }

    #[test]
    fn symmetric_three_operator_closed_form() {
        let rho = random_density(4, 3, 10).unwrap();
        let s = seq(4, 3, 10);
        let [a1, a2, a3] = [&s.ops()[0], &s.ops()[1], &s.ops()[2]];
        let e = |x: &ComplexMatrix| rho.expectation(x).unwrap();
        let anti = |x: &ComplexMatrix, y: &ComplexMatrix| x.matmul(y).unwrap().add(&y.matmul(x).unwrap()).unwrap();
        let triple = a1
            .matmul(&anti(a2, a3))
            .unwrap()
            .add(&a2.matmul(&anti(a3, a1)).unwrap())
            .unwrap()
            .add(&a3.matmul(&anti(a1, a2)).unwrap())
            .unwrap();
        let closed = e(&triple) / 6.0
            - (e(a1) * e(&anti(a2, a3)) + e(a2) * e(&anti(a3, a1)) + e(a3) * e(&anti(a1, a2))) / 2.0
            + 2.0 * e(a1) * e(a2) * e(a3);
        assert!(close(symmetric_multivariance(&rho, &s).unwrap(), closed, 1e-12));
    }

    #[test]
    fn symmetric_of_identical_ops() {
        let psi = random_pure(3, 11);
        let a = random_hermitian(3, 11);
        let s = OperatorSequence::new(vec![a.clone(), a.clone(), a]).unwrap();
        assert!(close(symmetric_multivariance(&psi, &s).unwrap(), multivariance(&psi, &s).unwrap(), 1e-13));
        // With A twice, the middle partition saturates (σ_A·σ_A = σ_A²); the
        // outer partitions |ψ||ΔA²ψ| do not, so the average stays strictly above.
        let s2 = OperatorSequence::new(s.ops()[..2].to_vec()).unwrap();
        let middle = partitioned_relation(&psi, &s2, 1, DEFAULT_TOL).unwrap();
        assert!((middle.lhs - middle.rhs).abs() <= 1e-12 * middle.lhs.max(1.0));
        let r = symmetric_relation(&psi, &s2, DEFAULT_TOL).unwrap();
        assert!(r.satisfied && r.lhs >= middle.lhs);
    }

    #[test]
    fn symmetric_two_operator_relation_oracle() {
        let rho = random_density(3, 2, 12).unwrap();
        let s = seq(3, 2, 12);
        let r = symmetric_relation(&rho, &s, DEFAULT_TOL).unwrap();
        // average of the three partitioned left sides over both orderings
        let mut total = 0.0;
        for order in [[0, 1], [1, 0]] {
            let sp = s.permuted(&order).unwrap();
            for rep in all_partitioned_relations(&rho, &sp, DEFAULT_TOL).unwrap() {
                total += rep.lhs;
            }
        }
        assert!((r.lhs - total / 6.0).abs() < 1e-12);
        assert!(r.satisfied);
    }

    #[test]
    fn limit_is_enforced() {
        let psi = random_pure(2, 13);
        let s = seq(2, 3, 13);
        assert!(matches!(symmetric_multivariance_with_limit(&psi, &s, 2), Err(Error::Arity(_))));
        let s9 = seq(2, 9, 13);
        assert!(matches!(symmetric_relation(&psi, &s9, DEFAULT_TOL), Err(Error::Arity(_))));
    }

    #[test]
    fn sequence_validation() {
        assert!(matches!(OperatorSequence::new(vec![]), Err(Error::Arity(_))));
        let bad = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(OperatorSequence::new(vec![bad]), Err(Error::Hermiticity(_))));
        let mixed_dims = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
        assert!(matches!(OperatorSequence::new(mixed_dims), Err(Error::Dimension(_))));
        let s = seq(2, 2, 1).with_labels(vec!["A".into(), "B".into()]).unwrap();
        assert_eq!(s.reversed().labels().unwrap(), &["B".to_string(), "A".to_string()]);
        assert!(s.permuted(&[0, 0]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn partitions_hold(dim in 2usize..6, m in 2usize..6, rank in 0usize..6, seed in any::<u64>()) {
            let state = if rank == 0 {
                random_pure(dim, seed)
            } else {
                random_density(dim, rank.min(dim), seed).unwrap()
            };
            let s = seq(dim, m, seed % 100_000);
            let reports = all_partitioned_relations(&state, &s, DEFAULT_TOL).unwrap();
            let rhs0 = reports[0].rhs;
            for r in &reports {
                prop_assert!(r.slack >= -1e-9 * r.scale);
                prop_assert!((r.rhs - rhs0).abs() <= 1e-12 * rhs0.max(1.0));
            }
        }

        #[test]
        fn radicand_is_squared_norm(dim in 2usize..6, m in 1usize..5, seed in any::<u64>()) {
            let psi = random_pure(dim, seed);
            let s = seq(dim, m, seed % 100_000);
            for p in 0..=m {
                let down: Vec<usize> = (1..=p).rev().collect();
                let ket = deviation_product_state(&psi, &s, &down).unwrap();
                let pal: Vec<usize> = (1..=p).chain((1..=p).rev()).collect();
                let rad = multivariance_of_indices(&psi, &s, &pal).unwrap();
                prop_assert!((rad.re - ket.norm_sqr()).abs() <= 1e-12 * rad.norm().max(1.0));
                prop_assert!(rad.im.abs() <= 1e-12 * rad.norm().max(1.0));
            }
        }

        #[test]
        fn reversal_conjugates(dim in 2usize..6, m in 1usize..6, seed in any::<u64>()) {
            let rho = random_density(dim, dim, seed).unwrap();
            let s = seq(dim, m, seed % 100_000);
            let fwd = multivariance(&rho, &s).unwrap();
            let back = multivariance(&rho, &s.reversed()).unwrap();
            prop_assert!((fwd.conj() - back).norm() <= 1e-12 * fwd.norm().max(1.0));
        }

        #[test]
        fn symmetric_is_permutation_invariant(dim in 2usize..5, m in 2usize..5, seed in any::<u64>()) {
            let rho = random_density(dim, dim, seed).unwrap();
            let s = seq(dim, m, seed % 100_000);
            let base = symmetric_multivariance(&rho, &s).unwrap();
            let mut order: Vec<usize> = (0..m).collect();
            for k in 0..20u64 {
                order.rotate_left(1);
                if k % 3 == 0 { order.swap(0, m - 1); }
                let other = symmetric_multivariance(&rho, &s.permuted(&order).unwrap()).unwrap();
                prop_assert!((other - base).norm() <= 1e-12 * base.norm().max(1.0));
            }
            prop_assert!(mean_abs_multivariance(&rho, &s).unwrap() >= base.norm() - 1e-12 * base.norm().max(1.0));
            let r = symmetric_relation(&rho, &s, DEFAULT_TOL).unwrap();
            prop_assert!(r.relative_slack() >= -1e-9);
            prop_assert!((r.rhs - base.norm()).abs() <= 1e-12 * base.norm().max(1.0));
        }

        #[test]
        fn unnormalized_kets_scale(dim in 2usize..5, t in 0.2..3.0f64, seed in any::<u64>()) {
            let psi = random_pure(dim, seed).scaled(t);
            let s = seq(dim, 3, seed % 100_000);
            for r in all_partitioned_relations(&psi, &s, DEFAULT_TOL).unwrap() {
                prop_assert!(r.slack >= -1e-9 * r.scale);
            }
            let _ = c64(0.0, 0.0);
        }
    }
}
