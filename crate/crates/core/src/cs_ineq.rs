//! Multi-vector Cauchy-Schwarz inequalities.
//!
//! The balanced form bounds `Π_j |a_j|` by the `(M−1)`-th root of all pairwise
//! overlap moduli; the unbalanced form compares `Π_q |a_j||a_k|` with
//! `Π_q |a_j·a_k|` over a chosen set of index pairs.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_inner, ComplexMatrix, ComplexVector, QuantumState, HERMITICITY_TOL};
use crate::report::{InequalityReport, RelationId};

/// A set of distinct index pairs `(j, k)`, 1-based, stored with `j < k` and
/// sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairSet {
    pairs: Vec<(usize, usize)>,
}

impl PairSet {
    /// Canonicalizes `pairs` against a list of `m` items. Pairs may be given
    /// in either orientation; repeats and self-pairs are rejected.
    pub fn new(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::PairSet("at least one pair is required".into()));
        }
        let mut canon = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > m || b > m {
                return Err(Error::Index(format!("pair ({a}, {b}) outside 1..={m}")));
            }
            if a == b {
                return Err(Error::PairSet(format!("pair ({a}, {b}) repeats an index")));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::PairSet(format!("duplicate pair {:?}", w[0])));
        }
        Ok(Self { pairs: canon })
    }

    /// All `M(M−1)/2` pairs.
    pub fn full(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Arity(format!("need at least 2 items, got {m}")));
        }
        Ok(Self { pairs: all_pairs(m) })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of pairs `K`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Largest index referenced.
    pub fn max_index(&self) -> usize {
        self.pairs.iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    /// How many pairs contain `index`.
    pub fn multiplicity(&self, index: usize) -> usize {
        self.pairs.iter().filter(|&&(j, k)| j == index || k == index).count()
    }

    pub(crate) fn check_against(&self, m: usize) -> Result<()> {
        let top = self.max_index();
        if top > m {
            return Err(Error::Index(format!("pair index {top} exceeds item count {m}")));
        }
        Ok(())
    }
}

fn all_pairs(m: usize) -> Vec<(usize, usize)> {
    (1..=m).tuple_combinations().collect()
}

/// Every `K`-element subset of the `M(M−1)/2` pairs, in lexicographic order.
pub fn enumerate_pairsets(m: usize, k: usize) -> Result<Vec<PairSet>> {
    if m < 2 {
        return Err(Error::Arity(format!("need at least 2 items, got {m}")));
    }
    let total = m * (m - 1) / 2;
    if k == 0 || k > total {
        return Err(Error::Arity(format!("pair count {k} outside 1..={total}")));
    }
    Ok(all_pairs(m)
        .into_iter()
        .combinations(k)
        .map(|pairs| PairSet { pairs })
        .collect())
}

/// `(Π factors)^{1/n}`, in log space when the direct product leaves the
/// normal floating-point range. Zero if any factor is zero.
pub fn root_of_product(factors: impl IntoIterator<Item = f64> + Clone, n: f64) -> f64 {
    if factors.clone().into_iter().any(|f| f == 0.0) {
        return 0.0;
    }
    let product: f64 = factors.clone().into_iter().product();
    if product.is_normal() {
        return product.powf(1.0 / n);
    }
    let log_sum: f64 = factors.into_iter().map(f64::ln).sum();
    (log_sum / n).exp()
}

/// Magnitudes feeding a balanced or unbalanced relation: the per-item
/// factors of the left side and the pairwise overlap moduli of the right.
///
/// Vectors give `|a_j|` and `|a_j·a_k|`; states and operators give standard
/// deviations and covariance moduli.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapTable {
    norms: Vec<f64>,
    moduli: Vec<f64>,
}

/// Outcome of checking every nonempty pair subset on one table.
#[derive(Debug, Clone, PartialEq)]
pub struct PairsetSweep {
    pub checked: u64,
    pub violations: u64,
    pub min_relative_slack: f64,
    /// Pairs achieving `min_relative_slack`.
    pub worst: Vec<(usize, usize)>,
}

impl OverlapTable {
    /// `moduli` is row-major `M×M`; only the strict upper triangle is read.
    pub fn new(norms: Vec<f64>, moduli: Vec<f64>) -> Result<Self> {
        let m = norms.len();
        if m < 2 {
            return Err(Error::Arity(format!("need at least 2 items, got {m}")));
        }
        if moduli.len() != m * m {
            return Err(Error::Dimension(format!(
                "{m} items need {} moduli, got {}",
                m * m,
                moduli.len()
            )));
        }
        Ok(Self { norms, moduli })
    }

    pub fn from_vectors(vectors: &[ComplexVector]) -> Result<Self> {
        let m = vectors.len();
        if m < 2 {
            return Err(Error::Arity(format!("need at least 2 vectors, got {m}")));
        }
        let mut moduli = vec![0.0; m * m];
        for (j, k) in (0..m).tuple_combinations() {
            let z = hermitian_inner(&vectors[j], &vectors[k])?.norm();
            moduli[j * m + k] = z;
            moduli[k * m + j] = z;
        }
        Ok(Self { norms: vectors.iter().map(ComplexVector::norm).collect(), moduli })
    }

    pub fn m(&self) -> usize {
        self.norms.len()
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// Overlap modulus for 1-based indices.
    pub fn modulus(&self, j: usize, k: usize) -> f64 {
        self.moduli[(j - 1) * self.m() + (k - 1)]
    }

    fn upper_moduli(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        let m = self.m();
        (0..m).tuple_combinations().map(move |(j, k)| self.moduli[j * m + k])
    }

    /// Moduli of all pairs `j < k`, in lexicographic pair order.
    pub fn pair_moduli(&self) -> Vec<f64> {
        self.upper_moduli().collect()
    }

    /// Table restricted to the 1-based `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let m = self.m();
        if let Some(&bad) = indices.iter().find(|&&j| j == 0 || j > m) {
            return Err(Error::Index(format!("index {bad} outside 1..={m}")));
        }
        let norms = indices.iter().map(|&j| self.norms[j - 1]).collect();
        let moduli = indices
            .iter()
            .flat_map(|&j| indices.iter().map(move |&k| (j, k)))
            .map(|(j, k)| self.modulus(j, k))
            .collect();
        Self::new(norms, moduli)
    }

    /// `Π_j norms_j`.
    pub fn norm_product(&self) -> f64 {
        self.norms.iter().product()
    }

    /// `(Π_{j<k} moduli_jk)^{1/(M−1)}`.
    pub fn balanced_rhs(&self) -> f64 {
        root_of_product(self.upper_moduli(), (self.m() - 1) as f64)
    }

    pub fn balanced(&self, relation: RelationId, tol: f64) -> InequalityReport {
        InequalityReport::evaluate(relation, self.norm_product(), self.balanced_rhs(), tol)
    }

    /// `Π_q norms_j norms_k` over the pairs.
    pub fn pair_norm_product(&self, pairs: &PairSet) -> Result<f64> {
        pairs.check_against(self.m())?;
        Ok(pairs.pairs().iter().map(|&(j, k)| self.norms[j - 1] * self.norms[k - 1]).product())
    }

    pub fn unbalanced(&self, relation: RelationId, pairs: &PairSet, tol: f64) -> Result<InequalityReport> {
        let lhs = self.pair_norm_product(pairs)?;
        let rhs = pairs.pairs().iter().map(|&(j, k)| self.modulus(j, k)).product();
        Ok(InequalityReport::evaluate(relation, lhs, rhs, tol))
    }

    /// Checks the unbalanced relation on all `2^{M(M−1)/2} − 1` pair subsets,
    /// sharing partial products across subsets.
    pub fn sweep_all_pairsets(&self, tol: f64) -> PairsetSweep {
        let m = self.m();
        let factors: Vec<((usize, usize), f64, f64)> = (0..m)
            .tuple_combinations()
            .map(|(j, k)| ((j + 1, k + 1), self.norms[j] * self.norms[k], self.moduli[j * m + k]))
            .collect();
        let mut state = SweepState {
            out: PairsetSweep { checked: 0, violations: 0, min_relative_slack: f64::INFINITY, worst: vec![] },
            path: Vec::with_capacity(factors.len()),
            tol,
        };
        sweep_from(&factors, 0, 1.0, 1.0, &mut state);
        state.out
    }
}

struct SweepState {
    out: PairsetSweep,
    path: Vec<usize>,
    tol: f64,
}

fn sweep_from(factors: &[((usize, usize), f64, f64)], start: usize, lhs: f64, rhs: f64, st: &mut SweepState) {
    let last = factors.len() - 1;
    for i in start..factors.len() {
        let l = lhs * factors[i].1;
        let r = rhs * factors[i].2;
        let slack = l - r;
        let scale = 1.0_f64.max(l).max(r);
        // Compare scaled slacks without dividing; only improvements pay for it.
        if slack < -st.tol * scale {
            st.out.violations += 1;
        }
        st.path.push(i);
        if slack < st.out.min_relative_slack * scale {
            st.out.min_relative_slack = slack / scale;
            st.out.worst = st.path.iter().map(|&p| factors[p].0).collect();
        }
        if i < last {
            sweep_from(factors, i + 1, l, r, st);
        }
        st.path.pop();
    }
    st.out.checked += (factors.len() - start) as u64;
}

fn check_vectors(vectors: &[ComplexVector]) -> Result<()> {
    if vectors.len() < 2 {
        return Err(Error::Arity(format!("need at least 2 vectors, got {}", vectors.len())));
    }
    let dim = vectors[0].dim();
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::Dimension(format!("vector dimensions {dim} and {}", v.dim())));
    }
    Ok(())
}

/// `Π_j |a_j| ≥ (Π_{j<k} |a_j·a_k|)^{1/(M−1)}`.
pub fn balanced_cs(vectors: &[ComplexVector], tol: f64) -> Result<InequalityReport> {
    check_vectors(vectors)?;
    Ok(OverlapTable::from_vectors(vectors)?.balanced(RelationId::BalancedCs, tol))
}

/// `Π_q |a_{j_q}||a_{k_q}| ≥ Π_q |a_{j_q}·a_{k_q}|`.
pub fn unbalanced_cs(vectors: &[ComplexVector], pairs: &PairSet, tol: f64) -> Result<InequalityReport> {
    check_vectors(vectors)?;
    pairs.check_against(vectors.len())?;
    OverlapTable::from_vectors(vectors)?.unbalanced(RelationId::UnbalancedCs, pairs, tol)
}

fn kets_of(states: &[QuantumState]) -> Result<Vec<ComplexVector>> {
    states
        .iter()
        .map(|s| s.as_ket().cloned().ok_or_else(|| Error::Purity("expected pure kets".into())))
        .collect()
}

/// [`balanced_cs`] applied to pure (not necessarily normalized) kets.
pub fn balanced_cs_kets(states: &[QuantumState], tol: f64) -> Result<InequalityReport> {
    balanced_cs(&kets_of(states)?, tol)
}

/// [`unbalanced_cs`] applied to pure (not necessarily normalized) kets.
pub fn unbalanced_cs_kets(states: &[QuantumState], pairs: &PairSet, tol: f64) -> Result<InequalityReport> {
    unbalanced_cs(&kets_of(states)?, pairs, tol)
}

/// `|a_{p,…,1}|·|a_{p+1,…,M}| ≥ |a†ΔA_1⋯ΔA_M a|` with `⟨A⟩ = a†Aa` and
/// `a_{j_1,…,j_q} = ΔA_{j_1}⋯ΔA_{j_q} a`.
pub fn multivariance_cs_vectors(
    a: &ComplexVector,
    ops: &[ComplexMatrix],
    p: usize,
    tol: f64,
) -> Result<InequalityReport> {
    let m = ops.len();
    if m == 0 {
        return Err(Error::Arity("need at least one operator".into()));
    }
    if p > m {
        return Err(Error::Arity(format!("partition point {p} outside 0..={m}")));
    }
    let state = QuantumState::pure(a.clone());
    let mut deviations = Vec::with_capacity(m);
    for (j, op) in ops.iter().enumerate() {
        state.check_operator(op)?;
        let defect = op.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::Hermiticity(format!("operator {} defect {defect:e}", j + 1)));
        }
        let mean = state.real_expectation(op)?;
        deviations.push(op.shift_diagonal((-mean).into())?);
    }
    // a_{p,…,1}: ΔA_1 acts first.
    let left = deviations[..p].iter().fold(a.clone(), |v, d| d.mul_vec_unchecked(&v));
    // a_{p+1,…,M}: ΔA_M acts first.
    let right = deviations[p..].iter().rev().fold(a.clone(), |v, d| d.mul_vec_unchecked(&v));
    let product = deviations[1..].iter().fold(deviations[0].clone(), |acc, d| acc.mul_unchecked(d));
    let rhs = hermitian_inner(a, &product.mul_vec_unchecked(a))?.norm();
    Ok(InequalityReport::evaluate(RelationId::MultivarianceCs, left.norm() * right.norm(), rhs, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, Complex64};
    use crate::report::DEFAULT_TOL;
    use crate::statefam::{random_hermitian, random_vector};
    use proptest::prelude::*;

    fn vecs(rows: &[&[f64]]) -> Vec<ComplexVector> {
        rows.iter().map(|r| ComplexVector::from_real(r).unwrap()).collect()
    }

    #[test]
    fn orthogonal_pair() {
        let r = balanced_cs(&vecs(&[&[1.0, 0.0], &[0.0, 1.0]]), DEFAULT_TOL).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 0.0));
        assert!(r.satisfied);
    }

    #[test]
    fn identical_unit_vectors_saturate() {
        let v = vecs(&[&[1.0, 0.0], &[1.0, 0.0], &[1.0, 0.0]]);
        let r = balanced_cs(&v, DEFAULT_TOL).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        let full = PairSet::full(3).unwrap();
        let r = unbalanced_cs(&v, &full, DEFAULT_TOL).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
    }

    #[test]
    fn balanced_matches_all_pairs_oracle() {
        let v: Vec<_> = (0..4).map(|s| random_vector(6, 500 + s)).collect();
        let r = balanced_cs(&v, DEFAULT_TOL).unwrap();
        // independent oracle: explicit six-overlap product, cube root
        let mut prod = 1.0;
        for j in 0..4 {
            for k in j + 1..4 {
                let z: Complex64 = v[j].entries().iter().zip(v[k].entries()).map(|(a, b)| a.conj() * b).sum();
                prod *= z.norm();
            }
        }
        assert!((r.rhs - prod.cbrt()).abs() <= 1e-12 * r.rhs.max(1.0));
        assert!(r.satisfied);
    }

    #[test]
    fn two_pair_shape() {
        let v: Vec<_> = (0..3).map(|s| random_vector(5, 900 + s)).collect();
        let pairs = PairSet::new(3, &[(1, 2), (1, 3)]).unwrap();
        let r = unbalanced_cs(&v, &pairs, DEFAULT_TOL).unwrap();
        let n: Vec<f64> = v.iter().map(|x| x.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
        let ov = |a: &ComplexVector, b: &ComplexVector| {
            a.entries().iter().zip(b.entries()).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm()
        };
        let lhs = n[0] * n[0] * n[1] * n[2];
        let rhs = ov(&v[0], &v[1]) * ov(&v[0], &v[2]);
        assert!((r.lhs - lhs).abs() <= 1e-12 * lhs);
        assert!((r.rhs - rhs).abs() <= 1e-12 * rhs);
        assert!(r.satisfied);
    }

    #[test]
    fn single_pair_is_classic_cs() {
        let v = vec![random_vector(3, 1), random_vector(3, 2)];
        let r = unbalanced_cs(&v, &PairSet::new(2, &[(2, 1)]).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(r.lhs, v[0].norm() * v[1].norm());
        assert_eq!(r.rhs, v[0].inner(&v[1]).unwrap().norm());
    }

    #[test]
    fn pairset_validation() {
        assert!(matches!(PairSet::new(3, &[(1, 4)]), Err(Error::Index(_))));
        assert!(matches!(PairSet::new(3, &[(0, 1)]), Err(Error::Index(_))));
        assert!(matches!(PairSet::new(3, &[(1, 2), (2, 1)]), Err(Error::PairSet(_))));
        assert!(matches!(PairSet::new(3, &[(2, 2)]), Err(Error::PairSet(_))));
        let p = PairSet::new(4, &[(3, 1), (2, 4)]).unwrap();
        assert_eq!(p.pairs(), &[(1, 3), (2, 4)]);
        let v = vecs(&[&[1.0], &[1.0]]);
        assert!(matches!(unbalanced_cs(&v, &p, DEFAULT_TOL), Err(Error::Index(_))));
    }

    #[test]
    fn arity_and_dimension_errors() {
        assert!(matches!(balanced_cs(&vecs(&[&[1.0]]), DEFAULT_TOL), Err(Error::Arity(_))));
        assert!(matches!(balanced_cs(&vecs(&[&[1.0], &[1.0, 0.0]]), DEFAULT_TOL), Err(Error::Dimension(_))));
    }

    #[test]
    fn enumeration_counts() {
        let one = enumerate_pairsets(3, 3).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].pairs(), &[(1, 2), (1, 3), (2, 3)]);
        assert_eq!(enumerate_pairsets(4, 1).unwrap().len(), 6);
        let twenty = enumerate_pairsets(4, 3).unwrap();
        assert_eq!(twenty.len(), 6 * 5 * 4 / 6);
        assert!(twenty.windows(2).all(|w| w[0].pairs() < w[1].pairs()));
        assert!(enumerate_pairsets(4, 7).is_err());
        assert!(enumerate_pairsets(4, 0).is_err());
    }

    #[test]
    fn sweep_counts_every_subset() {
        let v: Vec<_> = (0..4).map(|s| random_vector(3, 40 + s)).collect();
        let table = OverlapTable::from_vectors(&v).unwrap();
        let sweep = table.sweep_all_pairsets(DEFAULT_TOL);
        assert_eq!(sweep.checked, (1 << 6) - 1);
        assert_eq!(sweep.violations, 0);
        // the witness reproduces the minimum through the direct route
        let worst = PairSet::new(4, &sweep.worst).unwrap();
        let r = unbalanced_cs(&v, &worst, DEFAULT_TOL).unwrap();
        assert!((r.relative_slack() - sweep.min_relative_slack).abs() < 1e-12);
    }

    #[test]
    fn root_in_log_space() {
        let factors = [1e-200; 4];
        let r = root_of_product(factors.iter().copied(), 4.0);
        assert!((r / 1e-200 - 1.0).abs() < 1e-12);
        assert_eq!(root_of_product([1.0, 0.0, 5.0], 2.0), 0.0);
    }

    #[test]
    fn ket_wrappers_are_bit_identical() {
        let v: Vec<_> = (0..3).map(|s| random_vector(4, 70 + s)).collect();
        let kets: Vec<_> = v.iter().cloned().map(QuantumState::pure).collect();
        assert_eq!(balanced_cs(&v, DEFAULT_TOL).unwrap(), balanced_cs_kets(&kets, DEFAULT_TOL).unwrap());
        let p = PairSet::new(3, &[(1, 3)]).unwrap();
        assert_eq!(unbalanced_cs(&v, &p, DEFAULT_TOL).unwrap(), unbalanced_cs_kets(&kets, &p, DEFAULT_TOL).unwrap());
        let mixed = QuantumState::density(v[0].outer()).unwrap();
        assert!(matches!(balanced_cs_kets(&[mixed.clone(), mixed], DEFAULT_TOL), Err(Error::Purity(_))));
    }

    #[test]
    fn multivariance_vectors_identity_ops_vanish() {
        let a = random_vector(3, 11);
        let id = ComplexMatrix::identity(3);
        let a = a.normalized().unwrap();
        let r = multivariance_cs_vectors(&a, &[id.clone(), id], 1, DEFAULT_TOL).unwrap();
        assert!(r.lhs < 1e-15 && r.rhs < 1e-15);
    }

    #[test]
    fn multivariance_vectors_rhs_is_partition_independent() {
        let a = random_vector(4, 12).normalized().unwrap();
        let ops: Vec<_> = (0..3).map(|s| random_hermitian(4, 200 + s)).collect();
        let reports: Vec<_> = (0..=3).map(|p| multivariance_cs_vectors(&a, &ops, p, DEFAULT_TOL).unwrap()).collect();
        // oracle: ⟨ΔA1 ΔA2 ΔA3⟩ assembled by hand
        let mean = |x: &ComplexMatrix| a.inner(&x.mul_vec(&a).unwrap()).unwrap().re;
        let d: Vec<_> = ops.iter().map(|x| x.shift_diagonal(c64(-mean(x), 0.0)).unwrap()).collect();
        let w = d[0].mul_vec(&d[1].mul_vec(&d[2].mul_vec(&a).unwrap()).unwrap()).unwrap();
        let sigma3 = a.inner(&w).unwrap().norm();
        for r in &reports {
            assert!(r.satisfied);
            assert!((r.rhs - sigma3).abs() <= 1e-12 * sigma3.max(1.0));
        }
        assert!(matches!(multivariance_cs_vectors(&a, &ops, 4, DEFAULT_TOL), Err(Error::Arity(_))));
        let bad = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0, 0.0], &[0.0; 4], &[0.0; 4], &[0.0; 4]]).unwrap();
        assert!(matches!(multivariance_cs_vectors(&a, &[bad], 0, DEFAULT_TOL), Err(Error::Hermiticity(_))));
    }

    #[test]
    fn two_operator_middle_line() {
        let a = random_vector(3, 13).normalized().unwrap();
        let ops: Vec<_> = (0..2).map(|s| random_hermitian(3, 300 + s)).collect();
        let r = multivariance_cs_vectors(&a, &ops, 1, DEFAULT_TOL).unwrap();
        let mean = |x: &ComplexMatrix| a.inner(&x.mul_vec(&a).unwrap()).unwrap().re;
        let d1 = ops[0].shift_diagonal(c64(-mean(&ops[0]), 0.0)).unwrap().mul_vec(&a).unwrap();
        let d2 = ops[1].shift_diagonal(c64(-mean(&ops[1]), 0.0)).unwrap().mul_vec(&a).unwrap();
        assert!((r.lhs - d1.norm() * d2.norm()).abs() < 1e-13);
        assert!((r.rhs - d1.inner(&d2).unwrap().norm()).abs() < 1e-13);
    }

    fn vector_strategy(dim: usize) -> impl Strategy<Value = ComplexVector> {
        prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), dim)
            .prop_map(|e| ComplexVector::new(e.into_iter().map(|(r, i)| c64(r, i)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn base_inequality_holds(dim in 1usize..16, seed in any::<u64>()) {
            let u = random_vector(dim, seed);
            let v = random_vector(dim, seed.wrapping_add(1));
            let r = balanced_cs(&[u, v], DEFAULT_TOL).unwrap();
            prop_assert!(r.relative_slack() >= -1e-12);
        }

        #[test]
        fn exponent_identity(m in 2usize..7, seed in any::<u64>()) {
            let v: Vec<_> = (0..m as u64).map(|s| random_vector(3, seed ^ (s * 7919))).collect();
            let table = OverlapTable::from_vectors(&v).unwrap();
            let full = table.pair_norm_product(&PairSet::full(m).unwrap()).unwrap();
            let expected = table.norm_product().powi(m as i32 - 1);
            prop_assert!((full - expected).abs() <= 1e-12 * expected);
        }

        #[test]
        fn balanced_is_root_of_full_unbalanced(v in prop::collection::vec(vector_strategy(3), 2..6)) {
            let m = v.len();
            let b = balanced_cs(&v, DEFAULT_TOL).unwrap();
            let u = unbalanced_cs(&v, &PairSet::full(m).unwrap(), DEFAULT_TOL).unwrap();
            let root = |x: f64| x.powf(1.0 / (m as f64 - 1.0));
            prop_assert!((root(u.lhs) - b.lhs).abs() <= 1e-10 * b.lhs.max(1.0));
            prop_assert!((root(u.rhs) - b.rhs).abs() <= 1e-10 * b.rhs.max(1.0));
            prop_assert_eq!(u.satisfied, b.satisfied);
        }

        #[test]
        fn scale_covariance(v in prop::collection::vec(vector_strategy(3), 3..5),
                            re in -2.0..2.0f64, im in -2.0..2.0f64, which in 0usize..3) {
            let m = v.len();
            let pairs = PairSet::new(m, &[(1, 2), (1, 3), (2, 3)]).unwrap();
            let c = c64(re, im);
            let before = unbalanced_cs(&v, &pairs, DEFAULT_TOL).unwrap();
            let mut w = v.clone();
            w[which] = w[which].scale(c);
            let after = unbalanced_cs(&w, &pairs, DEFAULT_TOL).unwrap();
            let f = c.norm().powi(pairs.multiplicity(which + 1) as i32);
            prop_assert!((after.lhs - f * before.lhs).abs() <= 1e-10 * after.lhs.max(1.0));
            prop_assert!((after.rhs - f * before.rhs).abs() <= 1e-10 * after.rhs.max(1.0));
            prop_assert!(after.satisfied && before.satisfied);
        }
    }
}
