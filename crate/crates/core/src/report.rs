//! Uniform result carrier for every inequality check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::scale_of;

/// Default slack tolerance, relative to `max(1, lhs, rhs)`.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Which inequality a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationId {
    BalancedCs,
    UnbalancedCs,
    MultivarianceCs,
    BalancedHermitian,
    UnbalancedHermitian,
    BalancedGeneral,
    UnbalancedGeneral,
    PartitionedMultivariance,
    SymmetricMultivariance,
    TripleOscillator,
    Combined,
}

/// `lhs ≥ rhs` evaluated in floating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub relation: RelationId,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub slack: f64,
    /// `max(1, lhs, rhs)`.
    pub scale: f64,
    pub satisfied: bool,
}

impl InequalityReport {
    pub fn evaluate(relation: RelationId, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = lhs - rhs;
        let scale = scale_of(&[lhs, rhs]);
        Self { relation, lhs, rhs, slack, scale, satisfied: slack >= -tol * scale }
    }

    /// `slack / scale`.
    pub fn relative_slack(&self) -> f64 {
        self.slack / self.scale
    }

    pub fn satisfied_at(&self, tol: f64) -> bool {
        self.slack >= -tol * self.scale
    }

    /// Same numbers re-judged at another tolerance.
    pub fn with_tol(self, tol: f64) -> Self {
        Self { satisfied: self.satisfied_at(tol), ..self }
    }
}

/// Combines reports with nonnegative weights: `Σ w_i lhs_i ≥ Σ w_i rhs_i`.
///
/// Any valid family of inequalities yields a valid combined inequality this way.
pub fn convex_combination(reports: &[InequalityReport], weights: &[f64], tol: f64) -> Result<InequalityReport> {
    if reports.is_empty() || reports.len() != weights.len() {
        return Err(Error::Arity(format!(
            "{} reports with {} weights",
            reports.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::Parameter("weights must be finite and nonnegative".into()));
    }
    let lhs = reports.iter().zip(weights).map(|(r, w)| w * r.lhs).sum();
    let rhs = reports.iter().zip(weights).map(|(r, w)| w * r.rhs).sum();
    Ok(InequalityReport::evaluate(RelationId::Combined, lhs, rhs, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_rule_is_relative() {
        let r = InequalityReport::evaluate(RelationId::BalancedCs, 1e6, 1e6 + 1e-4, 1e-9);
        assert!(r.satisfied);
        let r = InequalityReport::evaluate(RelationId::BalancedCs, 1.0, 1.0 + 1e-6, 1e-9);
        assert!(!r.satisfied);
        assert!(r.satisfied_at(1e-5));
    }

    #[test]
    fn combination_of_valid_reports_is_valid() {
        let a = InequalityReport::evaluate(RelationId::BalancedCs, 2.0, 1.0, DEFAULT_TOL);
        let b = InequalityReport::evaluate(RelationId::BalancedCs, 0.5, 0.5, DEFAULT_TOL);
        let c = convex_combination(&[a, b], &[0.25, 0.75], DEFAULT_TOL).unwrap();
        assert_eq!(c.lhs, 0.875);
        assert_eq!(c.rhs, 0.625);
        assert!(c.satisfied);
        assert!(convex_combination(&[a], &[-1.0], DEFAULT_TOL).is_err());
        assert!(convex_combination(&[a, b], &[1.0], DEFAULT_TOL).is_err());
    }
}
