//! Multi-vector Cauchy-Schwarz inequalities and the multi-operator
//! uncertainty relations built on them: covariance, generalized covariance,
//! multivariance, symmetric multivariance and multi-operator squeezing.

pub mod cs_ineq;
pub mod error;
pub mod fixture;
pub mod linalg;
pub mod multivariance;
pub mod report;
pub mod squeezing;
pub mod statefam;
pub mod uncertainty;

pub use cs_ineq::{balanced_cs, enumerate_pairsets, unbalanced_cs, OverlapTable, PairSet};
pub use error::{Error, Result};
pub use linalg::{c64, deviation, expectation, hermitian_inner, Complex64, ComplexMatrix, ComplexVector, QuantumState, StateKind};
pub use report::{InequalityReport, RelationId, DEFAULT_TOL};
pub use multivariance::{
    multivariance, partitioned_relation, symmetric_multivariance, symmetric_relation, OperatorSequence,
    PartitionedRelationReport,
};
pub use squeezing::{classify, fig6_region, oscillator_demo, table1_row, Region, RowLabel, SqueezingClassification, StateSpec, Table1Row};
pub use uncertainty::{balanced_relation, covariance, gen_covariance, unbalanced_relation, variance, Mode};
