//! Seeded randomized sweeps over the relation checkers.
//!
//! Trial `t` draws its inputs from the ChaCha20 stream `(seed, t)`, so any
//! trial can be regenerated on its own and results do not depend on the
//! number of worker threads.

use clap::ValueEnum;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use mucs::fixture::{MatrixDoc, OperatorSetDoc};
use mucs::multivariance::{all_partitioned_relations, symmetric_relation, OperatorSequence, M_MAX};
use mucs::statefam::{
    random_density_with, random_hermitian_with, random_operator_with, random_pure_with, random_real_vector_with,
    random_vector_with, seeded_rng,
};
use mucs::uncertainty::covariance_table;
use mucs::{ComplexMatrix, ComplexVector, InequalityReport, Mode, OverlapTable, PairSet, QuantumState, RelationId};

use crate::error::{CliError, Result};

/// Largest operator or vector count for a sweep over every pair subset.
pub const ALL_PAIRSETS_M_MAX: usize = 6;
/// Largest operator count for the symmetric relation (it visits all `M!` orderings).
pub const SYMMETRIC_M_MAX: usize = 6;
pub const DIM_MAX: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepRelation {
    BalancedCs,
    UnbalancedCs,
    BalancedHerm,
    UnbalancedHerm,
    BalancedGen,
    UnbalancedGen,
    Multivariance,
    Symmetric,
}

impl SweepRelation {
    fn is_vector(self) -> bool {
        matches!(self, SweepRelation::BalancedCs | SweepRelation::UnbalancedCs)
    }

    fn is_unbalanced(self) -> bool {
        matches!(self, SweepRelation::UnbalancedCs | SweepRelation::UnbalancedHerm | SweepRelation::UnbalancedGen)
    }

    fn mode(self) -> Mode {
        match self {
            SweepRelation::BalancedGen | SweepRelation::UnbalancedGen => Mode::General,
            _ => Mode::Hermitian,
        }
    }
}

/// Entry field for random vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Field {
    Complex,
    Real,
}

/// Random state ensemble for operator relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateClass {
    /// Normalized random ket.
    Pure,
    /// Unit-trace density operator of random rank.
    Mixed,
    /// Density operator of random rank rescaled to trace in `[0.2, 3]`.
    Unnormalized,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub relation: SweepRelation,
    pub m: usize,
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub field: Field,
    pub state: StateClass,
    /// Fixed pair set for unbalanced relations; every nonempty pair subset
    /// is checked when absent.
    pub pairs: Option<PairSet>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if self.trials == 0 {
            return usage("--trials must be at least 1".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return usage(format!("--tol must be positive, got {}", self.tol));
        }
        if self.dim == 0 || self.dim > DIM_MAX {
            return usage(format!("--dim must be in 1..={DIM_MAX}, got {}", self.dim));
        }
        let m_max = match self.relation {
            SweepRelation::Symmetric => SYMMETRIC_M_MAX,
            r if r.is_unbalanced() && self.pairs.is_none() => ALL_PAIRSETS_M_MAX,
            _ => M_MAX,
        };
        if self.m < 2 || self.m > m_max {
            return usage(format!("-m must be in 2..={m_max} for {:?}, got {}", self.relation, self.m));
        }
        if let Some(p) = &self.pairs {
            if !self.relation.is_unbalanced() {
                return usage("--pairs only applies to unbalanced relations".into());
            }
            if p.max_index() > self.m {
                return usage(format!("--pairs references index {} but -m is {}", p.max_index(), self.m));
            }
        }
        if self.relation.is_vector() && self.state != StateClass::Pure {
            return usage("--state does not apply to vector relations".into());
        }
        if !self.relation.is_vector() && self.field != Field::Complex {
            return usage("--field only applies to vector relations".into());
        }
        if self.relation.mode() == Mode::Hermitian
            && !self.relation.is_vector()
            && !matches!(self.relation, SweepRelation::Multivariance | SweepRelation::Symmetric)
            && self.state == StateClass::Unnormalized
        {
            return usage("Hermitian relations need a normalized state; use a -gen relation".into());
        }
        Ok(())
    }
}

/// Inputs of one trial.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialInputs {
    Vectors(Vec<ComplexVector>),
    Operators { state: QuantumState, ops: Vec<ComplexMatrix> },
}

/// Regenerates the inputs of trial `trial`.
pub fn draw_trial(cfg: &SweepConfig, trial: u64) -> Result<TrialInputs> {
    let mut rng = seeded_rng(cfg.seed, trial);
    if cfg.relation.is_vector() {
        let vectors = (0..cfg.m)
            .map(|_| match cfg.field {
                Field::Complex => random_vector_with(&mut rng, cfg.dim),
                Field::Real => random_real_vector_with(&mut rng, cfg.dim),
            })
            .collect();
        return Ok(TrialInputs::Vectors(vectors));
    }
    let state = match cfg.state {
        StateClass::Pure => random_pure_with(&mut rng, cfg.dim),
        StateClass::Mixed | StateClass::Unnormalized => {
            let rank = rng.random_range(1..=cfg.dim);
            let rho = random_density_with(&mut rng, cfg.dim, rank)?;
            if cfg.state == StateClass::Unnormalized {
                rho.scaled(rng.random_range(0.2..=3.0))
            } else {
                rho
            }
        }
    };
    let ops = (0..cfg.m)
        .map(|_| match cfg.relation.mode() {
            Mode::Hermitian => random_hermitian_with(&mut rng, cfg.dim),
            Mode::General => random_operator_with(&mut rng, cfg.dim),
        })
        .collect();
    Ok(TrialInputs::Operators { state, ops })
}

/// Summary of one trial: its least-satisfied inequality and counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub checked: u64,
    pub violations: u64,
    pub worst: InequalityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
}

impl TrialOutcome {
    fn single(report: InequalityReport) -> Self {
        Self { checked: 1, violations: u64::from(!report.satisfied), worst: report, pairs: None, p: None }
    }
}

fn table_outcome(cfg: &SweepConfig, table: &OverlapTable, balanced: RelationId, unbalanced: RelationId) -> Result<TrialOutcome> {
    if !cfg.relation.is_unbalanced() {
        return Ok(TrialOutcome::single(table.balanced(balanced, cfg.tol)));
    }
    if let Some(pairs) = &cfg.pairs {
        let mut out = TrialOutcome::single(table.unbalanced(unbalanced, pairs, cfg.tol)?);
        out.pairs = Some(pairs.pairs().to_vec());
        return Ok(out);
    }
    let sweep = table.sweep_all_pairsets(cfg.tol);
    let worst_pairs = PairSet::new(table.m(), &sweep.worst)?;
    Ok(TrialOutcome {
        checked: sweep.checked,
        violations: sweep.violations,
        worst: table.unbalanced(unbalanced, &worst_pairs, cfg.tol)?,
        pairs: Some(sweep.worst),
        p: None,
    })
}

/// Evaluates the configured relation on one trial's inputs.
pub fn evaluate_trial(cfg: &SweepConfig, inputs: &TrialInputs) -> Result<TrialOutcome> {
    match inputs {
        TrialInputs::Vectors(vectors) => {
            let table = OverlapTable::from_vectors(vectors)?;
            table_outcome(cfg, &table, RelationId::BalancedCs, RelationId::UnbalancedCs)
        }
        TrialInputs::Operators { state, ops } => match cfg.relation {
            SweepRelation::Multivariance => {
                let seq = OperatorSequence::new(ops.clone())?;
                let reports = all_partitioned_relations(state, &seq, cfg.tol)?;
                let worst = reports
                    .iter()
                    .min_by(|a, b| (a.slack / a.scale).total_cmp(&(b.slack / b.scale)))
                    .expect("M >= 2 gives at least three partitions");
                Ok(TrialOutcome {
                    checked: reports.len() as u64,
                    violations: reports.iter().filter(|r| !r.satisfied).count() as u64,
                    worst: worst.to_report(cfg.tol),
                    pairs: None,
                    p: Some(worst.p),
                })
            }
            SweepRelation::Symmetric => {
                let seq = OperatorSequence::new(ops.clone())?;
                Ok(TrialOutcome::single(symmetric_relation(state, &seq, cfg.tol)?))
            }
            r => {
                let mode = r.mode();
                let table = covariance_table(state, ops, mode)?;
                table_outcome(cfg, &table, mode.balanced_id(), mode.unbalanced_id())
            }
        },
    }
}

/// Serialized trial inputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum WitnessInputs {
    Vectors { vectors: Vec<MatrixDoc> },
    Operators { state: MatrixDoc, operators: OperatorSetDoc },
}

impl WitnessInputs {
    pub fn from_inputs(inputs: &TrialInputs) -> Result<Self> {
        Ok(match inputs {
            TrialInputs::Vectors(v) => WitnessInputs::Vectors {
                vectors: v.iter().map(|x| MatrixDoc::from_state(&QuantumState::pure(x.clone()))).collect(),
            },
            TrialInputs::Operators { state, ops } => WitnessInputs::Operators {
                state: MatrixDoc::from_state(state),
                operators: OperatorSetDoc::from_matrices(ops, None)?,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub trial: u64,
    pub relative_slack: f64,
    #[serde(flatten)]
    pub outcome: TrialOutcome,
    pub inputs: WitnessInputs,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub checked: u64,
    pub violations: u64,
    pub min_relative_slack: f64,
    /// The trial with the smallest relative slack (first on ties).
    pub worst: Witness,
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|t| evaluate_trial(cfg, &draw_trial(cfg, t)?))
        .collect::<Result<Vec<_>>>()?;
    let rel = |o: &TrialOutcome| o.worst.relative_slack();
    let (worst_trial, worst) = outcomes
        .iter()
        .enumerate()
        .reduce(|a, b| if rel(b.1) < rel(a.1) { b } else { a })
        .expect("at least one trial");
    Ok(SweepReport {
        config: cfg.clone(),
        checked: outcomes.iter().map(|o| o.checked).sum(),
        violations: outcomes.iter().map(|o| o.violations).sum(),
        min_relative_slack: rel(worst),
        worst: Witness {
            trial: worst_trial as u64,
            relative_slack: rel(worst),
            outcome: worst.clone(),
            inputs: WitnessInputs::from_inputs(&draw_trial(cfg, worst_trial as u64)?)?,
        },
    })
}

/// Pair list as typed on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairList(pub Vec<(usize, usize)>);

/// Parses `"1-2,1-3"` into a pair list (orientation and order are free).
pub fn parse_pairs(text: &str) -> std::result::Result<PairList, String> {
    text.split(',')
        .map(|item| {
            let (a, b) = item.trim().split_once('-').ok_or_else(|| format!("pair `{item}` is not `j-k`"))?;
            let j = a.trim().parse().map_err(|_| format!("bad index `{a}`"))?;
            let k = b.trim().parse().map_err(|_| format!("bad index `{b}`"))?;
            Ok((j, k))
        })
        .collect::<std::result::Result<_, String>>()
        .map(PairList)
}
