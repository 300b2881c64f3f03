//! Figure grids: lhs and rhs surfaces of a relation over a two-parameter
//! state family, with pinned operator seeds.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use mucs::multivariance::{partitioned_relation, OperatorSequence};
use mucs::statefam::{one_qubit_family, random_hermitian_with, random_operator_with, seeded_rng, two_qubit_family};
use mucs::uncertainty::{covariance_table, gen_variance, variance};
use mucs::{ComplexMatrix, InequalityReport, Mode, PairSet, QuantumState, RelationId};

use crate::error::{CliError, Result};

/// Canonical operator seeds for figures 1 to 5. Figure 5 reuses figure 1's
/// operators.
pub const FIGURE_SEEDS: [u64; 5] = [1001, 1002, 1003, 1004, 1001];

/// Pairs of the three-operator unbalanced example `σ_A²σ_Bσ_C ≥ |σ²_{A,B}||σ²_{A,C}|`.
pub const UNBALANCED_EXAMPLE: [(usize, usize); 2] = [(1, 2), (1, 3)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `ρ = εΛε†` over `(θ, φ) ∈ [0, π] × [0, 2π]`.
    OneQubit,
    /// Rank-2 two-qubit states over `(ϑ, η) ∈ [0, π/4] × [0, 1]`.
    TwoQubit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: &'static str,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    /// Evenly spaced points including both ends; a single point sits at `min`.
    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * (i as f64 / (self.count - 1) as f64)
        }
    }
}

impl Family {
    pub fn dim(self) -> usize {
        match self {
            Family::OneQubit => 2,
            Family::TwoQubit => 4,
        }
    }

    pub fn axes(self, grid: (usize, usize)) -> [Axis; 2] {
        match self {
            Family::OneQubit => [
                Axis { name: "theta", min: 0.0, max: PI, count: grid.0 },
                Axis { name: "phi", min: 0.0, max: 2.0 * PI, count: grid.1 },
            ],
            Family::TwoQubit => [
                Axis { name: "vartheta", min: 0.0, max: PI / 4.0, count: grid.0 },
                Axis { name: "eta", min: 0.0, max: 1.0, count: grid.1 },
            ],
        }
    }

    pub fn state(self, p1: f64, p2: f64) -> Result<QuantumState> {
        Ok(match self {
            Family::OneQubit => one_qubit_family(p1, p2),
            Family::TwoQubit => two_qubit_family(p1, p2)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FigureKind {
    Balanced { mode: Mode },
    Unbalanced { mode: Mode },
    /// Partitioned multivariance relation split after operator `p`.
    Partition { p: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FigureSpec {
    pub id: u8,
    pub family: Family,
    pub kind: FigureKind,
    pub m: usize,
    pub default_seed: u64,
}

impl FigureSpec {
    pub fn get(id: u8) -> Result<Self> {
        let (family, kind, m) = match id {
            1 => (Family::OneQubit, FigureKind::Balanced { mode: Mode::Hermitian }, 4),
            2 => (Family::TwoQubit, FigureKind::Unbalanced { mode: Mode::Hermitian }, 3),
            3 => (Family::OneQubit, FigureKind::Balanced { mode: Mode::General }, 4),
            4 => (Family::TwoQubit, FigureKind::Unbalanced { mode: Mode::General }, 3),
            5 => (Family::OneQubit, FigureKind::Partition { p: 2 }, 4),
            _ => return Err(CliError::Usage(format!("figure must be 1..=5, got {id}"))),
        };
        Ok(Self { id, family, kind, m, default_seed: FIGURE_SEEDS[id as usize - 1] })
    }

    pub fn relation(&self) -> RelationId {
        match self.kind {
            FigureKind::Balanced { mode } => mode.balanced_id(),
            FigureKind::Unbalanced { mode } => mode.unbalanced_id(),
            FigureKind::Partition { .. } => RelationId::PartitionedMultivariance,
        }
    }

    pub fn has_tightest(&self) -> bool {
        !matches!(self.kind, FigureKind::Partition { .. })
    }

    fn mode(&self) -> Mode {
        match self.kind {
            FigureKind::Balanced { mode } | FigureKind::Unbalanced { mode } => mode,
            FigureKind::Partition { .. } => Mode::Hermitian,
        }
    }

    /// The figure's operators drawn from `seed`: Hermitian for Hermitian-mode
    /// and multivariance figures, arbitrary otherwise.
    pub fn operators(&self, seed: u64) -> Vec<ComplexMatrix> {
        let mut rng = seeded_rng(seed, 0);
        let dim = self.family.dim();
        (0..self.m)
            .map(|_| match self.mode() {
                Mode::Hermitian => random_hermitian_with(&mut rng, dim),
                Mode::General => random_operator_with(&mut rng, dim),
            })
            .collect()
    }

    /// Checks an imported operator list against the figure's shape.
    pub fn check_operators(&self, ops: &[ComplexMatrix]) -> Result<()> {
        if ops.len() != self.m {
            return Err(CliError::Usage(format!("figure {} needs {} operators, got {}", self.id, self.m, ops.len())));
        }
        if ops[0].rows() != self.family.dim() {
            return Err(CliError::Usage(format!(
                "figure {} needs {}x{} operators, got {}x{}",
                self.id,
                self.family.dim(),
                self.family.dim(),
                ops[0].rows(),
                ops[0].cols()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureRow {
    pub p1: f64,
    pub p2: f64,
    pub report: InequalityReport,
    /// Product of standard deviations from the direct moment formulas,
    /// with each operator raised to its multiplicity in the relation.
    pub tightest: Option<f64>,
}

impl FigureRow {
    /// The tightest series dominates the rhs series within `tol`.
    pub fn tightest_ok(&self, tol: f64) -> bool {
        self.tightest.map_or(true, |t| t - self.report.rhs >= -tol * self.report.scale.max(t))
    }
}

fn direct_std(state: &QuantumState, a: &ComplexMatrix, mode: Mode) -> mucs::Result<f64> {
    Ok(match mode {
        Mode::Hermitian => variance(state, a)?,
        Mode::General => gen_variance(state, a)?,
    }
    .sqrt())
}

fn evaluate_point(
    spec: &FigureSpec,
    ops: &[ComplexMatrix],
    seq: Option<&OperatorSequence>,
    state: &QuantumState,
    tol: f64,
) -> Result<(InequalityReport, Option<f64>)> {
    let pairs = PairSet::new(spec.m, &UNBALANCED_EXAMPLE)?;
    match spec.kind {
        FigureKind::Partition { p } => {
            let seq = seq.expect("partition figures carry an operator sequence");
            Ok((partitioned_relation(state, seq, p, tol)?.to_report(tol), None))
        }
        FigureKind::Balanced { mode } | FigureKind::Unbalanced { mode } => {
            let table = covariance_table(state, ops, mode)?;
            let unbalanced = matches!(spec.kind, FigureKind::Unbalanced { .. });
            let report = if unbalanced {
                table.unbalanced(mode.unbalanced_id(), &pairs, tol)?
            } else {
                table.balanced(mode.balanced_id(), tol)
            };
            let mut tightest = 1.0;
            for (j, a) in ops.iter().enumerate() {
                let power = if unbalanced { pairs.multiplicity(j + 1) } else { 1 };
                tightest *= direct_std(state, a, mode)?.powi(power as i32);
            }
            Ok((report, Some(tightest)))
        }
    }
}

/// Evaluates the figure's relation on every grid point; rows are ordered
/// with the first parameter outermost.
pub fn evaluate_grid(spec: &FigureSpec, ops: &[ComplexMatrix], grid: (usize, usize), tol: f64) -> Result<Vec<FigureRow>> {
    spec.check_operators(ops)?;
    if grid.0 == 0 || grid.1 == 0 {
        return Err(CliError::Usage("grid sides must be at least 1".into()));
    }
    let seq = match spec.kind {
        FigureKind::Partition { .. } => Some(OperatorSequence::new(ops.to_vec())?),
        _ => None,
    };
    let [a1, a2] = spec.family.axes(grid);
    (0..grid.0 * grid.1)
        .into_par_iter()
        .map(|idx| {
            let (p1, p2) = (a1.value(idx / grid.1), a2.value(idx % grid.1));
            let state = spec.family.state(p1, p2)?;
            let (report, tightest) = evaluate_point(spec, ops, seq.as_ref(), &state, tol)?;
            Ok(FigureRow { p1, p2, report, tightest })
        })
        .collect()
}

/// CSV with header `param1,param2,lhs,rhs[,tightest]` (parameter names
/// substituted) and 17 significant digits.
pub fn to_csv(spec: &FigureSpec, rows: &[FigureRow]) -> String {
    let [a1, a2] = spec.family.axes((1, 1));
    let mut out = format!("{},{},lhs,rhs", a1.name, a2.name);
    if spec.has_tightest() {
        out.push_str(",tightest");
    }
    out.push('\n');
    for r in rows {
        write!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", r.p1, r.p2, r.report.lhs, r.report.rhs).unwrap();
        if let Some(t) = r.tightest {
            write!(out, ",{t:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureMetadata {
    pub figure: u8,
    pub relation: RelationId,
    pub family: Family,
    pub kind: FigureKind,
    pub m: usize,
    pub axes: [Axis; 2],
    pub seed: u64,
    /// Operator file used instead of the seed, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operators_from: Option<String>,
    pub operators_file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(usize, usize)>>,
    pub tol: f64,
    pub rows: usize,
    pub violations: usize,
    pub tightest_violations: usize,
    pub min_relative_slack: f64,
}

impl FigureMetadata {
    pub fn new(spec: &FigureSpec, grid: (usize, usize), seed: u64, tol: f64, rows: &[FigureRow]) -> Self {
        Self {
            figure: spec.id,
            relation: spec.relation(),
            family: spec.family,
            kind: spec.kind,
            m: spec.m,
            axes: spec.family.axes(grid),
            seed,
            operators_from: None,
            operators_file: format!("figure{}_operators.json", spec.id),
            pairs: matches!(spec.kind, FigureKind::Unbalanced { .. }).then(|| UNBALANCED_EXAMPLE.to_vec()),
            tol,
            rows: rows.len(),
            violations: rows.iter().filter(|r| !r.report.satisfied).count(),
            tightest_violations: rows.iter().filter(|r| !r.tightest_ok(tol)).count(),
            min_relative_slack: rows.iter().map(|r| r.report.relative_slack()).fold(f64::INFINITY, f64::min),
        }
    }

    pub fn all_ok(&self) -> bool {
        self.violations == 0 && self.tightest_violations == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mucs::DEFAULT_TOL;

    #[test]
    fn every_figure_holds_on_a_small_grid() {
        for id in 1..=5 {
            let spec = FigureSpec::get(id).unwrap();
            let rows = evaluate_grid(&spec, &spec.operators(spec.default_seed), (7, 6), DEFAULT_TOL).unwrap();
            let meta = FigureMetadata::new(&spec, (7, 6), spec.default_seed, DEFAULT_TOL, &rows);
            assert_eq!(rows.len(), 42);
            assert!(meta.all_ok(), "figure {id}: {meta:?}");
        }
    }

    #[test]
    fn tightest_matches_lhs_for_balanced_and_unbalanced_figures() {
        for id in 1..=4 {
            let spec = FigureSpec::get(id).unwrap();
            for r in evaluate_grid(&spec, &spec.operators(spec.default_seed), (5, 5), DEFAULT_TOL).unwrap() {
                let t = r.tightest.unwrap();
                assert!((t - r.report.lhs).abs() <= 1e-12 * t.max(1.0), "figure {id}");
            }
        }
    }

    #[test]
    fn figure_five_shares_figure_one_operators() {
        let (f1, f5) = (FigureSpec::get(1).unwrap(), FigureSpec::get(5).unwrap());
        assert_eq!(f1.operators(f1.default_seed), f5.operators(f5.default_seed));
    }

    #[test]
    fn single_point_grid() {
        let spec = FigureSpec::get(2).unwrap();
        let rows = evaluate_grid(&spec, &spec.operators(1), (1, 1), DEFAULT_TOL).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].p1, rows[0].p2), (0.0, 0.0));
        let csv = to_csv(&spec, &rows);
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.starts_with("vartheta,eta,lhs,rhs,tightest\n"));
    }

    #[test]
    fn axes_include_both_ends() {
        let [a, b] = Family::TwoQubit.axes((3, 5));
        assert_eq!(a.value(2), PI / 4.0);
        assert_eq!(b.value(4), 1.0);
        assert_eq!(b.value(2), 0.5);
    }

    #[test]
    fn wrong_operator_shapes_are_rejected() {
        let spec = FigureSpec::get(1).unwrap();
        let ops = FigureSpec::get(2).unwrap().operators(3);
        assert!(matches!(evaluate_grid(&spec, &ops, (2, 2), DEFAULT_TOL), Err(CliError::Usage(_))));
        assert!(matches!(FigureSpec::get(6), Err(CliError::Usage(_))));
    }
}
