//! Squeezing classification of an operator file against a state file or a
//! built-in state family.

use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use mucs::fixture::{parse_operator_set, parse_state};
use mucs::squeezing::{classify, SqueezingClassification};
use mucs::statefam::{one_qubit_family, two_qubit_family};
use mucs::{Mode, QuantumState};

use crate::error::{CliError, Result};
use crate::read_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    /// Parameters `theta`, `phi`.
    OneQubit,
    /// Parameters `vartheta`, `eta`.
    TwoQubit,
}

/// Where the state comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSource<'a> {
    File(&'a Path),
    Family { family: FamilyName, p1: f64, p2: f64 },
}

impl StateSource<'_> {
    pub fn load(&self) -> Result<QuantumState> {
        match self {
            StateSource::File(path) => Ok(parse_state(&read_file(path)?)?),
            StateSource::Family { family: FamilyName::OneQubit, p1, p2 } => Ok(one_qubit_family(*p1, *p2)),
            StateSource::Family { family: FamilyName::TwoQubit, p1, p2 } => Ok(two_qubit_family(*p1, *p2)?),
        }
    }
}

pub fn run_squeeze(ops_file: &Path, source: &StateSource, mode: Mode, tol: f64) -> Result<SqueezingClassification> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let ops = parse_operator_set(&read_file(ops_file)?)?;
    let state = source.load()?;
    if ops.len() < 2 {
        return Err(CliError::Usage(format!("squeezing needs at least 2 operators, got {}", ops.len())));
    }
    if ops[0].rows() != state.dim() {
        return Err(CliError::Usage(format!("operator dim {} does not match state dim {}", ops[0].rows(), state.dim())));
    }
    Ok(classify(&state, &ops, mode, tol)?)
}
