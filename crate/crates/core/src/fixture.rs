//! JSON import and export of matrices, states and operator sets.
//!
//! Every matrix or state is stored as `{dim, kind, entries}` with `entries`
//! a row-major list of `[re, im]` pairs: `dim` entries for a `pure-ket`,
//! `dim²` for a `density-operator` or an `operator`. An operator set is
//! `{"operators": [...], "labels": [...]}` with optional labels.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, Complex64, ComplexMatrix, ComplexVector, QuantumState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    PureKet,
    DensityOperator,
    Operator,
}

/// Serialized form of a ket, density operator or operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub dim: usize,
    pub kind: EntryKind,
    pub entries: Vec<[f64; 2]>,
}

/// Serialized operator list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSetDoc {
    pub operators: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), message: message.into() }
}

fn pack(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn unpack(doc: &MatrixDoc, path: &str) -> Result<Vec<Complex64>> {
    if doc.dim == 0 {
        return Err(schema(format!("{path}dim"), "dim must be at least 1"));
    }
    let expected = match doc.kind {
        EntryKind::PureKet => doc.dim,
        EntryKind::DensityOperator | EntryKind::Operator => doc.dim * doc.dim,
    };
    if doc.entries.len() != expected {
        return Err(schema(
            format!("{path}entries"),
            format!("expected {expected} entries for {:?} of dim {}, got {}", doc.kind, doc.dim, doc.entries.len()),
        ));
    }
    if let Some(i) = doc.entries.iter().position(|e| !e[0].is_finite() || !e[1].is_finite()) {
        return Err(schema(format!("{path}entries[{i}]"), "entries must be finite"));
    }
    Ok(doc.entries.iter().map(|e| c64(e[0], e[1])).collect())
}

impl MatrixDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("cannot export a {}x{} matrix as an operator", m.rows(), m.cols())));
        }
        Ok(Self { dim: m.rows(), kind: EntryKind::Operator, entries: pack(m.entries()) })
    }

    pub fn from_state(state: &QuantumState) -> Self {
        match state {
            QuantumState::Pure(v) => Self { dim: v.dim(), kind: EntryKind::PureKet, entries: pack(v.entries()) },
            QuantumState::Density(rho) => {
                Self { dim: rho.rows(), kind: EntryKind::DensityOperator, entries: pack(rho.entries()) }
            }
        }
    }

    /// Reads an operator; `kind` must be `operator`.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        self.to_matrix_at("")
    }

    fn to_matrix_at(&self, path: &str) -> Result<ComplexMatrix> {
        if self.kind != EntryKind::Operator {
            return Err(schema(format!("{path}kind"), format!("expected `operator`, got {:?}", self.kind)));
        }
        ComplexMatrix::new(self.dim, self.dim, unpack(self, path)?)
    }

    /// Reads a state; `kind` must be `pure-ket` or `density-operator`.
    /// Density operators are checked for Hermiticity and positivity.
    pub fn to_state(&self) -> Result<QuantumState> {
        match self.kind {
            EntryKind::PureKet => Ok(QuantumState::pure(ComplexVector::new(unpack(self, "")?)?)),
            EntryKind::DensityOperator => QuantumState::density(ComplexMatrix::new(self.dim, self.dim, unpack(self, "")?)?),
            EntryKind::Operator => Err(schema("kind", "expected `pure-ket` or `density-operator`, got Operator")),
        }
    }
}

impl OperatorSetDoc {
    pub fn from_matrices(ops: &[ComplexMatrix], labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != ops.len() {
                return Err(Error::Arity(format!("{} labels for {} operators", l.len(), ops.len())));
            }
        }
        Ok(Self { operators: ops.iter().map(MatrixDoc::from_matrix).collect::<Result<_>>()?, labels })
    }

    pub fn to_matrices(&self) -> Result<Vec<ComplexMatrix>> {
        if let Some(l) = &self.labels {
            if l.len() != self.operators.len() {
                return Err(schema("labels", format!("{} labels for {} operators", l.len(), self.operators.len())));
            }
        }
        let ops = self
            .operators
            .iter()
            .enumerate()
            .map(|(i, d)| d.to_matrix_at(&format!("operators[{i}].")))
            .collect::<Result<Vec<_>>>()?;
        if let Some(i) = ops.iter().position(|o| o.rows() != ops[0].rows()) {
            return Err(schema(
                format!("operators[{i}].dim"),
                format!("dim {} differs from operators[0].dim {}", ops[i].rows(), ops[0].rows()),
            ));
        }
        Ok(ops)
    }
}

/// Parses JSON into `T`, reporting the failing field path on error.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner().to_string())
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("fixture types always serialize");
    s.push('\n');
    s
}

pub fn parse_state(text: &str) -> Result<QuantumState> {
    from_json::<MatrixDoc>(text)?.to_state()
}

pub fn parse_operator(text: &str) -> Result<ComplexMatrix> {
    from_json::<MatrixDoc>(text)?.to_matrix()
}

pub fn parse_operator_set(text: &str) -> Result<Vec<ComplexMatrix>> {
    from_json::<OperatorSetDoc>(text)?.to_matrices()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statefam::{random_density, random_hermitian, random_operator, random_pure};

    #[test]
    fn states_round_trip_exactly() {
        for state in [random_pure(5, 1), random_density(4, 2, 3).unwrap(), random_density(3, 3, 4).unwrap().scaled(2.5)] {
            let text = to_json(&MatrixDoc::from_state(&state));
            assert_eq!(parse_state(&text).unwrap(), state);
        }
    }

    #[test]
    fn operator_sets_round_trip_exactly() {
        let ops = vec![random_hermitian(3, 1), random_operator(3, 2)];
        let doc = OperatorSetDoc::from_matrices(&ops, Some(vec!["A".into(), "B".into()])).unwrap();
        assert_eq!(parse_operator_set(&to_json(&doc)).unwrap(), ops);
    }

    #[test]
    fn schema_errors_carry_paths() {
        let bad_kind = r#"{"operators": [{"dim": 1, "kind": "operator", "entries": [[1, 0]]},
                                          {"dim": 1, "kind": "matrix", "entries": [[1, 0]]}]}"#;
        match parse_operator_set(bad_kind) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "operators[1].kind"),
            other => panic!("{other:?}"),
        }
        let short = r#"{"operators": [{"dim": 2, "kind": "operator", "entries": [[1, 0]]}]}"#;
        match parse_operator_set(short) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "operators[0].entries"),
            other => panic!("{other:?}"),
        }
        let bad_entry = r#"{"dim": 2, "kind": "pure-ket", "entries": [[1, 0], [0]]}"#;
        match parse_state(bad_entry) {
            Err(Error::Schema { path, .. }) => assert!(path.starts_with("entries[1]"), "{path}"),
            other => panic!("{other:?}"),
        }
        let mixed_dims = r#"{"operators": [{"dim": 1, "kind": "operator", "entries": [[1, 0]]},
                                            {"dim": 2, "kind": "operator", "entries": [[1,0],[0,0],[0,0],[1,0]]}]}"#;
        match parse_operator_set(mixed_dims) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "operators[1].dim"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_state(r#"{"dim": 1, "kind": "pure-ket"}"#), Err(Error::Schema { .. })));
        assert!(matches!(
            parse_state(r#"{"dim": 1, "kind": "pure-ket", "entries": [[1, 0]], "extra": 1}"#),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn density_documents_are_validated() {
        let not_psd = r#"{"dim": 2, "kind": "density-operator", "entries": [[1,0],[0,0],[0,0],[-1,0]]}"#;
        assert!(matches!(parse_state(not_psd), Err(Error::Positivity(_))));
        let not_herm = r#"{"dim": 2, "kind": "density-operator", "entries": [[1,0],[1,0],[0,0],[1,0]]}"#;
        assert!(matches!(parse_state(not_herm), Err(Error::Hermiticity(_))));
        assert!(matches!(
            parse_state(r#"{"dim": 1, "kind": "operator", "entries": [[1, 0]]}"#),
            Err(Error::Schema { .. })
        ));
    }
}
