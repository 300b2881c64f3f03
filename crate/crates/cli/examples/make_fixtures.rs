//! Regenerates the JSON fixtures under `tests/fixtures`.
//!
//! Run with `cargo run -p mucs-cli --example make_fixtures`.

use std::path::Path;

use mucs::fixture::{to_json, MatrixDoc, OperatorSetDoc};
use mucs::squeezing::probe_squeezing;
use mucs::statefam::{momentum_op, number_ket, position_op, random_hermitian, random_pure};
use mucs::{Mode, QuantumState, DEFAULT_TOL};

/// Seed range scanned for the 1/3 squeezing witness.
const WITNESS_SEED_START: u64 = 0;
const WITNESS_MAX_TRIES: u64 = 10_000;

fn write(dir: &Path, name: &str, text: String) {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    println!("wrote {}", path.display());
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    std::fs::create_dir_all(&dir).expect("create fixture directory");

    let a = random_hermitian(3, 11);
    let identical = OperatorSetDoc::from_matrices(&[a.clone(), a.clone(), a], None).unwrap();
    write(&dir, "identical_ops.json", to_json(&identical));
    write(&dir, "pure_state_dim3.json", to_json(&MatrixDoc::from_state(&random_pure(3, 12))));

    let xp = OperatorSetDoc::from_matrices(
        &[position_op(20, 1.0).unwrap(), momentum_op(20, 1.0).unwrap()],
        Some(vec!["x".into(), "p".into()]),
    )
    .unwrap();
    write(&dir, "position_momentum_ops.json", to_json(&xp));
    let vacuum = QuantumState::pure(number_ket(20, 0).unwrap());
    write(&dir, "vacuum_state.json", to_json(&MatrixDoc::from_state(&vacuum)));

    let w = probe_squeezing(3, 3, 1, Mode::Hermitian, WITNESS_SEED_START, WITNESS_MAX_TRIES, DEFAULT_TOL)
        .unwrap()
        .expect("no 1/3 witness in the scanned seed range");
    println!("1/3 witness at seed {}", w.seed);
    write(&dir, "witness_ops.json", to_json(&OperatorSetDoc::from_matrices(&w.ops, None).unwrap()));
    write(&dir, "witness_state.json", to_json(&MatrixDoc::from_state(&w.state)));
}
