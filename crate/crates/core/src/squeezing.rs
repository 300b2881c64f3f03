//! Multi-operator squeezing: the threshold `β`, `q/M` classification, the
//! three-operator row table, region geometry, and the truncated oscillator
//! check `σ_x σ_p σ_r ≥ (τħ/2)^{3/2}`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cs_ineq::{root_of_product, OverlapTable};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix, ComplexVector, QuantumState};
use crate::report::{InequalityReport, RelationId};
use crate::statefam::{
    coherent_amplitudes, momentum_op, number_ket, position_op, random_hermitian_with, random_operator_with,
    random_pure_with, seeded_rng,
};
use crate::uncertainty::{covariance_table, std_dev, Mode};

/// Largest truncation tail accepted by [`oscillator_demo`].
pub const TAIL_LIMIT: f64 = 1e-10;

/// `β = (Π_{j<k} |σ̃²_{A_j,A_k}|)^{2/(M−1)}` from a covariance table.
pub fn beta_of_table(table: &OverlapTable) -> f64 {
    root_of_product(table.pair_moduli(), (table.m() - 1) as f64 / 2.0)
}

/// The squeezing threshold `β`, the square of the balanced relation's right side.
pub fn beta(state: &QuantumState, ops: &[ComplexMatrix], mode: Mode) -> Result<f64> {
    Ok(beta_of_table(&covariance_table(state, ops, mode)?))
}

/// `β^{1/M}`; zero when `β` is.
fn threshold_of(beta: f64, m: usize) -> f64 {
    if beta == 0.0 {
        0.0
    } else {
        beta.powf(1.0 / m as f64)
    }
}

/// Strict "below threshold" with ties (within `tol`) counted as not squeezed.
fn below(value: f64, threshold: f64, tol: f64) -> bool {
    value < threshold - tol * threshold.max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezingClassification {
    pub m: usize,
    pub mode: Mode,
    pub beta: f64,
    /// `β^{1/M}`.
    pub threshold: f64,
    pub gen_variances: Vec<f64>,
    /// 1-based indices of the squeezed operators.
    pub squeezed_indices: Vec<usize>,
    pub q: usize,
    /// `"q/M"`.
    pub label: String,
    /// Every balanced relation over every operator subset of size `2..=M`
    /// holds within tolerance.
    pub relations_ok: bool,
}

impl SqueezingClassification {
    pub fn is_squeezed(&self) -> bool {
        self.q > 0
    }
}

/// Classifies `q/M` squeezing with respect to the balanced relation in `mode`.
pub fn classify(state: &QuantumState, ops: &[ComplexMatrix], mode: Mode, tol: f64) -> Result<SqueezingClassification> {
    classify_table(&covariance_table(state, ops, mode)?, mode, tol)
}

/// [`classify`] on a precomputed covariance table.
pub fn classify_table(table: &OverlapTable, mode: Mode, tol: f64) -> Result<SqueezingClassification> {
    let m = table.m();
    let beta = beta_of_table(table);
    let threshold = threshold_of(beta, m);
    let gen_variances: Vec<f64> = table.norms().iter().map(|s| s * s).collect();
    let squeezed_indices: Vec<usize> =
        (1..=m).filter(|&j| below(gen_variances[j - 1], threshold, tol)).collect();
    let mut relations_ok = true;
    'sizes: for size in 2..=m {
        for subset in (1..=m).combinations(size) {
            if !table.subset(&subset)?.balanced(mode.balanced_id(), tol).satisfied {
                relations_ok = false;
                break 'sizes;
            }
        }
    }
    let q = squeezed_indices.len();
    Ok(SqueezingClassification {
        m,
        mode,
        beta,
        threshold,
        gen_variances,
        squeezed_indices,
        q,
        label: format!("{q}/{m}"),
        relations_ok,
    })
}

/// Regions of the three-variance space for fixed `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Impossible,
    TwoThirds,
    OneThird,
    NoSqueezing,
}

impl Region {
    /// Region for `count` variances below the threshold.
    pub fn from_count(count: usize) -> Self {
        match count {
            0 => Region::NoSqueezing,
            1 => Region::OneThird,
            2 => Region::TwoThirds,
            _ => Region::Impossible,
        }
    }
}

/// Counts coordinates below `β^{1/3}` (same tie rule as [`classify`]).
pub fn fig6_region(variances: [f64; 3], beta: f64, tol: f64) -> Region {
    let t = threshold_of(beta, 3);
    Region::from_count(variances.iter().filter(|&&v| below(v, t, tol)).count())
}

/// Rows of the three-operator squeezing table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowLabel {
    ThreeThirdsImpossible,
    TwoThirdsAB,
    TwoThirdsAC,
    TwoThirdsBC,
    OneThirdA,
    OneThirdB,
    OneThirdC,
    NoSqueezing,
}

impl RowLabel {
    pub const ALL: [RowLabel; 8] = [
        RowLabel::ThreeThirdsImpossible,
        RowLabel::TwoThirdsAB,
        RowLabel::TwoThirdsAC,
        RowLabel::TwoThirdsBC,
        RowLabel::OneThirdA,
        RowLabel::OneThirdB,
        RowLabel::OneThirdC,
        RowLabel::NoSqueezing,
    ];

    /// Number of squeezed operators the row describes.
    pub fn q(self) -> usize {
        match self {
            RowLabel::ThreeThirdsImpossible => 3,
            RowLabel::TwoThirdsAB | RowLabel::TwoThirdsAC | RowLabel::TwoThirdsBC => 2,
            RowLabel::OneThirdA | RowLabel::OneThirdB | RowLabel::OneThirdC => 1,
            RowLabel::NoSqueezing => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideCondition {
    pub description: String,
    pub holds: bool,
}

/// One instantiated table row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub label: RowLabel,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
    /// `(σ̃²_A, σ̃²_B, σ̃²_C)`.
    pub variances: [f64; 3],
    /// `(σ̃²_Aσ̃²_B, σ̃²_Aσ̃²_C, σ̃²_Bσ̃²_C)`.
    pub pair_products: [f64; 3],
    /// `(|σ̃²_{A,B}|, |σ̃²_{A,C}|, |σ̃²_{B,C}|)` supplied by the caller.
    pub pair_moduli: [f64; 3],
    /// `pair_products[i] ≥ pair_moduli[i]`.
    pub pair_checks: [bool; 3],
    pub side_conditions: Vec<SideCondition>,
    /// `Π variances ≥ β`.
    pub product_ok: bool,
    /// Informational: `Π pair_moduli = β`.
    pub beta_matches_moduli: bool,
    pub feasible: bool,
}

fn ge(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs >= rhs - tol * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Fills a table row's closed-form variances and pair products for factors
/// `a, b, c` and evaluates its constraints against `pair_moduli`.
pub fn table1_row(label: RowLabel, a: f64, b: f64, c: f64, beta: f64, pair_moduli: [f64; 3], tol: f64) -> Result<Table1Row> {
    let factors_ok = if label == RowLabel::NoSqueezing {
        [a, b, c].iter().all(|&x| x >= 1.0)
    } else {
        [a, b, c].iter().all(|&x| x > 1.0)
    };
    if !factors_ok || [a, b, c].iter().any(|x| !x.is_finite()) {
        return Err(Error::Parameter(format!("factors a={a}, b={b}, c={c} out of range for {label:?}")));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::Parameter(format!("beta {beta} must be finite and nonnegative")));
    }
    if pair_moduli.iter().any(|m| m.is_nan() || *m < 0.0) {
        return Err(Error::Parameter("pair moduli must be nonnegative".into()));
    }
    let t = beta.cbrt();
    let t2 = t * t;
    let beta_ge_one = || SideCondition { description: "beta >= 1".into(), holds: beta >= 1.0 };
    let modulus_floor = |name: &str, modulus: f64, factor: f64| SideCondition {
        description: format!("|cov_{name}| >= {factor} * beta^(-1/3)"),
        holds: beta > 0.0 && ge(modulus, factor / t, tol),
    };
    let [m_ab, m_ac, m_bc] = pair_moduli;
    let (variances, pair_products, side_conditions) = match label {
        RowLabel::ThreeThirdsImpossible => (
            [t / a, t / b, t / c],
            [t2 / (a * b), t2 / (a * c), t2 / (b * c)],
            vec![SideCondition { description: "impossible".into(), holds: false }],
        ),
        RowLabel::TwoThirdsAB => ([t / a, t / b, a * b * t], [t2 / (a * b), b * t2, a * t2], vec![beta_ge_one()]),
        RowLabel::TwoThirdsAC => ([t / a, a * c * t, t / c], [c * t2, t2 / (a * c), a * t2], vec![beta_ge_one()]),
        RowLabel::TwoThirdsBC => ([b * c * t, t / b, t / c], [c * t2, b * t2, t2 / (b * c)], vec![beta_ge_one()]),
        RowLabel::OneThirdA => (
            [t / (b * c), b * t, c * t],
            [t2 / c, t2 / b, b * c * t2],
            vec![beta_ge_one(), modulus_floor("BC", m_bc, b * c)],
        ),
        RowLabel::OneThirdB => (
            [a * t, t / (a * c), c * t],
            [t2 / c, a * c * t2, t2 / a],
            vec![beta_ge_one(), modulus_floor("AC", m_ac, a * c)],
        ),
        RowLabel::OneThirdC => (
            [a * t, b * t, t / (a * b)],
            [a * b * t2, t2 / b, t2 / a],
            vec![beta_ge_one(), modulus_floor("AB", m_ab, a * b)],
        ),
        RowLabel::NoSqueezing => ([a * t, b * t, c * t], [a * b * t2, a * c * t2, b * c * t2], vec![]),
    };
    let pair_checks = [0, 1, 2].map(|i| ge(pair_products[i], pair_moduli[i], tol));
    let product_ok = ge(variances.iter().product(), beta, tol);
    let beta_matches_moduli = (pair_moduli.iter().product::<f64>() - beta).abs() <= tol * beta.max(1.0);
    let feasible = label != RowLabel::ThreeThirdsImpossible
        && product_ok
        && pair_checks.iter().all(|&ok| ok)
        && side_conditions.iter().all(|s| s.holds);
    Ok(Table1Row {
        label,
        a,
        b,
        c,
        beta,
        variances,
        pair_products,
        pair_moduli,
        pair_checks,
        side_conditions,
        product_ok,
        beta_matches_moduli,
        feasible,
    })
}

/// Oscillator states available to [`oscillator_demo`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateSpec {
    Vacuum,
    Coherent(Complex64),
    Number(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorReport {
    pub report: InequalityReport,
    /// Probability on the top Fock level plus everything cut off above it.
    pub tail: f64,
    pub sigma_x: f64,
    pub sigma_p: f64,
    pub sigma_r: f64,
    pub fock_dim: usize,
    pub hbar: f64,
}

/// `(τħ/2)^{3/2}` with `τ = √(4/3)`.
pub fn oscillator_bound(hbar: f64) -> f64 {
    ((4.0_f64 / 3.0).sqrt() * hbar / 2.0).powf(1.5)
}

/// Unit ket for `spec` in a `dim`-level truncation and its tail weight.
fn oscillator_ket(dim: usize, spec: StateSpec) -> Result<(ComplexVector, f64)> {
    match spec {
        StateSpec::Vacuum => Ok((number_ket(dim, 0)?, 0.0)),
        StateSpec::Number(n) => {
            if n + 1 >= dim {
                return Err(Error::Truncation(format!("number state {n} needs at least {} levels, got {dim}", n + 2)));
            }
            Ok((number_ket(dim, n)?, 0.0))
        }
        StateSpec::Coherent(alpha) => {
            let amps = coherent_amplitudes(dim, alpha)?;
            // |c_{dim−1}|² plus the mass beyond the truncation, summed until the
            // terms are negligible past the distribution's peak at |α|².
            let mut c = amps[dim - 1];
            let mut tail = c.norm_sqr();
            let mut n = dim;
            loop {
                c = c * alpha / (n as f64).sqrt();
                let w = c.norm_sqr();
                tail += w;
                if (n as f64 > alpha.norm_sqr() && w <= tail * 1e-17) || w == 0.0 || n > dim + 100_000 {
                    break;
                }
                n += 1;
            }
            let ket = amps.normalized().ok_or_else(|| Error::Truncation("coherent state has no weight in range".into()))?;
            Ok((ket, tail))
        }
    }
}

/// Evaluates `σ_x σ_p σ_r ≥ (τħ/2)^{3/2}` with `r = −x − p` on a truncated
/// Fock space.
pub fn oscillator_demo(fock_dim: usize, hbar: f64, spec: StateSpec, tol: f64) -> Result<OscillatorReport> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::Parameter(format!("hbar {hbar} must be positive")));
    }
    let x = position_op(fock_dim, hbar)?;
    let p = momentum_op(fock_dim, hbar)?;
    let (ket, tail) = oscillator_ket(fock_dim, spec)?;
    if tail >= TAIL_LIMIT {
        return Err(Error::Truncation(format!(
            "{tail:e} at {fock_dim} levels exceeds {TAIL_LIMIT:e}"
        )));
    }
    let r = x.add(&p)?.scale((-1.0).into());
    let state = QuantumState::pure(ket);
    let (sigma_x, sigma_p, sigma_r) = (std_dev(&state, &x)?, std_dev(&state, &p)?, std_dev(&state, &r)?);
    let report = InequalityReport::evaluate(
        RelationId::TripleOscillator,
        sigma_x * sigma_p * sigma_r,
        oscillator_bound(hbar),
        tol,
    );
    Ok(OscillatorReport { report, tail, sigma_x, sigma_p, sigma_r, fock_dim, hbar })
}

/// A random state and operator set reaching a requested squeezing count.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezingWitness {
    pub seed: u64,
    pub state: QuantumState,
    pub ops: Vec<ComplexMatrix>,
    pub classification: SqueezingClassification,
}

/// Draws random pure states and operator sets from seeds
/// `seed_start, seed_start + 1, …` until one classifies as `target_q/M`
/// with all subset relations intact. Finding nothing says nothing about
/// existence.
pub fn probe_squeezing(
    m: usize,
    dim: usize,
    target_q: usize,
    mode: Mode,
    seed_start: u64,
    max_tries: u64,
    tol: f64,
) -> Result<Option<SqueezingWitness>> {
    if m < 2 || target_q >= m {
        return Err(Error::Arity(format!("target {target_q}/{m} is outside 0..M with M >= 2")));
    }
    for seed in seed_start..seed_start.saturating_add(max_tries) {
        let mut rng = seeded_rng(seed, 0);
        let state = random_pure_with(&mut rng, dim);
        let ops: Vec<ComplexMatrix> = (0..m)
            .map(|_| match mode {
                Mode::Hermitian => random_hermitian_with(&mut rng, dim),
                Mode::General => random_operator_with(&mut rng, dim),
            })
            .collect();
        let classification = classify(&state, &ops, mode, tol)?;
        if classification.q == target_q && classification.relations_ok && classification.beta > 0.0 {
            return Ok(Some(SqueezingWitness { seed, state, ops, classification }));
        }
    }
    Ok(None)
}
