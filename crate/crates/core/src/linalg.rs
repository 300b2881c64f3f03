//! Dense complex vectors and matrices, quantum states, and expectation values.
//!
//! Everything here is double-precision and row-major. Shapes are checked on
//! every public entry point and mismatches surface as [`Error::Dimension`].

use std::ops::Index;

use nalgebra::{linalg::SymmetricEigen, DMatrix};
pub use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for Hermiticity, positivity and normalization checks.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Largest imaginary part (relative to scale) tolerated in the expectation
/// value of a Hermitian operator before it is discarded.
pub const IMAG_TOL: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Shorthand constructor for a complex number.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `max(1, |x|...)`, the magnitude scale used by every relative tolerance.
pub fn scale_of(values: &[f64]) -> f64 {
    values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Dimension("vector must have at least one entry".into()));
        }
        Ok(Self { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| c64(x, 0.0)).collect())
    }

    /// # Panics
    /// If `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Self { entries: vec![ZERO; dim] }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Index(format!("basis index {index} for dimension {dim}")));
        }
        let mut v = Self::zeros(dim);
        v.entries[index] = ONE;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product `self† · other`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        hermitian_inner(self, other)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(Self {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    /// `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(c64(1.0 / n, 0.0)))
    }

    /// Rank-one projector `|v⟩⟨v|` (unnormalized).
    pub fn outer(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| self.entries[i] * self.entries[j].conj())
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("{a} vs {b}")));
    }
    Ok(())
}

/// `Σ_i conj(u_i) v_i`.
pub fn hermitian_inner(u: &ComplexVector, v: &ComplexVector) -> Result<Complex64> {
    check_same_dim(u.dim(), v.dim())?;
    Ok(u.entries.iter().zip(&v.entries).map(|(a, b)| a.conj() * b).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("matrix shape {rows}x{cols}")));
        }
        if rows * cols != entries.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| c64(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { c64(values[i], 0.0) } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn conj(&self) -> Self {
        Self { entries: self.entries.iter().map(|z| z.conj()).collect(), ..*self }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let row = &self.entries[i * k..(i + 1) * k];
            let dst = &mut out[i * m..(i + 1) * m];
            for (l, a) in row.iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                let src = &other.entries[l * m..(l + 1) * m];
                for (d, b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Self { rows: n, cols: m, entries: out }
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} matrix to vector of dimension {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        Ok(self.mul_vec_unchecked(v))
    }

    pub(crate) fn mul_vec_unchecked(&self, v: &ComplexVector) -> ComplexVector {
        let entries = self
            .entries
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(&v.entries).map(|(a, b)| a * b).sum())
            .collect();
        ComplexVector { entries }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { entries, ..*self })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { entries: self.entries.iter().map(|z| z * factor).collect(), ..*self }
    }

    /// `self + shift·I`.
    pub fn shift_diagonal(&self, shift: Complex64) -> Result<Self> {
        self.require_square()?;
        let mut out = self.clone();
        for i in 0..self.rows {
            out.entries[i * self.cols + i] += shift;
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<Complex64> {
        self.require_square()?;
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest entry of `|A − A†|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(A + A†)/2`, exactly Hermitian by construction.
    pub fn hermitian_part(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            out.entries[i * n + i] = c64(self.get(i, i).re, 0.0);
            for j in i + 1..n {
                let z = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                out.entries[i * n + j] = z;
                out.entries[j * n + i] = z.conj();
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols)
        })
    }

    /// Eigen-decomposition of the Hermitian part: ascending eigenvalues and
    /// the matching orthonormal eigenvectors as columns.
    pub fn eigh(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let h = self.hermitian_part()?;
        let n = h.rows;
        let eig = SymmetricEigen::new(DMatrix::from_row_slice(n, n, &h.entries));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Self::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, vectors))
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigvalsh(&self) -> Result<Vec<f64>> {
        Ok(self.eigh()?.0)
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    PureKet,
    DensityOperator,
}

/// A pure ket or a density operator. Neither is required to have unit norm
/// or unit trace.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(ComplexVector),
    Density(ComplexMatrix),
}

impl QuantumState {
    pub fn pure(ket: ComplexVector) -> Self {
        Self::Pure(ket)
    }

    /// Validates Hermiticity and positivity with [`HERMITICITY_TOL`].
    pub fn density(rho: ComplexMatrix) -> Result<Self> {
        Self::density_with_tol(rho, HERMITICITY_TOL)
    }

    /// Validates `rho` and stores its Hermitian part.
    pub fn density_with_tol(rho: ComplexMatrix, tol: f64) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::Dimension(format!(
                "density operator must be square, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let defect = rho.hermiticity_defect();
        if defect > tol {
            return Err(Error::Hermiticity(format!("density operator defect {defect:e}")));
        }
        let rho = rho.hermitian_part()?;
        let eigs = rho.eigvalsh()?;
        let floor = -tol * scale_of(&eigs);
        if let Some(&lowest) = eigs.first() {
            if lowest < floor {
                return Err(Error::Positivity(format!(
                    "density operator eigenvalue {lowest:e} below {floor:e}"
                )));
            }
        }
        Ok(Self::Density(rho))
    }

    pub fn kind(&self) -> StateKind {
        match self {
            Self::Pure(_) => StateKind::PureKet,
            Self::Density(_) => StateKind::DensityOperator,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Pure(v) => v.dim(),
            Self::Density(m) => m.rows(),
        }
    }

    /// `⟨ψ|ψ⟩` or `tr ρ`.
    pub fn trace(&self) -> f64 {
        match self {
            Self::Pure(v) => v.norm_sqr(),
            Self::Density(m) => (0..m.rows()).map(|i| m.get(i, i).re).sum(),
        }
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.trace() - 1.0).abs() <= tol
    }

    pub fn as_ket(&self) -> Option<&ComplexVector> {
        match self {
            Self::Pure(v) => Some(v),
            Self::Density(_) => None,
        }
    }

    pub fn to_density_matrix(&self) -> ComplexMatrix {
        match self {
            Self::Pure(v) => v.outer(),
            Self::Density(m) => m.clone(),
        }
    }

    /// Multiplies the trace by `factor` (kets are scaled by `√factor`).
    ///
    /// # Panics
    /// If `factor` is negative.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor >= 0.0, "state scale factor must be nonnegative");
        match self {
            Self::Pure(v) => Self::Pure(v.scale(c64(factor.sqrt(), 0.0))),
            Self::Density(m) => Self::Density(m.scale(c64(factor, 0.0))),
        }
    }

    /// Unit-trace copy; `None` when the trace vanishes.
    pub fn normalized(&self) -> Option<Self> {
        let t = self.trace();
        (t > 0.0).then(|| self.scaled(1.0 / t))
    }

    pub fn expectation(&self, a: &ComplexMatrix) -> Result<Complex64> {
        Ok(self.expectation_scaled(a)?.0)
    }

    /// Expectation value together with `Σ|terms|`, the magnitude that bounds
    /// its rounding error.
    pub(crate) fn expectation_scaled(&self, a: &ComplexMatrix) -> Result<(Complex64, f64)> {
        self.check_operator(a)?;
        let n = self.dim();
        let mut sum = ZERO;
        let mut mag = 0.0;
        match self {
            Self::Pure(v) => {
                for i in 0..n {
                    let vi = v[i].conj();
                    for j in 0..n {
                        let t = vi * a.get(i, j) * v[j];
                        sum += t;
                        mag += t.norm();
                    }
                }
            }
            Self::Density(rho) => {
                for i in 0..n {
                    for j in 0..n {
                        let t = rho.get(i, j) * a.get(j, i);
                        sum += t;
                        mag += t.norm();
                    }
                }
            }
        }
        Ok((sum, mag))
    }

    /// Real expectation value of an operator assumed Hermitian; errors when
    /// the imaginary part exceeds [`IMAG_TOL`] relative to scale.
    pub(crate) fn real_expectation(&self, a: &ComplexMatrix) -> Result<f64> {
        let (z, mag) = self.expectation_scaled(a)?;
        if z.im.abs() > IMAG_TOL * scale_of(&[mag, z.re]) {
            return Err(Error::Hermiticity(format!(
                "expectation value has imaginary part {:e}",
                z.im
            )));
        }
        Ok(z.re)
    }

    pub(crate) fn check_operator(&self, a: &ComplexMatrix) -> Result<()> {
        if !a.is_square() || a.rows() != self.dim() {
            return Err(Error::Dimension(format!(
                "operator {}x{} on state of dimension {}",
                a.rows(),
                a.cols(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `tr(ρ X† Y)`, the positive semidefinite sesquilinear form induced by the
    /// state; for a ket this is `⟨Xψ|Yψ⟩`.
    pub fn sesquilinear(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<Complex64> {
        self.check_operator(x)?;
        self.check_operator(y)?;
        Ok(self.sesquilinear_unchecked(x, y))
    }

    pub(crate) fn sesquilinear_unchecked(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Complex64 {
        match self {
            Self::Pure(v) => {
                let xv = x.mul_vec_unchecked(v);
                let yv = y.mul_vec_unchecked(v);
                xv.entries.iter().zip(&yv.entries).map(|(a, b)| a.conj() * b).sum()
            }
            Self::Density(rho) => {
                // tr(ρ X† Y) = Σ_ij (Y ρ)_ij conj(X_ij)
                let y_rho = y.mul_unchecked(rho);
                y_rho.entries.iter().zip(&x.entries).map(|(a, b)| a * b.conj()).sum()
            }
        }
    }
}

/// `⟨A⟩ = ⟨ψ|A|ψ⟩` or `tr(ρA)`.
pub fn expectation(state: &QuantumState, a: &ComplexMatrix) -> Result<Complex64> {
    state.expectation(a)
}

/// `ΔA = A − ⟨A⟩·I`.
pub fn deviation(state: &QuantumState, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mean = state.expectation(a)?;
    a.shift_diagonal(-mean)
}
