//! Dicke-basis representations of the SU(2) generators.
//!
//! Basis ordering is ascending `m`: row/column index `k` corresponds to
//! `m = k - s`, so index 0 is `|s,-s>` and index `2s` is `|s,+s>`. Every other
//! module inherits this ordering.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported `2s`.
pub const MAX_TWICE_S: u32 = 200;

/// Hermiticity tolerance accepted by the exponential and eigen kernels.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// A spin label `s`, stored exactly as the integer `2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Spin {
    twice_s: u32,
}

impl Spin {
    pub fn new(twice_s: u32) -> Result<Self> {
        if twice_s == 0 || twice_s > MAX_TWICE_S {
            return Err(Error::InvalidSpin(twice_s));
        }
        Ok(Self { twice_s })
    }

    pub fn twice_s(self) -> u32 {
        self.twice_s
    }

    pub fn s(self) -> f64 {
        f64::from(self.twice_s) / 2.0
    }

    /// Hilbert-space dimension `2s + 1`.
    pub fn dim(self) -> usize {
        self.twice_s as usize + 1
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m(self, k: usize) -> f64 {
        k as f64 - self.s()
    }

    pub fn m_values(self) -> impl Iterator<Item = f64> {
        (0..self.dim()).map(move |k| self.m(k))
    }
}

impl TryFrom<u32> for Spin {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        Spin::new(v)
    }
}

impl From<Spin> for u32 {
    fn from(s: Spin) -> u32 {
        s.twice_s
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_s % 2 == 0 {
            write!(f, "{}", self.twice_s / 2)
        } else {
            write!(f, "{}/2", self.twice_s)
        }
    }
}

/// A `(2s+1) x (2s+1)` complex matrix tied to a spin.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinOperator {
    spin: Spin,
    matrix: CMatrix,
}

impl SpinOperator {
    pub fn from_matrix(spin: Spin, matrix: CMatrix) -> Result<Self> {
        let d = spin.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { left: d, right: matrix.nrows() });
        }
        Ok(Self { spin, matrix })
    }

    pub fn zeros(spin: Spin) -> Self {
        let d = spin.dim();
        Self { spin, matrix: CMatrix::zeros(d, d) }
    }

    pub fn identity(spin: Spin) -> Self {
        let d = spin.dim();
        Self { spin, matrix: CMatrix::identity(d, d) }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { spin: self.spin, matrix: self.matrix.adjoint() }
    }

    /// Max entrywise `|M - M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { spin: self.spin, matrix: &self.matrix * c }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { spin: self.spin, matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { spin: self.spin, matrix: &self.matrix - &other.matrix })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { spin: self.spin, matrix: &self.matrix * &other.matrix })
    }

    /// Max entrywise distance to another operator.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }

    /// Sorted real eigenvalues; fails if the operator is not Hermitian.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.matrix)?.values)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn build_sz(spin: Spin) -> SpinOperator {
    let diag = CVector::from_iterator(spin.dim(), spin.m_values().map(|m| Complex64::new(m, 0.0)));
    SpinOperator { spin, matrix: CMatrix::from_diagonal(&diag) }
}

/// Raising operator: `S+|s,m> = sqrt(s(s+1) - m(m+1)) |s,m+1>`.
pub fn build_splus(spin: Spin) -> SpinOperator {
    let d = spin.dim();
    let s = spin.s();
    let mut matrix = CMatrix::zeros(d, d);
    for k in 0..d - 1 {
        let m = spin.m(k);
        matrix[(k + 1, k)] = Complex64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    SpinOperator { spin, matrix }
}

pub fn build_sminus(spin: Spin) -> SpinOperator {
    build_splus(spin).adjoint()
}

pub fn build_sx(spin: Spin) -> SpinOperator {
    let sp = build_splus(spin);
    let matrix = (sp.matrix() + sp.matrix().adjoint()) * Complex64::new(0.5, 0.0);
    SpinOperator { spin, matrix }
}

pub fn build_sy(spin: Spin) -> SpinOperator {
    let sp = build_splus(spin);
    // (S+ - S-) / 2i
    let matrix = (sp.matrix() - sp.matrix().adjoint()) * Complex64::new(0.0, -0.5);
    SpinOperator { spin, matrix }
}

/// `AB - BA`.
pub fn commutator(a: &SpinOperator, b: &SpinOperator) -> Result<SpinOperator> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Eigendecomposition `M = U diag(values) U†` of a Hermitian matrix,
/// eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }

    /// `U f(Λ) U†` for a complex function of the eigenvalues.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let d = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..d {
            let c = f(self.values[j]);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= c);
        }
        scaled * self.vectors.adjoint()
    }
}

pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    let defect = hermiticity_defect(m);
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { defect });
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0).ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());
    Ok(HermitianEigen { values, vectors })
}

/// `exp(i ζ H)` via `H = U Λ U†`.
pub fn expi_generator(h: &SpinOperator, zeta: f64) -> Result<CMatrix> {
    let eig = hermitian_eigen(h.matrix())?;
    Ok(eig.map_spectrum(|lambda| Complex64::from_polar(1.0, zeta * lambda)))
}
