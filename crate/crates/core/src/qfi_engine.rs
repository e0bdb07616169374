//! Numeric QFI by three independent routes: pure-state variance, symmetric
//! logarithmic derivative, and the fidelity finite difference.
//!
//! Phase families are `|psi_zeta> = exp(i zeta H) |psi>`. The QFI does not
//! depend on the sign convention of the exponent.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coherent_states::{cat_state, CatParams, StateVector};
use crate::error::{Error, Result};
use crate::spin_algebra::{
    build_sx, build_sy, build_sz, hermitian_eigen, hermiticity_defect, CMatrix, CVector, HermitianEigen, Spin,
    SpinOperator,
};

/// QFI at or below this value yields a divergent bound.
pub const QFI_FLOOR: f64 = 1e-10;
/// Central-difference step for `d rho / d zeta`.
pub const SLD_STEP: f64 = 1e-5;
/// Step of the fidelity finite difference.
pub const FIDELITY_STEP: f64 = 1e-4;
/// Eigenvalue pairs with `p_i + p_j` below this are dropped.
pub const SUPPORT_TOL: f64 = 1e-10;

const NORM_TOL: f64 = 1e-9;
const DENSITY_TOL: f64 = 1e-9;
const NEGATIVE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorTag {
    Sx,
    Sy,
    Sz,
}

impl GeneratorTag {
    pub const ALL: [GeneratorTag; 3] = [GeneratorTag::Sx, GeneratorTag::Sy, GeneratorTag::Sz];

    pub fn operator(self, spin: Spin) -> SpinOperator {
        match self {
            GeneratorTag::Sx => build_sx(spin),
            GeneratorTag::Sy => build_sy(spin),
            GeneratorTag::Sz => build_sz(spin),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorTag::Sx => "sx",
            GeneratorTag::Sy => "sy",
            GeneratorTag::Sz => "sz",
        }
    }
}

impl fmt::Display for GeneratorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeneratorTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sx" | "x" => Ok(GeneratorTag::Sx),
            "sy" | "y" => Ok(GeneratorTag::Sy),
            "sz" | "z" => Ok(GeneratorTag::Sz),
            _ => Err(Error::Parse(format!("unknown generator '{s}' (expected sx, sy or sz)"))),
        }
    }
}

/// A Cramér–Rao bound: finite, or divergent when the QFI vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CrbValue {
    Finite(f64),
    Divergent,
}

impl CrbValue {
    /// `f64::INFINITY` for a divergent bound.
    pub fn value(self) -> f64 {
        match self {
            CrbValue::Finite(v) => v,
            CrbValue::Divergent => f64::INFINITY,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, CrbValue::Divergent)
    }
}

impl fmt::Display for CrbValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrbValue::Finite(v) => write!(f, "{v}"),
            CrbValue::Divergent => f.write_str("inf"),
        }
    }
}

/// `1 / sqrt(n F)`, divergent for `F <= QFI_FLOOR`.
pub fn crb(qfi: f64, n: u64) -> CrbValue {
    if qfi > QFI_FLOOR && n > 0 {
        CrbValue::Finite(1.0 / (n as f64 * qfi).sqrt())
    } else {
        CrbValue::Divergent
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QcrbResult {
    pub qfi: f64,
    pub crb: CrbValue,
    pub repetitions: u64,
}

impl QcrbResult {
    pub fn new(qfi: f64, repetitions: u64) -> Self {
        Self { qfi, crb: crb(qfi, repetitions), repetitions }
    }
}

fn check_pair(state: &StateVector, h: &SpinOperator) -> Result<()> {
    if state.amplitudes().len() != h.dim() {
        return Err(Error::DimensionMismatch { left: state.amplitudes().len(), right: h.dim() });
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Pure-state QFI `4 (<H^2> - <H>^2)`.
pub fn qfi_pure(state: &StateVector, h: &SpinOperator) -> Result<f64> {
    check_pair(state, h)?;
    let hv = h.matrix() * state.amplitudes();
    let mean = state.amplitudes().dotc(&hv).re;
    let second = hv.norm_squared();
    Ok((4.0 * (second - mean * mean)).max(0.0))
}

/// `exp(i zeta H) |psi>`.
pub fn evolved_state(state: &StateVector, h: &SpinOperator, zeta: f64) -> Result<StateVector> {
    check_pair(state, h)?;
    PhaseFamily::new(state.clone(), h)?.state_at(zeta)
}

/// The one-parameter family `exp(i zeta H) |psi>`, with `H` diagonalized once.
#[derive(Clone, Debug)]
pub struct PhaseFamily {
    spin: Spin,
    generator: SpinOperator,
    eigen: HermitianEigen,
    /// `U^dagger |psi>`.
    coords: CVector,
}

impl PhaseFamily {
    pub fn new(state: StateVector, h: &SpinOperator) -> Result<Self> {
        check_pair(&state, h)?;
        let eigen = hermitian_eigen(h.matrix())?;
        let coords = eigen.vectors.adjoint() * state.amplitudes();
        Ok(Self { spin: state.spin(), generator: h.clone(), eigen, coords })
    }

    pub fn cat(params: &CatParams, tag: GeneratorTag) -> Result<Self> {
        Self::new(cat_state(params)?, &tag.operator(params.spin))
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn generator(&self) -> &SpinOperator {
        &self.generator
    }

    pub fn state_at(&self, zeta: f64) -> Result<StateVector> {
        let phased = CVector::from_iterator(
            self.coords.len(),
            self.coords.iter().zip(&self.eigen.values).map(|(c, &l)| c * Complex64::from_polar(1.0, zeta * l)),
        );
        StateVector::new(self.spin, &self.eigen.vectors * phased)
    }

    pub fn density_at(&self, zeta: f64) -> Result<CMatrix> {
        Ok(self.state_at(zeta)?.density_matrix())
    }

    /// Central difference `(rho(z+d) - rho(z-d)) / 2d`.
    pub fn density_derivative(&self, zeta: f64, delta: f64) -> Result<CMatrix> {
        let plus = self.density_at(zeta + delta)?;
        let minus = self.density_at(zeta - delta)?;
        Ok((plus - minus) / Complex64::new(2.0 * delta, 0.0))
    }

    /// QFI of the family by the variance route (independent of `zeta`).
    pub fn qfi_pure(&self) -> Result<f64> {
        qfi_pure(&self.state_at(0.0)?, &self.generator)
    }
}

fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Symmetric logarithmic derivative `L` solving `d rho = (L rho + rho L)/2`
/// on the support of `rho`, returned in the original basis.
pub fn sld_operator(rho: &CMatrix, drho: &CMatrix) -> Result<CMatrix> {
    if rho.shape() != drho.shape() {
        return Err(Error::DimensionMismatch { left: rho.nrows(), right: drho.nrows() });
    }
    let tr = trace(rho);
    if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
        return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
    }
    let defect = hermiticity_defect(drho);
    if defect > DENSITY_TOL {
        return Err(Error::InvalidDensity(format!("derivative is not Hermitian (defect {defect:e})")));
    }
    let dtr = trace(drho).norm();
    if dtr > DENSITY_TOL {
        return Err(Error::InvalidDensity(format!("derivative has trace {dtr:e}")));
    }
    let eig = hermitian_eigen(rho)?;
    if let Some(&p) = eig.values.iter().find(|&&p| p < -NEGATIVE_TOL) {
        return Err(Error::NegativeEigenvalue(p));
    }
    let u = &eig.vectors;
    let d_eig = u.adjoint() * drho * u;
    let n = eig.values.len();
    let mut l = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let denom = eig.values[i] + eig.values[j];
            if denom > SUPPORT_TOL {
                l[(i, j)] = d_eig[(i, j)] * (2.0 / denom);
            }
        }
    }
    Ok(u * l * u.adjoint())
}

/// `Tr[rho L^2]` with `rho = |psi_z0><psi_z0|` and a finite-difference
/// derivative of step [`SLD_STEP`].
pub fn qfi_sld(family: &PhaseFamily, zeta0: f64) -> Result<f64> {
    qfi_sld_with_step(family, zeta0, SLD_STEP)
}

pub fn qfi_sld_with_step(family: &PhaseFamily, zeta0: f64, delta: f64) -> Result<f64> {
    let rho = family.density_at(zeta0)?;
    let drho = family.density_derivative(zeta0, delta)?;
    let l = sld_operator(&rho, &drho)?;
    Ok(trace(&(&rho * &l * &l)).re.max(0.0))
}

/// QFI of `rho = sum p_i |i><i|` under `exp(i zeta H)`:
/// `sum 4 p_i <i|H^2|i> - sum 8 p_i p_j / (p_i + p_j) |<i|H|j>|^2`.
pub fn qfi_spectral_unitary(spectrum: &HermitianEigen, h: &SpinOperator) -> Result<f64> {
    let p = &spectrum.values;
    if p.len() != h.dim() || spectrum.vectors.nrows() != h.dim() {
        return Err(Error::DimensionMismatch { left: h.dim(), right: p.len() });
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > DENSITY_TOL {
        return Err(Error::InvalidSpectrum { total });
    }
    let u = &spectrum.vectors;
    let hm = u.adjoint() * h.matrix() * u;
    let h2 = &hm * &hm;
    let mut f = 0.0;
    for i in 0..p.len() {
        f += 4.0 * p[i] * h2[(i, i)].re;
        for j in 0..p.len() {
            let denom = p[i] + p[j];
            if denom > SUPPORT_TOL {
                f -= 8.0 * p[i] * p[j] / denom * hm[(i, j)].norm_sqr();
            }
        }
    }
    Ok(f.max(0.0))
}

/// `8 (1 - |<psi_z0|psi_z0+d>|) / d^2`, with an `O(d^2)` bias.
pub fn qfi_fidelity_fd(family: &PhaseFamily, zeta0: f64, delta: f64) -> Result<f64> {
    if !(1e-6..=1e-2).contains(&delta) {
        return Err(Error::InvalidStep(delta));
    }
    let a = family.state_at(zeta0)?;
    let b = family.state_at(zeta0 + delta)?;
    let fid = a.inner(&b)?.norm().min(1.0);
    Ok(8.0 * (1.0 - fid) / (delta * delta))
}
