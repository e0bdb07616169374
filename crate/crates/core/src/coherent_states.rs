//! Spin coherent states, their overlaps, cat superpositions and NOON states.
//!
//! States are always built from the trigonometric product form so that the
//! south pole `theta = pi` is regular. The stereographic `z` form exists only
//! as a validation path.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin_algebra::{CMatrix, CVector, Spin, SpinOperator};

/// Closeness to the south pole below which the `z` parametrization is refused.
pub const POLE_GUARD: f64 = 1e-6;

/// Squared-norm threshold below which two components are considered to cancel.
pub const DEGENERACY_TOL: f64 = 1e-12;

const NORM_TOL: f64 = 1e-9;
const ANGLE_SLACK: f64 = 1e-12;

/// A point on the Bloch sphere, polar angle `theta` and azimuth `phi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    theta: f64,
    phi: f64,
}

impl BlochPoint {
    /// `phi` is reduced into `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(-ANGLE_SLACK..=PI + ANGLE_SLACK).contains(&theta) {
            return Err(Error::InvalidAngle { name: "theta", value: theta });
        }
        if !phi.is_finite() {
            return Err(Error::InvalidAngle { name: "phi", value: phi });
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { theta: theta.clamp(0.0, PI), phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(cos(theta/2), sin(theta/2))`.
    pub fn half_angles(&self) -> (f64, f64) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        (c, s)
    }
}

/// Two Bloch points and a spin: the data of a two-component cat state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatParams {
    pub spin: Spin,
    pub p1: BlochPoint,
    pub p2: BlochPoint,
}

impl CatParams {
    pub fn new(spin: Spin, p1: BlochPoint, p2: BlochPoint) -> Self {
        Self { spin, p1, p2 }
    }

    pub fn from_angles(spin: Spin, theta1: f64, phi1: f64, theta2: f64, phi2: f64) -> Result<Self> {
        Ok(Self { spin, p1: BlochPoint::new(theta1, phi1)?, p2: BlochPoint::new(theta2, phi2)? })
    }

    /// Relative azimuth `phi1 - phi2`.
    pub fn big_phi(&self) -> f64 {
        self.p1.phi - self.p2.phi
    }

    pub fn swapped(&self) -> Self {
        Self { spin: self.spin, p1: self.p2, p2: self.p1 }
    }
}

/// Unit-norm amplitude vector over the Dicke basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    spin: Spin,
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(spin: Spin, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::DimensionMismatch { left: spin.dim(), right: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { spin, amplitudes })
    }

    /// Rescale an arbitrary nonzero vector to unit norm.
    pub fn normalized(spin: Spin, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::DimensionMismatch { left: spin.dim(), right: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if norm * norm < DEGENERACY_TOL {
            return Err(Error::DegenerateSuperposition { denominator: norm * norm });
        }
        Ok(Self { spin, amplitudes: amplitudes / Complex64::new(norm, 0.0) })
    }

    /// The Dicke state `|s, m>` with `m = k - s`.
    pub fn basis(spin: Spin, k: usize) -> Result<Self> {
        if k >= spin.dim() {
            return Err(Error::DimensionMismatch { left: spin.dim(), right: k });
        }
        let mut v = CVector::zeros(spin.dim());
        v[k] = Complex64::new(1.0, 0.0);
        Ok(Self { spin, amplitudes: v })
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_dim(other.amplitudes.len())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `<psi|M|psi>` for an arbitrary matrix.
    pub fn expectation_matrix(&self, m: &CMatrix) -> Result<Complex64> {
        self.check_dim(m.nrows())?;
        Ok(self.amplitudes.dotc(&(m * &self.amplitudes)))
    }

    pub fn expectation(&self, op: &SpinOperator) -> Result<Complex64> {
        self.expectation_matrix(op.matrix())
    }

    /// `|psi><psi|`.
    pub fn density_matrix(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    /// `U|psi>`; the caller is responsible for `U` being unitary.
    pub fn apply(&self, u: &CMatrix) -> Result<StateVector> {
        self.check_dim(u.nrows())?;
        Ok(Self { spin: self.spin, amplitudes: u * &self.amplitudes })
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.amplitudes.len() {
            return Err(Error::DimensionMismatch { left: self.amplitudes.len(), right: d });
        }
        Ok(())
    }
}

/// Row `ln C(n, k)` for `k = 0..=n`, by the multiplicative recurrence.
pub fn ln_binomial_row(n: u32) -> Vec<f64> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    row.push(acc);
    for k in 0..n {
        acc += f64::from(n - k).ln() - f64::from(k + 1).ln();
        row.push(acc);
    }
    row
}

/// `k * ln(x)` with the convention `0 * ln(0) = 0`.
fn k_ln(k: usize, x: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

/// Coherent state `|theta, phi>` in the Dicke basis. The amplitude at index
/// `k` is `sqrt(C(2s,k)) cos^(2s-k)(theta/2) sin^k(theta/2) e^(-ik phi)`.
pub fn coherent_state(spin: Spin, point: BlochPoint) -> StateVector {
    let n = spin.twice_s() as usize;
    let (c, s) = point.half_angles();
    let lnb = ln_binomial_row(spin.twice_s());
    let amplitudes = CVector::from_iterator(
        n + 1,
        (0..=n).map(|k| {
            let mag = if (c == 0.0 && k < n) || (s == 0.0 && k > 0) {
                0.0
            } else {
                (0.5 * lnb[k] + k_ln(n - k, c.abs()) + k_ln(k, s.abs())).exp()
            };
            let sign = if c < 0.0 && (n - k) % 2 == 1 { -1.0 } else { 1.0 };
            Complex64::from_polar(sign * mag, -(k as f64) * point.phi)
        }),
    );
    StateVector { spin, amplitudes }
}

/// `<p1|p2> = (cos(t1/2)cos(t2/2) + e^(i(phi1-phi2)) sin(t1/2)sin(t2/2))^(2s)`.
pub fn overlap_closed_form(spin: Spin, p1: BlochPoint, p2: BlochPoint) -> Complex64 {
    let (c1, s1) = p1.half_angles();
    let (c2, s2) = p2.half_angles();
    let base = Complex64::new(c1 * c2, 0.0) + Complex64::from_polar(s1 * s2, p1.phi - p2.phi);
    base.powu(spin.twice_s())
}

/// Normalized `|p1> + |p2>`.
pub fn cat_state(params: &CatParams) -> Result<StateVector> {
    let ov = overlap_closed_form(params.spin, params.p1, params.p2);
    let denominator = 2.0 + 2.0 * ov.re;
    if denominator < DEGENERACY_TOL {
        return Err(Error::DegenerateSuperposition { denominator });
    }
    let a = coherent_state(params.spin, params.p1);
    let b = coherent_state(params.spin, params.p2);
    StateVector::normalized(params.spin, a.amplitudes + b.amplitudes)
}

/// `(|s,-s> + |s,+s>) / sqrt(2)`.
pub fn noon_state(spin: Spin) -> StateVector {
    let mut v = CVector::zeros(spin.dim());
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = h;
    v[spin.dim() - 1] = h;
    StateVector { spin, amplitudes: v }
}

/// Stereographic coordinate `z = e^(-i phi) tan(theta/2)`.
pub fn z_parameter(point: BlochPoint) -> Result<Complex64> {
    if point.theta >= PI - POLE_GUARD {
        return Err(Error::PoleSingularity { theta: point.theta });
    }
    Ok(Complex64::from_polar((point.theta / 2.0).tan(), -point.phi))
}

/// Coherent-state amplitudes from the `z` form
/// `(1+|z|^2)^(-s) sqrt(C(2s,k)) z^k`.
pub fn coherent_state_from_z(spin: Spin, point: BlochPoint) -> Result<CVector> {
    let z = z_parameter(point)?;
    let n = spin.twice_s() as usize;
    let lnb = ln_binomial_row(spin.twice_s());
    let ln_u = (1.0 + z.norm_sqr()).ln();
    let r = z.norm();
    let arg = z.arg();
    Ok(CVector::from_iterator(
        n + 1,
        (0..=n).map(|k| {
            if r == 0.0 && k > 0 {
                return Complex64::new(0.0, 0.0);
            }
            let mag = (0.5 * lnb[k] + k_ln(k, r) - spin.s() * ln_u).exp();
            Complex64::from_polar(mag, k as f64 * arg)
        }),
    ))
}

/// Rational `z` form of the overlap,
/// `(1 + conj(z1) z2)^(2s) / ((1+|z1|^2)^s (1+|z2|^2)^s)`.
pub fn overlap_from_z(spin: Spin, p1: BlochPoint, p2: BlochPoint) -> Result<Complex64> {
    let z1 = z_parameter(p1)?;
    let z2 = z_parameter(p2)?;
    let w = Complex64::new(1.0, 0.0) + z1.conj() * z2;
    let den = ((1.0 + z1.norm_sqr()) * (1.0 + z2.norm_sqr())).powf(spin.s());
    Ok(w.powu(spin.twice_s()) / den)
}
