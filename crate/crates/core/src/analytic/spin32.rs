//! Closed-form QFI of the spin-3/2 cat state for the three generators.

use num_complex::Complex64;

use crate::coherent_states::DEGENERACY_TOL;
use crate::error::{Error, Result};
use crate::qfi_engine::{crb, CrbValue, GeneratorTag};

/// Unnormalized Dicke coefficients of `|p1> + |p2>` for `s = 3/2`, without
/// the `sqrt(3)` binomial factors, plus `N^2 = 1/(A^2 + 3|B|^2 + 3|C|^2 + |D|^2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spin32Coefficients {
    pub a: f64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub n2: f64,
}

impl Spin32Coefficients {
    pub fn new(theta1: f64, phi1: f64, theta2: f64, phi2: f64) -> Result<Self> {
        let (s1, c1) = (theta1 / 2.0).sin_cos();
        let (s2, c2) = (theta2 / 2.0).sin_cos();
        let e = |k: f64, phi: f64| Complex64::from_polar(1.0, -k * phi);
        let a = c1.powi(3) + c2.powi(3);
        let b = e(1.0, phi1) * (c1 * c1 * s1) + e(1.0, phi2) * (c2 * c2 * s2);
        let c = e(2.0, phi1) * (c1 * s1 * s1) + e(2.0, phi2) * (c2 * s2 * s2);
        let d = e(3.0, phi1) * s1.powi(3) + e(3.0, phi2) * s2.powi(3);
        let inv = a * a + 3.0 * b.norm_sqr() + 3.0 * c.norm_sqr() + d.norm_sqr();
        if inv < DEGENERACY_TOL {
            return Err(Error::DegenerateSuperposition { denominator: inv });
        }
        Ok(Self { a, b, c, d, n2: 1.0 / inv })
    }

    /// Normalized Dicke amplitudes `N (A, sqrt3 B, sqrt3 C, D)`.
    pub fn dicke_amplitudes(&self) -> [Complex64; 4] {
        let n = self.n2.sqrt();
        let r3 = 3f64.sqrt();
        [Complex64::new(n * self.a, 0.0), self.b * (n * r3), self.c * (n * r3), self.d * n]
    }
}

pub fn qfi_sz_general_32(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Result<f64> {
    let k = Spin32Coefficients::new(theta1, phi1, theta2, phi2)?;
    let (b, c, d) = (k.b.norm_sqr(), k.c.norm_sqr(), k.d.norm_sqr());
    let a2 = k.a * k.a;
    Ok(12.0 * k.n2 * k.n2 * (a2 * (b + 4.0 * c + 3.0 * d) + b * (3.0 * c + 4.0 * d) + c * d))
}

pub fn qfi_sx_general_32(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Result<f64> {
    let k = Spin32Coefficients::new(theta1, phi1, theta2, phi2)?;
    let a = Complex64::new(k.a, 0.0);
    let (b, c, d) = (k.b, k.c, k.d);
    let (bc, cc, dc) = (b.conj(), c.conj(), d.conj());
    let first = a * a + d * dc + 7.0 * b * bc + 7.0 * c * cc + 2.0 * a * c + 2.0 * a * cc + 2.0 * b * dc + 2.0 * d * bc;
    let mean = a * b + a * bc + 2.0 * c * bc + 2.0 * b * cc + c * dc + d * cc;
    Ok((3.0 * k.n2 * first - 9.0 * k.n2 * k.n2 * mean * mean).re)
}

pub fn qfi_sy_general_32(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Result<f64> {
    let k = Spin32Coefficients::new(theta1, phi1, theta2, phi2)?;
    let a = Complex64::new(k.a, 0.0);
    let (b, c, d) = (k.b, k.c, k.d);
    let (bc, cc, dc) = (b.conj(), c.conj(), d.conj());
    let first = a * a + d * dc + 7.0 * b * bc + 7.0 * c * cc - 2.0 * a * c - 2.0 * a * cc - 2.0 * b * dc - 2.0 * d * bc;
    let mean = a * b - a * bc + 2.0 * c * bc - 2.0 * b * cc - c * dc + d * cc;
    Ok((3.0 * k.n2 * first + 9.0 * k.n2 * k.n2 * mean * mean).re)
}

pub fn qfi_general_32(tag: GeneratorTag, theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Result<f64> {
    match tag {
        GeneratorTag::Sx => qfi_sx_general_32(theta1, theta2, phi1, phi2),
        GeneratorTag::Sy => qfi_sy_general_32(theta1, theta2, phi1, phi2),
        GeneratorTag::Sz => qfi_sz_general_32(theta1, theta2, phi1, phi2),
    }
}

pub fn crb_sz_general_32(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Result<CrbValue> {
    Ok(crb(qfi_sz_general_32(theta1, theta2, phi1, phi2)?, 1))
}

pub fn crb_sx_general_32(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Result<CrbValue> {
    Ok(crb(qfi_sx_general_32(theta1, theta2, phi1, phi2)?, 1))
}

pub fn crb_sy_general_32(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Result<CrbValue> {
    Ok(crb(qfi_sy_general_32(theta1, theta2, phi1, phi2)?, 1))
}

pub fn crb_general_32(tag: GeneratorTag, theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Result<CrbValue> {
    Ok(crb(qfi_general_32(tag, theta1, theta2, phi1, phi2)?, 1))
}
