//! Spin-3/2 bounds specialized to fixed relative azimuths `Phi = phi1 - phi2`.
//!
//! Every evaluator transcribes its printed expression term by term, with no
//! simplification, so that disagreements with the general forms can be
//! measured. Some of them are known to be wrong; see [`super::errata`].
//! Evaluation is done in complex arithmetic because a few radicands change
//! sign off their intended domain.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfi_engine::GeneratorTag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhiCase {
    Zero,
    ThirdPi,
    HalfPi,
    ThreeQuarterPi,
    Pi,
    FourThirdsPi,
}

impl PhiCase {
    pub fn value(self) -> f64 {
        match self {
            PhiCase::Zero => 0.0,
            PhiCase::ThirdPi => PI / 3.0,
            PhiCase::HalfPi => PI / 2.0,
            PhiCase::ThreeQuarterPi => 0.75 * PI,
            PhiCase::Pi => PI,
            PhiCase::FourThirdsPi => 4.0 * PI / 3.0,
        }
    }

    fn slug(self) -> &'static str {
        match self {
            PhiCase::Zero => "0",
            PhiCase::ThirdPi => "pi3",
            PhiCase::HalfPi => "pi2",
            PhiCase::ThreeQuarterPi => "3pi4",
            PhiCase::Pi => "pi",
            PhiCase::FourThirdsPi => "4pi3",
        }
    }
}

impl fmt::Display for PhiCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhiCase::Zero => "0",
            PhiCase::ThirdPi => "pi/3",
            PhiCase::HalfPi => "pi/2",
            PhiCase::ThreeQuarterPi => "3pi/4",
            PhiCase::Pi => "pi",
            PhiCase::FourThirdsPi => "4pi/3",
        })
    }
}

/// A (generator, Phi) pair for which a specialized closed form exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhiSpecialCase {
    generator: GeneratorTag,
    phi_case: PhiCase,
}

impl PhiSpecialCase {
    pub const ALL: [PhiSpecialCase; 12] = {
        use GeneratorTag::*;
        use PhiCase::*;
        const fn c(generator: GeneratorTag, phi_case: PhiCase) -> PhiSpecialCase {
            PhiSpecialCase { generator, phi_case }
        }
        [
            c(Sz, Zero),
            c(Sz, HalfPi),
            c(Sz, FourThirdsPi),
            c(Sz, Pi),
            c(Sx, Zero),
            c(Sx, HalfPi),
            c(Sx, ThreeQuarterPi),
            c(Sx, Pi),
            c(Sy, Zero),
            c(Sy, HalfPi),
            c(Sy, ThirdPi),
            c(Sy, Pi),
        ]
    };

    pub fn new(generator: GeneratorTag, phi_case: PhiCase) -> Result<Self> {
        let case = Self { generator, phi_case };
        if Self::ALL.contains(&case) {
            Ok(case)
        } else {
            Err(Error::UnsupportedSpecialCase { generator: format!("{generator} at Phi = {phi_case}") })
        }
    }

    pub fn generator(self) -> GeneratorTag {
        self.generator
    }

    pub fn phi_case(self) -> PhiCase {
        self.phi_case
    }

    /// Stable identifier such as `sx-phi-3pi4`.
    pub fn id(self) -> String {
        format!("{}-phi-{}", self.generator, self.phi_case.slug())
    }

    /// The printed expression, evaluated in complex arithmetic.
    pub fn evaluate_complex(self, theta1: f64, theta2: f64) -> Complex64 {
        let (t1, t2) = (theta1, theta2);
        match (self.generator, self.phi_case) {
            (GeneratorTag::Sz, PhiCase::Zero) => sz_phi_0(t1, t2),
            (GeneratorTag::Sz, PhiCase::HalfPi) => sz_phi_pi2(t1, t2),
            (GeneratorTag::Sz, PhiCase::FourThirdsPi) => sz_phi_4pi3(t1, t2),
            (GeneratorTag::Sz, PhiCase::Pi) => sz_phi_pi(t1, t2),
            (GeneratorTag::Sx, PhiCase::Zero) => sx_phi_0(t1, t2),
            (GeneratorTag::Sx, PhiCase::HalfPi) => sx_phi_pi2(t1, t2),
            (GeneratorTag::Sx, PhiCase::ThreeQuarterPi) => sx_phi_3pi4(t1, t2),
            (GeneratorTag::Sx, PhiCase::Pi) => sx_phi_pi(t1, t2),
            (GeneratorTag::Sy, PhiCase::Zero) => sy_phi_0(t1, t2),
            (GeneratorTag::Sy, PhiCase::HalfPi) => sy_phi_pi2(t1, t2),
            (GeneratorTag::Sy, PhiCase::ThirdPi) => sy_phi_pi3(t1, t2),
            (GeneratorTag::Sy, PhiCase::Pi) => sy_phi_0(t1, t2),
            _ => unreachable!("constructor only admits listed cases"),
        }
    }

    /// The printed bound as a real number; NaN when the expression has a
    /// non-negligible imaginary part at this point.
    pub fn evaluate(self, theta1: f64, theta2: f64) -> f64 {
        let z = self.evaluate_complex(theta1, theta2);
        if z.im.abs() <= 1e-9 * z.re.abs().max(1.0) {
            z.re
        } else {
            f64::NAN
        }
    }
}

impl fmt::Display for PhiSpecialCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

pub fn crb_special_32(generator: GeneratorTag, phi_case: PhiCase, theta1: f64, theta2: f64) -> Result<f64> {
    Ok(PhiSpecialCase::new(generator, phi_case)?.evaluate(theta1, theta2))
}

pub fn crb_sz_special_32(theta1: f64, theta2: f64, phi_case: PhiCase) -> Result<f64> {
    crb_special_32(GeneratorTag::Sz, phi_case, theta1, theta2)
}

pub fn crb_sx_special_32(theta1: f64, theta2: f64, phi_case: PhiCase) -> Result<f64> {
    crb_special_32(GeneratorTag::Sx, phi_case, theta1, theta2)
}

pub fn crb_sy_special_32(theta1: f64, theta2: f64, phi_case: PhiCase) -> Result<f64> {
    crb_special_32(GeneratorTag::Sy, phi_case, theta1, theta2)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn csqrt(x: f64) -> Complex64 {
    re(x).sqrt()
}

fn halves(t1: f64, t2: f64) -> (f64, f64, f64, f64) {
    ((t1 / 2.0).cos(), (t1 / 2.0).sin(), (t2 / 2.0).cos(), (t2 / 2.0).sin())
}

fn csc(x: f64) -> f64 {
    1.0 / x.sin()
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// `{12 N^4 [A^2(xi + 4 kappa + 3 vartheta) + xi(3 kappa + 4 vartheta) + kappa vartheta]}^(-1/2)`.
fn sz_pack(n: f64, a: f64, xi: f64, kappa: f64, vartheta: f64) -> Complex64 {
    let f = 12.0 * n.powi(4) * (a * a * (xi + 4.0 * kappa + 3.0 * vartheta) + xi * (3.0 * kappa + 4.0 * vartheta) + kappa * vartheta);
    csqrt(f).inv()
}

fn sz_phi_0(t1: f64, t2: f64) -> Complex64 {
    let (c1, s1, c2, s2) = halves(t1, t2);
    let n = (0.5 * (4.0 + 3.0 * ((t1 - t2) / 2.0).cos() + ((3.0 * t1 - 3.0 * t2) / 2.0).cos())).powf(-0.5);
    let xi = (c1 * c1 * s1 + c2 * c2 * s2).powi(2);
    let kappa = (c1 * s1 * s1 + c2 * s2 * s2).powi(2);
    let vartheta = (s1.powi(3) + s2.powi(3)).powi(2);
    sz_pack(n, c1.powi(3) + c2.powi(3), xi, kappa, vartheta)
}

fn sz_phi_pi2(t1: f64, t2: f64) -> Complex64 {
    let (c1, s1, c2, s2) = halves(t1, t2);
    let inner = 8.0 + (t1 / 2.0).cos() * (6.0 * t1.cos() * (t2 / 2.0).cos() - 2.0 * (1.5 * t2).cos() * (-2.0 + t1.cos()));
    let n = 2.0 * inner.powf(-0.5);
    let xi = c1.powi(4) * s1 * s1 + c2.powi(4) * s2 * s2;
    let kappa = (c1 * s1 * s1 - c2 * s2 * s2).powi(2);
    let vartheta = s1.powi(6) + s2.powi(6);
    sz_pack(n, c1.powi(3) + c2.powi(3), xi, kappa, vartheta)
}

fn sz_phi_4pi3(t1: f64, t2: f64) -> Complex64 {
    let (c1, s1, c2, s2) = halves(t1, t2);
    let inner = 32.0 + 15.0 * ((t1 - t2) / 2.0).cos() - ((3.0 * t1 - 3.0 * t2) / 2.0).cos()
        + 9.0 * ((3.0 * t1 + t2) / 2.0).cos()
        + 9.0 * ((t1 + 3.0 * t2) / 2.0).cos();
    let n = 4.0 * inner.powf(-0.5);
    let (h1, h2) = (t1 / 2.0, t2 / 2.0);
    let xi = (csc(h1).powi(2) * t1.sin().powi(4) - csc(h1) * csc(h2) * t1.sin().powi(2) * t2.sin().powi(2)
        + csc(h2).powi(2) * t2.sin().powi(4))
        / 16.0;
    let kappa = (s1 * s1 * t1.sin().powi(2) - s1 * s2 * t1.sin() * t2.sin() + s2 * s2 * t2.sin().powi(2)) / 4.0;
    let vartheta = (s1.powi(3) + s2.powi(3)).powi(2);
    sz_pack(n, c1.powi(3) + c2.powi(3), xi, kappa, vartheta)
}

fn sz_phi_pi(t1: f64, t2: f64) -> Complex64 {
    let (c1, s1, c2, s2) = halves(t1, t2);
    let n = (0.5 * (4.0 + 3.0 * ((t1 + t2) / 2.0).cos() + ((3.0 * t1 + 3.0 * t2) / 2.0).cos())).powf(-0.5);
    let xi = (c1 * c1 * s1 - c2 * c2 * s2).powi(2);
    let kappa = (c1 * s1 * s1 + c2 * s2 * s2).powi(2);
    let vartheta = (s1.powi(3) - s2.powi(3)).powi(2);
    sz_pack(n, c1.powi(3) + c2.powi(3), xi, kappa, vartheta)
}

fn sx_phi_0(t1: f64, t2: f64) -> Complex64 {
    let eta = (2.0 * t1).cos() + (2.0 * t2).cos();
    let delta = ((5.0 * t1 - t2) / 2.0).cos() + ((t1 - 5.0 * t2) / 2.0).cos() + 2.0 * ((3.0 * t1 - 3.0 * t2) / 2.0).cos();
    let lambda = (t1 - t2).cos();
    let gamma = ((3.0 * t1 + t2) / 2.0).cos() + ((t1 + 3.0 * t2) / 2.0).cos();
    let varpi = ((t1 - t2) / 2.0).cos();
    let upsilon = (t1 + t2).cos();
    let epsilon = (2.0 * (t1 - t2)).cos();
    let num = SQRT_2 * (3.0 - 2.0 * ((t1 - t2) / 2.0).cos() + (t1 - t2).cos());
    let rad = 9.0 * eta - 2.0 * delta - 18.0 * gamma - 36.0 * varpi + 26.0 * upsilon + 14.0 * lambda + epsilon + 29.0;
    re(num) / (3f64.sqrt() * csqrt(rad))
}

fn sx_phi_pi2(t1: f64, t2: f64) -> Complex64 {
    let (c1, c2) = (t1.cos(), t2.cos());
    let eta = 1.0 + c1 * (-2.0 + c2) - 2.0 * c2;
    let delta = 9.0 * c1 - 8.0 * (2.0 * t1).cos() + 3.0 * (3.0 * t1).cos();
    let lambda = 8.0 * c1 * (t1 / 2.0).cos() * (t2 / 2.0).cos() * (5.0 + 6.0 * c1 - 3.0 * (2.0 * t1).cos());
    let gamma = c1 * c2 * (9.0 + 16.0 * c1 + (2.0 * t1).cos());
    let varpi = 4.0 * (t1 / 2.0).cos() * (1.5 * t2).cos() * (18.0 - 5.0 * c1 + 2.0 * (2.0 * t1).cos() + (3.0 * t1).cos());
    let upsilon = 2.0 * c1 * (2.0 * t2).cos() * (-3.0 - 8.0 * c1 + (2.0 * t1).cos());
    let epsilon = 6.0 * c1.powi(3) * (3.0 * t2).cos();
    let num = 4.0 * (-2.0 + eta * (t1 / 2.0).cos() * (t2 / 2.0).cos());
    let rad = delta + lambda + gamma + varpi - upsilon + epsilon + 72.0;
    re(num) / (3f64.sqrt() * csqrt(rad))
}

fn sx_phi_3pi4(t1: f64, t2: f64) -> Complex64 {
    let (c1, s1, c2, s2) = halves(t1, t2);
    let (h1, h2) = (t1 / 2.0, t2 / 2.0);
    let r2 = SQRT_2;
    let eta = 4.0 + 4.0 * c1.powi(3) * c2.powi(3) - r2 * s1 * s2 * (1.0 + 2.0 * t1.cos() + t2.cos() * (2.0 + t1.cos()));
    let delta = r2 * (c1 * s2 * (-2.0 * t2.cos() + t1.cos() * t2.cos() - 1.0) - t2.sin());
    let lambda = 2.0 * t1.sin() * (1.0 + c1 * c2.powi(3));
    let gamma = r2
        + 2.0 * csc(h1).powi(3) * csc(h2).powi(3)
        + cot(h1).powi(2) * cot(h2).powi(2) * (-3.0 * r2 + 2.0 * cot(h1) * cot(h2));
    let varpi = s1.powi(6) * s2.powi(4);
    let upsilon = csc(h1).powi(2) * t2.cos() * (2.0 + t1.cos());
    let epsilon = csc(h1).powi(3) * csc(h2) * (-7.0 + 2.0 * (2.0 * t1).cos() + (2.0 * t2).cos());
    let omega = cot(h1)
        * (5.0 * r2 * cot(h1) - 8.0 * cot(h2) - 4.0 * h2.cos().powi(2) * cot(h1).powi(2) * cot(h2) + 4.0 * t2.sin());
    let rad = -0.75 * (delta + lambda).powi(2) - 0.5 * gamma * varpi * (r2 + 3.0 * r2 * upsilon + epsilon + omega);
    re(eta) / (2.0 * 3f64.sqrt() * csqrt(rad))
}

fn sx_phi_pi(t1: f64, t2: f64) -> Complex64 {
    let eta = (2.0 * t1).cos() + (2.0 * t2).cos();
    let delta = ((5.0 * t1 + t2) / 2.0).cos() + ((t1 + 5.0 * t2) / 2.0).cos() + 2.0 * (1.5 * (t1 + t2)).cos();
    let epsilon = (t1 + t2).cos();
    let lambda = ((3.0 * t1 - t2) / 2.0).cos() + ((t1 - 3.0 * t2) / 2.0).cos();
    let gamma = ((t1 + t2) / 2.0).cos();
    let varpi = (t1 - t2).cos();
    let upsilon = (2.0 * (t1 + t2)).cos();
    let num = SQRT_2 * (3.0 - 2.0 * ((t1 + t2) / 2.0).cos() + (t1 + t2).cos());
    let rad = 9.0 * eta - 2.0 * delta - 18.0 * lambda - 36.0 * gamma + 26.0 * varpi + 14.0 * epsilon + upsilon + 29.0;
    re(num) / (3f64.sqrt() * csqrt(rad))
}

fn sy_phi_0(t1: f64, t2: f64) -> Complex64 {
    csqrt(9.0 - 12.0 / (3.0 - 2.0 * ((t1 - t2) / 2.0).cos() + (t1 - t2).cos())).inv()
}

fn sy_phi_pi2(t1: f64, t2: f64) -> Complex64 {
    let (c1, c2) = ((t1 / 2.0).cos(), (t2 / 2.0).cos());
    let sigma = 1.0 + t1.cos() * (-2.0 + t2.cos()) - 2.0 * t2.cos();
    let big_pi = 8.0 * t1.cos() * t2.cos().powi(2) + 4.0 * (2.0 * t1).cos() * (1.0 + 3.0 * c1 * c1 * t2.cos().powi(3));
    let upsilon = c1 * c1 * (t2.cos() * (13.0 - 16.0 * t1.cos() * (2.0 * t2).cos()) + 7.0 * (3.0 * t2).cos());
    let lambda = 8.0 * t1.sin().powi(2) * (2.0 * t2).cos();
    let omega = 2.0
        * c1
        * (2.0 * c2 * (-3.0 + t1.cos() * (18.0 - 5.0 * t2.cos() + 2.0 * (2.0 * t2).cos() + (3.0 * t2).cos()))
            + 8.0 * (1.5 * t2).cos()
            - 2.0 * (3.5 * t2).cos());
    let num = 2.0 * SQRT_2 * (-2.0 + sigma * c1 * c2);
    re(num) / csqrt(3.0 * (big_pi + upsilon + omega - lambda + 36.0))
}

fn sy_phi_pi3(t1: f64, t2: f64) -> Complex64 {
    let sigma = 9.0 * ((t1 - 3.0 * t2) / 2.0).cos() + 9.0 * ((3.0 * t1 - t2) / 2.0).cos() + 15.0 * ((t1 + t2) / 2.0).cos()
        - ((3.0 * t1 + 3.0 * t2) / 2.0).cos();
    let big_pi = 44.0 + 3.0 * ((t1 - 3.0 * t2) / 2.0).cos() + 27.0 * ((3.0 * t1 - t2) / 2.0).cos() - 12.0 * (2.0 * t2).cos()
        + 5.0 * ((t1 + t2) / 2.0).cos()
        - 3.0 * ((3.0 * t1 + t2) / 2.0).cos();
    // (-1)^(1/3), principal branch
    let w = Complex64::from_polar(1.0, PI / 3.0);
    let bracket = (t1 / 2.0).cos() + 3.0 * (1.5 * t1).cos() + 3.0 * (1.5 * t1 - t2).cos() + 8.0 * (t2 / 2.0).cos()
        + (t1 / 2.0 + t2).cos();
    let upsilon = (1.0 + w).powi(2) * (t2 / 2.0).sin().powi(2) * bracket * bracket;
    let rad = 3.0 * (big_pi * (32.0 + sigma) + w * w * 12.0 * upsilon);
    re(32.0 + sigma) / rad.sqrt()
}
