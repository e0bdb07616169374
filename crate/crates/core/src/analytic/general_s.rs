//! QFI of a two-component cat state for arbitrary spin, written in the
//! stereographic coordinate `z = e^(-i phi) tan(theta/2)`.
//!
//! Powers such as `(1 + conj(z1) z2)^(2s) / ((1+|z1|^2)^s (1+|z2|^2)^s)` are
//! formed in log space so that large spins neither overflow nor underflow.

use num_complex::Complex64;

use crate::coherent_states::{ln_binomial_row, z_parameter, BlochPoint, DEGENERACY_TOL};
use crate::error::{Error, Result};
use crate::qfi_engine::GeneratorTag;
use crate::spin_algebra::Spin;

/// Which transcription of the `S_x`/`S_y` displays to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transcription {
    /// `(conj(z)^2 + z^2) / (1+|z|^2)^2` in the first bracket.
    Corrected,
    /// The same bracket with a single power of `1+|z|^2`, as printed.
    AsPrinted,
}

struct Geometry {
    s: f64,
    twice_s: i64,
    z1: Complex64,
    z2: Complex64,
    u1: f64,
    u2: f64,
    ln_w: Option<Complex64>,
    ln_p: f64,
    n2: f64,
}

impl Geometry {
    fn new(spin: Spin, p1: BlochPoint, p2: BlochPoint) -> Result<Self> {
        let z1 = z_parameter(p1)?;
        let z2 = z_parameter(p2)?;
        let s = spin.s();
        let u1 = 1.0 + z1.norm_sqr();
        let u2 = 1.0 + z2.norm_sqr();
        let w = Complex64::new(1.0, 0.0) + z1.conj() * z2;
        let ln_w = (w.norm() > 0.0).then(|| w.ln());
        let ln_p = -s * (u1.ln() + u2.ln());
        let mut g = Self { s, twice_s: i64::from(spin.twice_s()), z1, z2, u1, u2, ln_w, ln_p, n2: 0.0 };
        let denominator = 2.0 + 2.0 * g.pw(g.twice_s).re;
        if denominator < DEGENERACY_TOL {
            return Err(Error::DegenerateSuperposition { denominator });
        }
        g.n2 = 1.0 / denominator;
        Ok(g)
    }

    /// `P w^k` with `P = (u1 u2)^(-s)`. At `w = 0` every place a negative
    /// power appears carries a numerator vanishing like `w^2`, so those terms
    /// are sent to their limit 0.
    fn pw(&self, k: i64) -> Complex64 {
        match self.ln_w {
            Some(lw) => (lw * k as f64 + self.ln_p).exp(),
            None if k == 0 => Complex64::new(self.ln_p.exp(), 0.0),
            None => Complex64::new(0.0, 0.0),
        }
    }

    fn pw_conj(&self, k: i64) -> Complex64 {
        self.pw(k).conj()
    }
}

fn k_ln(k: usize, x: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

fn qfi_sz(g: &Geometry) -> f64 {
    let n = g.twice_s as usize;
    let lnb = ln_binomial_row(n as u32);
    let r1 = g.z1.norm();
    let r2 = g.z2.norm();
    let x = g.z1.conj() * g.z2;
    let ln_x = (x.norm() > 0.0).then(|| x.ln());
    let (mut second, mut first) = (0.0, 0.0);
    for k in 0..=n {
        let m = k as f64 - g.s;
        let t1 = if r1 == 0.0 && k > 0 { 0.0 } else { (lnb[k] + k_ln(2 * k, r1) - n as f64 * g.u1.ln()).exp() };
        let t2 = if r2 == 0.0 && k > 0 { 0.0 } else { (lnb[k] + k_ln(2 * k, r2) - n as f64 * g.u2.ln()).exp() };
        let cross = match ln_x {
            Some(lx) => 2.0 * (lx * k as f64 + lnb[k] + g.ln_p).exp().re,
            None if k == 0 => 2.0 * (lnb[0] + g.ln_p).exp(),
            None => 0.0,
        };
        let bracket = t1 + t2 + cross;
        second += m * m * bracket;
        first += m * bracket;
    }
    4.0 * (g.n2 * second - (g.n2 * first).powi(2))
}

fn qfi_transverse(g: &Geometry, tag: GeneratorTag, form: Transcription) -> f64 {
    let s = g.s;
    let (z1, z2) = (g.z1, g.z2);
    let (z1c, z2c) = (z1.conj(), z2.conj());
    let n = g.twice_s;
    let sign = if tag == GeneratorTag::Sx { 1.0 } else { -1.0 };

    let pair = 2.0 * s * (2.0 * s - 1.0);
    let q = if pair == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        let e = match form {
            Transcription::Corrected => 2,
            Transcription::AsPrinted => 1,
        };
        let local = (z1c * z1c + z1 * z1) / g.u1.powi(e) + (z2c * z2c + z2 * z2) / g.u2.powi(e);
        let cross = (z1c * z1c + z2 * z2) * g.pw(n - 2) + (z2c * z2c + z1 * z1) * g.pw_conj(n - 2);
        (local + cross) * pair
    };

    let diag = |r2: f64, u: f64| (8.0 * s * s * r2 + 2.0 * s * r2 * r2 + 2.0 * s) / (u * u);
    let x = z1c * z2;
    let d = Complex64::new(diag(z1.norm_sqr(), g.u1) + diag(z2.norm_sqr(), g.u2), 0.0)
        + g.pw(n - 2) * (x * (8.0 * s * s) + x * x * (2.0 * s) + 2.0 * s)
        + g.pw_conj(n - 2) * (x.conj() * (8.0 * s * s) + x.conj() * x.conj() * (2.0 * s) + 2.0 * s);

    let second = (q + d * sign) * (sign * g.n2 / 4.0);

    let lin = if tag == GeneratorTag::Sx {
        let local = (z1c + z1) / g.u1 + (z2c + z2) / g.u2;
        let cross = (z1c + z2) * g.pw(n - 1) + (z2c + z1) * g.pw_conj(n - 1);
        (local + cross) * (2.0 * s) * (g.n2 / 2.0)
    } else {
        let local = (z1c - z1) / g.u1 + (z2c - z2) / g.u2;
        let cross = (z1c - z2) * g.pw(n - 1) + (z2c - z1) * g.pw_conj(n - 1);
        (local + cross) * (2.0 * s) * g.n2 / Complex64::new(0.0, 2.0)
    };
    4.0 * (second.re - lin.norm_sqr())
}

/// Closed-form QFI for any spin. Both points must stay off the south-pole
/// guard of the `z` parametrization.
pub fn qfi_general_s(spin: Spin, p1: BlochPoint, p2: BlochPoint, generator: GeneratorTag) -> Result<f64> {
    qfi_general_s_with(spin, p1, p2, generator, Transcription::Corrected)
}

pub fn qfi_general_s_with(
    spin: Spin,
    p1: BlochPoint,
    p2: BlochPoint,
    generator: GeneratorTag,
    form: Transcription,
) -> Result<f64> {
    let g = Geometry::new(spin, p1, p2)?;
    Ok(match generator {
        GeneratorTag::Sz => qfi_sz(&g),
        tag => qfi_transverse(&g, tag, form),
    })
}

/// Standard quantum limit `1/sqrt(2s)`.
pub fn sql(spin: Spin) -> f64 {
    1.0 / f64::from(spin.twice_s()).sqrt()
}

/// Heisenberg limit `1/(2s)`.
pub fn hl(spin: Spin) -> f64 {
    1.0 / f64::from(spin.twice_s())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::spin32::qfi_general_32;
    use crate::coherent_states::{cat_state, CatParams};
    use crate::qfi_engine::qfi_pure;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn spin(t: u32) -> Spin {
        Spin::new(t).unwrap()
    }

    fn random_pair(rng: &mut ChaCha8Rng) -> (BlochPoint, BlochPoint) {
        let p1 = BlochPoint::new(rng.random_range(0.0..PI - 1e-3), rng.random_range(0.0..TAU)).unwrap();
        let p2 = BlochPoint::new(rng.random_range(0.0..PI - 1e-3), rng.random_range(0.0..TAU)).unwrap();
        (p1, p2)
    }

    #[test]
    fn limits() {
        assert!((hl(spin(3)) - 1.0 / 3.0).abs() < 1e-15);
        assert!((sql(spin(3)) - 0.57735).abs() < 1e-5);
        assert_eq!(hl(spin(8)), 0.125);
        assert_eq!(hl(spin(2)), 0.5);
    }

    #[test]
    fn three_halves_matches_the_spin32_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        for _ in 0..100 {
            let (p1, p2) = random_pair(&mut rng);
            for tag in GeneratorTag::ALL {
                let a = qfi_general_s(spin(3), p1, p2, tag).unwrap();
                let b = qfi_general_32(tag, p1.theta(), p2.theta(), p1.phi(), p2.phi()).unwrap();
                assert!((a - b).abs() <= 1e-9 * b.max(1.0), "{tag}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn single_state_sz() {
        for t in [1, 4, 9, 16] {
            for i in 0..10 {
                let theta = 0.3 * i as f64;
                let p = BlochPoint::new(theta, 0.2).unwrap();
                let f = qfi_general_s(spin(t), p, p, GeneratorTag::Sz).unwrap();
                let expected = f64::from(t) * theta.sin().powi(2);
                assert!((f - expected).abs() < 1e-10, "{t} {theta}: {f} vs {expected}");
            }
        }
    }

    #[test]
    fn matches_the_numeric_engine_up_to_spin_sixteen() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for t in [1, 2, 5, 8, 13, 20, 32] {
            for _ in 0..20 {
                let (p1, p2) = random_pair(&mut rng);
                let psi = cat_state(&CatParams::new(spin(t), p1, p2)).unwrap();
                for tag in GeneratorTag::ALL {
                    let a = qfi_general_s(spin(t), p1, p2, tag).unwrap();
                    let b = qfi_pure(&psi, &tag.operator(spin(t))).unwrap();
                    let tol = if t >= 20 { 1e-6 } else { 1e-9 };
                    assert!((a - b).abs() <= tol * b.max(1.0), "2s={t} {tag}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn large_spin_does_not_overflow() {
        let p1 = BlochPoint::new(0.4, 0.0).unwrap();
        let p2 = BlochPoint::new(2.9, 1.0).unwrap();
        let psi = cat_state(&CatParams::new(spin(200), p1, p2)).unwrap();
        for tag in GeneratorTag::ALL {
            let a = qfi_general_s(spin(200), p1, p2, tag).unwrap();
            let b = qfi_pure(&psi, &tag.operator(spin(200))).unwrap();
            assert!(a.is_finite());
            assert!((a - b).abs() <= 1e-6 * b.max(1.0));
        }
    }

    #[test]
    fn printed_first_bracket_is_off_beyond_spin_half() {
        let p1 = BlochPoint::new(0.9, 0.0).unwrap();
        let p2 = BlochPoint::new(2.0, 1.2).unwrap();
        for tag in [GeneratorTag::Sx, GeneratorTag::Sy] {
            let half_a = qfi_general_s_with(spin(1), p1, p2, tag, Transcription::AsPrinted).unwrap();
            let half_b = qfi_general_s(spin(1), p1, p2, tag).unwrap();
            assert!((half_a - half_b).abs() < 1e-12);
            let a = qfi_general_s_with(spin(4), p1, p2, tag, Transcription::AsPrinted).unwrap();
            let b = qfi_general_s(spin(4), p1, p2, tag).unwrap();
            assert!((a - b).abs() > 1e-3 * b);
        }
    }

    #[test]
    fn pole_is_refused() {
        let p1 = BlochPoint::new(0.0, 0.0).unwrap();
        let p2 = BlochPoint::new(PI, 0.0).unwrap();
        assert!(matches!(
            qfi_general_s(spin(3), p1, p2, GeneratorTag::Sz),
            Err(Error::PoleSingularity { .. })
        ));
    }

    #[test]
    fn antipodal_spin_half_limit() {
        // w = 0 exactly: the cross terms are taken at their limit.
        let p1 = BlochPoint::new(PI / 2.0, 0.0).unwrap();
        let p2 = BlochPoint::new(PI / 2.0, PI).unwrap();
        let psi = cat_state(&CatParams::new(spin(1), p1, p2)).unwrap();
        for tag in GeneratorTag::ALL {
            let a = qfi_general_s(spin(1), p1, p2, tag).unwrap();
            let b = qfi_pure(&psi, &tag.operator(spin(1))).unwrap();
            assert!((a - b).abs() < 1e-12, "{tag}: {a} vs {b}");
        }
    }
}
