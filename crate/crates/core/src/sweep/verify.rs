//! Self-check suites run by `spincat verify`.
//!
//! Each suite produces named checks with a pass flag and the measured
//! deviation. The errata suite only reports; it never fails.

use std::f64::consts::{PI, TAU};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::errata::errata_report;
use crate::analytic::{hl, qfi_general_32, qfi_general_s};
use crate::coherent_states::{cat_state, coherent_state, overlap_closed_form, BlochPoint, CatParams};
use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::qfi_engine::{
    crb, qfi_fidelity_fd, qfi_pure, qfi_sld, qfi_spectral_unitary, GeneratorTag, PhaseFamily, FIDELITY_STEP,
};
use crate::spin_algebra::{build_sx, build_sy, build_sz, commutator, hermitian_eigen, Spin, SpinOperator};

const ALGEBRA_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-4;
const HL_TOL: f64 = 1e-10;
const ORACLE_CASES: usize = 50;
const ANALYTIC_CASES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Oracles,
    Analytic,
    HlLaw,
    Errata,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Algebra, Suite::Oracles, Suite::Analytic, Suite::HlLaw, Suite::Errata];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Oracles => "oracles",
            Suite::Analytic => "analytic",
            Suite::HlLaw => "hl-law",
            Suite::Errata => "errata",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "algebra" => Ok(Suite::Algebra),
            "oracles" => Ok(Suite::Oracles),
            "analytic" => Ok(Suite::Analytic),
            "hl-law" | "hl" => Ok(Suite::HlLaw),
            "errata" => Ok(Suite::Errata),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parse(format!(
                "unknown suite '{s}' (expected algebra, oracles, analytic, hl-law, errata or all)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    /// Largest deviation seen, against `tolerance`.
    pub measured: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Free-form sections (the errata tables).
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<8} {:<48} max_dev={:.3e} tol={:.0e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.measured,
                c.tolerance
            );
        }
        for n in &self.notes {
            out.push('\n');
            out.push_str(n);
        }
        let _ = writeln!(out, "\n{} checks, {} failed", self.checks.len(), self.failures());
        out
    }

    fn push(&mut self, suite: Suite, name: impl Into<String>, measured: f64, tolerance: f64) {
        self.checks.push(Check {
            suite,
            name: name.into(),
            passed: measured <= tolerance,
            measured,
            tolerance,
        });
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() / b.abs().max(1.0);
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

fn worst(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x) })
}

fn spin(t: u32) -> Spin {
    Spin::new(t).expect("spin within range")
}

fn random_point(rng: &mut ChaCha8Rng) -> BlochPoint {
    BlochPoint::new(rng.random_range(0.0..PI - 1e-3), rng.random_range(0.0..TAU)).expect("angles in range")
}

fn algebra(report: &mut VerifyReport) -> Result<()> {
    let i = Complex64::i();
    let mut comm = 0.0f64;
    let mut casimir = 0.0f64;
    let mut spectrum = 0.0f64;
    let mut overlap = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for t in 1..=20 {
        let s = spin(t);
        let (x, y, z) = (build_sx(s), build_sy(s), build_sz(s));
        for (a, b, c) in [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)] {
            comm = comm.max(commutator(a, b)?.max_abs_diff(&c.scale(i))?);
        }
        let cas = x.mul(&x)?.add(&y.mul(&y)?)?.add(&z.mul(&z)?)?;
        let expected = SpinOperator::identity(s).scale(Complex64::from(s.s() * (s.s() + 1.0)));
        casimir = casimir.max(cas.max_abs_diff(&expected)?);
        let m: Vec<f64> = s.m_values().collect();
        for op in [&x, &y, &z] {
            let ev = op.eigenvalues()?;
            spectrum = spectrum.max(worst(ev.iter().zip(&m).map(|(a, b)| (a - b).abs())));
        }
        for _ in 0..5 {
            let (p1, p2) = (random_point(&mut rng), random_point(&mut rng));
            let direct = coherent_state(s, p1).inner(&coherent_state(s, p2))?;
            overlap = overlap.max((direct - overlap_closed_form(s, p1, p2)).norm());
        }
    }
    report.push(Suite::Algebra, "commutators [Si,Sj] = i eps_ijk Sk, 2s<=20", comm, ALGEBRA_TOL);
    report.push(Suite::Algebra, "Casimir Sx^2+Sy^2+Sz^2 = s(s+1) I", casimir, ALGEBRA_TOL);
    report.push(Suite::Algebra, "eigenvalues of Sx, Sy, Sz = -s..s", spectrum, ALGEBRA_TOL);
    report.push(Suite::Algebra, "coherent overlap closed form", overlap, ALGEBRA_TOL);
    Ok(())
}

fn oracle_case(i: usize) -> Result<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
    let s = spin(rng.random_range(1..=12));
    let tag = GeneratorTag::ALL[rng.random_range(0..3)];
    let params = loop {
        let p = CatParams::new(s, random_point(&mut rng), random_point(&mut rng));
        if cat_state(&p).is_ok() {
            break p;
        }
    };
    let h = tag.operator(s);
    let psi = cat_state(&params)?;
    let pure = qfi_pure(&psi, &h)?;
    let fam = PhaseFamily::new(psi.clone(), &h)?;
    let z0 = rng.random_range(0.0..1.0);
    let sld = qfi_sld(&fam, z0)?;
    let fd = qfi_fidelity_fd(&fam, z0, FIDELITY_STEP)?;
    let spectral = qfi_spectral_unitary(&hermitian_eigen(&psi.density_matrix())?, &h)?;
    Ok([pure, sld, fd, spectral])
}

fn oracles(report: &mut VerifyReport, jobs: Option<usize>) -> Result<()> {
    let cases = map_indexed(ORACLE_CASES, jobs, oracle_case).into_iter().collect::<Result<Vec<_>>>()?;
    let pair = |i: usize, j: usize| worst(cases.iter().map(|c| rel(c[i], c[j]).max(rel(c[j], c[i]))));
    report.push(Suite::Oracles, format!("pure vs sld, {ORACLE_CASES} random cats"), pair(0, 1), ORACLE_TOL);
    report.push(Suite::Oracles, format!("pure vs fidelity, {ORACLE_CASES} random cats"), pair(0, 2), ORACLE_TOL);
    report.push(Suite::Oracles, format!("sld vs fidelity, {ORACLE_CASES} random cats"), pair(1, 2), ORACLE_TOL);
    report.push(Suite::Oracles, format!("pure vs spectral, {ORACLE_CASES} random cats"), pair(0, 3), 1e-8);
    Ok(())
}

fn analytic_case(twice_s: u32, i: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(twice_s) << 32 | i as u64);
    let s = spin(twice_s);
    let (p1, p2) = loop {
        let (a, b) = (random_point(&mut rng), random_point(&mut rng));
        if cat_state(&CatParams::new(s, a, b)).is_ok() {
            break (a, b);
        }
    };
    let psi = cat_state(&CatParams::new(s, p1, p2))?;
    let mut dev = 0.0f64;
    for tag in GeneratorTag::ALL {
        let numeric = qfi_pure(&psi, &tag.operator(s))?;
        let a = if twice_s == 3 {
            qfi_general_32(tag, p1.theta(), p2.theta(), p1.phi(), p2.phi())?
        } else {
            qfi_general_s(s, p1, p2, tag)?
        };
        dev = dev.max(rel(a, numeric));
    }
    Ok(dev)
}

fn analytic(report: &mut VerifyReport, jobs: Option<usize>) -> Result<()> {
    for (twice_s, tol) in [(3, 1e-9), (1, 1e-9), (4, 1e-9), (9, 1e-9), (20, 1e-6), (32, 1e-6)] {
        let devs = map_indexed(ANALYTIC_CASES, jobs, |i| analytic_case(twice_s, i))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let name = if twice_s == 3 {
            format!("spin-3/2 forms vs numeric, {ANALYTIC_CASES} points")
        } else {
            format!("general-s forms vs numeric, 2s={twice_s}, {ANALYTIC_CASES} points")
        };
        report.push(Suite::Analytic, name, worst(devs), tol);
    }
    Ok(())
}

fn hl_law(report: &mut VerifyReport) -> Result<()> {
    for t in 1..=32 {
        let s = spin(t);
        let mut dev = 0.0f64;
        for phi in [0.0, 0.7, PI / 2.0, PI, 4.0] {
            let psi = cat_state(&CatParams::from_angles(s, 0.0, 0.0, PI, phi)?)?;
            let bound = crb(qfi_pure(&psi, &build_sz(s))?, 1).value();
            dev = dev.max((bound - hl(s)).abs());
        }
        report.push(Suite::HlLaw, format!("antipodal Sz bound = 1/(2s), 2s={t}"), dev, HL_TOL);
    }
    Ok(())
}

fn errata(report: &mut VerifyReport, jobs: Option<usize>) {
    let r = errata_report(jobs);
    let n = r.special_forms.len() + r.general_forms.len();
    report.push(Suite::Errata, format!("errata report generated ({n} forms, {} quoted values)", r.quoted.len()), 0.0, 0.0);
    report.notes.push(r.to_text());
}

/// Run one suite, or all of them.
pub fn run_verify(suite: Suite, jobs: Option<usize>) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        match s {
            Suite::Algebra => algebra(&mut report)?,
            Suite::Oracles => oracles(&mut report, jobs)?,
            Suite::Analytic => analytic(&mut report, jobs)?,
            Suite::HlLaw => hl_law(&mut report)?,
            Suite::Errata => errata(&mut report, jobs),
            Suite::All => unreachable!(),
        }
    }
    Ok(report)
}
