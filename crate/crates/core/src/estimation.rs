//! Monte-Carlo check that the quantum Cramér–Rao bound is attainable.
//!
//! Projective measurement in the eigenbasis of the SLD at the true phase,
//! multinomial shot noise, and a maximum-likelihood estimate per experiment.
//! Each experiment draws from its own ChaCha stream (`seed`, experiment
//! index), so results do not depend on how experiments are scheduled.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::qfi_engine::{sld_operator, PhaseFamily, SLD_STEP};
use crate::spin_algebra::{hermitian_eigen, CMatrix, CVector, Spin};

/// Points of the coarse likelihood scan.
pub const GRID_POINTS: usize = 512;
/// Final bracket width of the golden-section refinement.
pub const REFINE_TOL: f64 = 1e-8;
/// Floor applied to probabilities inside the logarithm.
pub const PROB_FLOOR: f64 = 1e-300;

const UNITARY_TOL: f64 = 1e-10;
const RICHARDSON_STEP: f64 = 1e-3;
const CFI_SUPPORT: f64 = 1e-12;

/// A projective measurement on a phase family.
#[derive(Clone, Debug)]
pub struct MeasurementModel {
    spin: Spin,
    basis: CMatrix,
    /// `B^dagger U` with `U` the generator eigenvectors.
    transfer: CMatrix,
    coords: CVector,
    eigenvalues: Vec<f64>,
}

impl MeasurementModel {
    /// `basis` columns are the measurement vectors `e_k`.
    pub fn new(family: &PhaseFamily, basis: CMatrix) -> Result<Self> {
        let d = family.spin().dim();
        if basis.nrows() != d || basis.ncols() != d {
            return Err(Error::DimensionMismatch { left: d, right: basis.nrows() });
        }
        let defect = unitarity_defect(&basis);
        if defect > UNITARY_TOL {
            return Err(Error::InvalidConfig(format!("measurement basis is not orthonormal (defect {defect:e})")));
        }
        let eig = hermitian_eigen(family.generator().matrix())?;
        let psi = family.state_at(0.0)?;
        let coords = eig.vectors.adjoint() * psi.amplitudes();
        let transfer = basis.adjoint() * &eig.vectors;
        Ok(Self { spin: family.spin(), basis, transfer, coords, eigenvalues: eig.values })
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn outcomes(&self) -> usize {
        self.basis.ncols()
    }

    /// `p_k(zeta) = |<e_k|psi_zeta>|^2`.
    pub fn probabilities(&self, zeta: f64) -> Vec<f64> {
        let phased = CVector::from_iterator(
            self.coords.len(),
            self.coords.iter().zip(&self.eigenvalues).map(|(c, &l)| c * Complex64::from_polar(1.0, zeta * l)),
        );
        (&self.transfer * phased).iter().map(|a| a.norm_sqr()).collect()
    }

    /// Classical Fisher information `sum p_k'^2 / p_k`, derivatives by
    /// Richardson-extrapolated central differences.
    pub fn classical_fisher(&self, zeta: f64) -> f64 {
        let p = self.probabilities(zeta);
        let diff = |h: f64| -> Vec<f64> {
            let a = self.probabilities(zeta + h);
            let b = self.probabilities(zeta - h);
            a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * h)).collect()
        };
        let d1 = diff(RICHARDSON_STEP);
        let d2 = diff(RICHARDSON_STEP / 2.0);
        p.iter()
            .zip(d1.iter().zip(&d2))
            .filter(|(pk, _)| **pk > CFI_SUPPORT)
            .map(|(pk, (a, b))| {
                let d = (4.0 * b - a) / 3.0;
                d * d / pk
            })
            .sum()
    }

    /// `sum_k w_k ln p_k(zeta)`.
    pub fn log_likelihood(&self, weights: &[f64], zeta: f64) -> f64 {
        self.probabilities(zeta)
            .iter()
            .zip(weights)
            .filter(|(_, w)| **w > 0.0)
            .map(|(p, w)| w * p.max(PROB_FLOOR).ln())
            .sum()
    }
}

fn unitarity_defect(b: &CMatrix) -> f64 {
    let g = b.adjoint() * b;
    let d = g.nrows();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Measure in the eigenbasis of the SLD of the family at `zeta_ref`.
pub fn sld_measurement_basis(family: &PhaseFamily, zeta_ref: f64) -> Result<MeasurementModel> {
    let rho = family.density_at(zeta_ref)?;
    let drho = family.density_derivative(zeta_ref, SLD_STEP)?;
    let l = sld_operator(&rho, &drho)?;
    // Symmetrize away rounding before diagonalizing.
    let l = (&l + l.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = hermitian_eigen(&l)?;
    MeasurementModel::new(family, eig.vectors)
}

/// Multinomial draw of `n` shots from `p(true_zeta)`, by conditional binomials.
pub fn simulate_outcomes_with<R: Rng + ?Sized>(model: &MeasurementModel, true_zeta: f64, n: u64, rng: &mut R) -> Vec<u64> {
    sample_multinomial(&model.probabilities(true_zeta), n, rng)
}

/// As [`simulate_outcomes_with`], seeded.
pub fn simulate_outcomes(model: &MeasurementModel, true_zeta: f64, n: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_outcomes_with(model, true_zeta, n, &mut rng)
}

pub fn sample_multinomial<R: Rng + ?Sized>(probs: &[f64], n: u64, rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0; probs.len()];
    let mut left = n;
    let mut mass: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    for (k, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if k + 1 == probs.len() {
            counts[k] = left;
            break;
        }
        let q = if mass > 0.0 { (p.max(0.0) / mass).clamp(0.0, 1.0) } else { 0.0 };
        let draw = Binomial::new(left, q).map(|b| b.sample(rng)).unwrap_or(0);
        counts[k] = draw;
        left -= draw;
        mass -= p.max(0.0);
    }
    counts
}

fn check_window(lo: f64, hi: f64) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidWindow { lo, hi, reason: "bounds must be finite with lo < hi".into() });
    }
    Ok(())
}

/// Maximum-likelihood phase from outcome counts inside `[lo, hi]`.
pub fn mle_estimate(model: &MeasurementModel, counts: &[u64], window: (f64, f64)) -> Result<f64> {
    let w: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    mle_from_weights(model, &w, window)
}

/// Same as [`mle_estimate`] with real-valued outcome weights.
pub fn mle_from_weights(model: &MeasurementModel, weights: &[f64], window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    check_window(lo, hi)?;
    let widest = PI / (2.0 * model.spin.s());
    if hi - lo > widest + 1e-12 {
        return Err(Error::InvalidWindow { lo, hi, reason: format!("wider than pi/(2s) = {widest}") });
    }
    if weights.len() != model.outcomes() {
        return Err(Error::DimensionMismatch { left: model.outcomes(), right: weights.len() });
    }
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| lo + step * i as f64).collect();
    let ll: Vec<f64> = grid.iter().map(|&z| model.log_likelihood(weights, z)).collect();
    let best = ll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tie = 1e-12 * best.abs().max(1.0);
    let winners: Vec<usize> = (0..GRID_POINTS).filter(|&i| ll[i] >= best - tie).collect();
    if winners.len() > 2 || winners.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::FlatLikelihood);
    }
    let i = winners[winners.len() / 2];
    let a = grid[i.saturating_sub(1)];
    let b = grid[(i + 1).min(GRID_POINTS - 1)];
    Ok(golden_max(|z| model.log_likelihood(weights, z), a, b))
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > REFINE_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Outcome of a CRB saturation experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimationRun {
    pub true_zeta: f64,
    pub n: u64,
    pub m: usize,
    pub seed: u64,
    pub estimates: Vec<f64>,
    pub mean: f64,
    pub empirical_variance: f64,
    pub qfi: f64,
    pub classical_fisher: f64,
    /// `1 / (n F)`.
    pub crb_variance: f64,
    /// `empirical_variance / crb_variance`.
    pub ratio: f64,
}

impl EstimationRun {
    /// Plain-text summary; byte-identical for identical runs.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "true_zeta          {:.16e}", self.true_zeta);
        let _ = writeln!(out, "shots_n            {}", self.n);
        let _ = writeln!(out, "experiments_m      {}", self.m);
        let _ = writeln!(out, "seed               {}", self.seed);
        let _ = writeln!(out, "qfi                {:.16e}", self.qfi);
        let _ = writeln!(out, "classical_fisher   {:.16e}", self.classical_fisher);
        let _ = writeln!(out, "mean_estimate      {:.16e}", self.mean);
        let _ = writeln!(out, "empirical_variance {:.16e}", self.empirical_variance);
        let _ = writeln!(out, "crb_variance       {:.16e}", self.crb_variance);
        let _ = writeln!(out, "crb_std            {:.16e}", self.crb_variance.sqrt());
        let _ = writeln!(out, "ratio              {:.16e}", self.ratio);
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `m` experiments of `n` shots each at `true_zeta`, estimated by maximum
/// likelihood inside `true_zeta +/- pi/(4s)`.
pub fn crb_saturation_experiment(
    family: &PhaseFamily,
    true_zeta: f64,
    n: u64,
    m: usize,
    seed: u64,
    jobs: Option<usize>,
) -> Result<EstimationRun> {
    if m < 2 {
        return Err(Error::DegenerateStatistics(format!("need at least 2 experiments for a variance, got {m}")));
    }
    if n == 0 {
        return Err(Error::InvalidConfig("shots per experiment must be positive".into()));
    }
    let qfi = family.qfi_pure()?;
    if qfi <= crate::qfi_engine::QFI_FLOOR {
        return Err(Error::DegenerateStatistics("the family carries no information about the phase".into()));
    }
    let model = sld_measurement_basis(family, true_zeta)?;
    let half = PI / (4.0 * family.spin().s());
    let window = (true_zeta - half, true_zeta + half);
    let estimates = map_indexed(m, jobs, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let counts = simulate_outcomes_with(&model, true_zeta, n, &mut rng);
        mle_estimate(&model, &counts, window)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let mean = estimates.iter().sum::<f64>() / m as f64;
    let empirical_variance = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    let crb_variance = 1.0 / (n as f64 * qfi);
    Ok(EstimationRun {
        true_zeta,
        n,
        m,
        seed,
        estimates,
        mean,
        empirical_variance,
        qfi,
        classical_fisher: model.classical_fisher(true_zeta),
        crb_variance,
        ratio: empirical_variance / crb_variance,
    })
}
