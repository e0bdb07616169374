//! Acceptance suite. One line per criterion; exits nonzero if any fails.
//!
//! Run with `cargo test -p spincat --test acceptance`.

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spincat::analytic::errata::{errata_report, ErrataStatus, CONFIRM_TOL};
use spincat::analytic::{qfi_general_32, qfi_general_s};
use spincat::coherent_states::{cat_state, coherent_state, noon_state, overlap_closed_form, BlochPoint, CatParams};
use spincat::estimation::crb_saturation_experiment;
use spincat::qfi_engine::{
    crb, qfi_fidelity_fd, qfi_pure, qfi_sld, GeneratorTag, PhaseFamily, FIDELITY_STEP,
};
use spincat::spin_algebra::{build_splus, build_sx, build_sy, build_sz, commutator, CMatrix, Spin, SpinOperator};
use spincat::sweep::{run_sweep1d, run_sweep2d, SweepConfig, SweepDataset};

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Self { passed, summary: summary.into(), details: Vec::new() }
    }

    fn with_details(mut self, details: Vec<String>) -> Self {
        self.details = details;
        self
    }
}

fn spin(t: u32) -> Spin {
    Spin::new(t).unwrap()
}

// --- reference implementations, written out longhand -------------------

fn ref_sz(t: u32) -> CMatrix {
    let s = f64::from(t) / 2.0;
    CMatrix::from_fn(t as usize + 1, t as usize + 1, |i, j| {
        if i == j { Complex64::new(i as f64 - s, 0.0) } else { Complex64::new(0.0, 0.0) }
    })
}

fn ref_splus(t: u32) -> CMatrix {
    let s = f64::from(t) / 2.0;
    CMatrix::from_fn(t as usize + 1, t as usize + 1, |i, j| {
        let m = j as f64 - s;
        if i == j + 1 { Complex64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0) } else { Complex64::new(0.0, 0.0) }
    })
}

fn ref_generator(t: u32, tag: GeneratorTag) -> CMatrix {
    let p = ref_splus(t);
    let m = p.adjoint();
    match tag {
        GeneratorTag::Sz => ref_sz(t),
        GeneratorTag::Sx => (&p + &m) * Complex64::new(0.5, 0.0),
        GeneratorTag::Sy => (&p - &m) * Complex64::new(0.0, -0.5),
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn ref_coherent(t: u32, theta: f64, phi: f64) -> Vec<Complex64> {
    let (s, c) = (theta / 2.0).sin_cos();
    (0..=t)
        .map(|k| {
            let mag = binomial(t, k).sqrt() * c.powi((t - k) as i32) * s.powi(k as i32);
            Complex64::from_polar(mag, -(f64::from(k)) * phi)
        })
        .collect()
}

fn ref_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn ref_cat(t: u32, t1: f64, p1: f64, t2: f64, p2: f64) -> Option<Vec<Complex64>> {
    let a = ref_coherent(t, t1, p1);
    let b = ref_coherent(t, t2, p2);
    let v: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    let norm = ref_inner(&v, &v).re.sqrt();
    (norm > 1e-6).then(|| v.iter().map(|x| x / norm).collect())
}

fn ref_qfi(psi: &[Complex64], h: &CMatrix) -> f64 {
    let n = psi.len();
    let hpsi: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| h[(i, j)] * psi[j]).sum()).collect();
    let mean = ref_inner(psi, &hpsi).re;
    let second = ref_inner(&hpsi, &hpsi).re;
    4.0 * (second - mean * mean)
}

fn ref_crb(f: f64) -> f64 {
    if f <= 1e-10 { f64::INFINITY } else { 1.0 / f.sqrt() }
}

fn engine_crb(tag: GeneratorTag, t: u32, t1: f64, p1: f64, t2: f64, p2: f64) -> f64 {
    let s = spin(t);
    CatParams::from_angles(s, t1, p1, t2, p2)
        .and_then(|p| cat_state(&p))
        .and_then(|psi| qfi_pure(&psi, &tag.operator(s)))
        .map(|f| crb(f, 1).value())
        .unwrap_or(f64::NAN)
}

fn rel(a: f64, b: f64) -> f64 {
    if b.abs() < 1e-12 { (a - b).abs() } else { (a - b).abs() / b.abs() }
}

fn figures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../figures")
}

fn recipe(name: &str) -> SweepConfig {
    SweepConfig::load(&figures_dir().join(format!("{name}.json"))).unwrap()
}

// --- criteria --------------------------------------------------------------

fn heisenberg_law() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_ref = 0.0f64;
    for t in 1..=32 {
        let hl = 1.0 / f64::from(t);
        for phi in [0.0, 0.9, PI / 2.0, PI, 5.1] {
            worst = worst.max((engine_crb(GeneratorTag::Sz, t, 0.0, 0.0, PI, phi) - hl).abs());
            let psi = ref_cat(t, 0.0, 0.0, PI, phi).unwrap();
            worst_ref = worst_ref.max((ref_crb(ref_qfi(&psi, &ref_sz(t))) - hl).abs());
        }
    }
    Outcome::new(
        worst <= 1e-10 && worst_ref <= 1e-10,
        format!("antipodal Sz bound = 1/(2s) for 2s=1..32: max dev {worst:.2e} (reference {worst_ref:.2e})"),
    )
}

fn sql_anchor() -> Outcome {
    let v = engine_crb(GeneratorTag::Sz, 3, PI / 2.0, 0.0, PI / 2.0, 0.0);
    let r = ref_crb(ref_qfi(&ref_cat(3, PI / 2.0, 0.0, PI / 2.0, 0.0).unwrap(), &ref_sz(3)));
    Outcome::new(
        (v - 0.5773).abs() <= 5e-4 && (v - r).abs() <= 1e-12,
        format!("s=3/2 equatorial Sz bound {v:.6} vs 0.5773 (reference {r:.6})"),
    )
}

struct Quoted {
    label: &'static str,
    quoted: f64,
    tol: f64,
    measured: f64,
    note: Option<String>,
}

fn quoted_table() -> Outcome {
    use GeneratorTag::*;
    let n = |tag, t1: f64, t2: f64, phi: f64| engine_crb(tag, 3, t1, 0.0, t2, -phi);
    let near_pi = PI - 1e-4;
    let diagonal_min = (1..2000)
        .map(|i| n(Sz, PI * f64::from(i) / 2000.0, PI * f64::from(i) / 2000.0, 4.0 * PI / 3.0))
        .filter(|v| v.is_finite())
        .fold(f64::INFINITY, f64::min);
    let rows = vec![
        Quoted { label: "Sx Phi=0 theta=0", quoted: 0.577, tol: 5e-3, measured: n(Sx, 0.0, 0.0, 0.0), note: None },
        Quoted {
            label: "Sx Phi=pi/2 (0, 3pi/4)",
            quoted: 0.479,
            tol: 5e-3,
            measured: n(Sx, 0.0, 0.75 * PI, PI / 2.0),
            note: Some(format!("swapped angles (3pi/4, 0) give {:.5}", n(Sx, 0.75 * PI, 0.0, PI / 2.0))),
        },
        Quoted {
            label: "Sx Phi=3pi/4 (pi/2, pi/2)",
            quoted: 0.3693,
            tol: 5e-4,
            measured: n(Sx, PI / 2.0, PI / 2.0, 0.75 * PI),
            note: None,
        },
        Quoted {
            label: "Sx Phi=3pi/4 (2pi/3, pi/3)",
            quoted: 0.3985,
            tol: 5e-4,
            measured: n(Sx, 2.0 * PI / 3.0, PI / 3.0, 0.75 * PI),
            note: None,
        },
        Quoted {
            label: "Sx Phi=pi (pi/2, pi/2)",
            quoted: 1.0 / 3.0,
            tol: 5e-4,
            measured: n(Sx, PI / 2.0, PI / 2.0, PI),
            note: None,
        },
        Quoted {
            label: "Sy Phi=pi/2 (0, pi)",
            quoted: 0.471,
            tol: 5e-3,
            measured: n(Sy, 0.0, PI, PI / 2.0),
            note: Some("state is (|-3/2> + e^{ix}|3/2>)/sqrt2 for any phase, Var(Sy) = 3/4".into()),
        },
        Quoted {
            label: "Sy Phi=pi/2 (pi/6, 5pi/6)",
            quoted: 0.361,
            tol: 5e-3,
            measured: n(Sy, PI / 6.0, 5.0 * PI / 6.0, PI / 2.0),
            note: Some(format!("swapped angles give {:.5}", n(Sy, 5.0 * PI / 6.0, PI / 6.0, PI / 2.0))),
        },
        Quoted {
            label: "Sy phi2=pi theta1=theta2->pi",
            quoted: 0.377964,
            tol: 1e-5,
            measured: n(Sy, near_pi, near_pi, PI),
            note: Some("evaluated at pi-1e-4; the superposition vanishes at pi".into()),
        },
        Quoted {
            label: "Sz Phi=4pi/3 diagonal minimum",
            quoted: 0.4236,
            tol: 5e-3,
            measured: diagonal_min,
            note: Some(format!("not constant: theta=pi/3 gives {:.5}", n(Sz, PI / 3.0, PI / 3.0, 4.0 * PI / 3.0))),
        },
    ];
    let mut details = Vec::new();
    let mut failed = 0;
    for q in &rows {
        let ok = (q.measured - q.quoted).abs() <= q.tol;
        failed += usize::from(!ok);
        details.push(format!(
            "{} {:<30} quoted {:<9.6} measured {:.8} (tol {:.0e})",
            if ok { "ok  " } else { "MISS" },
            q.label,
            q.quoted,
            q.measured,
            q.tol
        ));
        if let Some(note) = &q.note {
            details.push(format!("     {note}"));
        }
    }
    Outcome::new(failed == 0, format!("quoted values: {}/{} reproduced", rows.len() - failed, rows.len()))
        .with_details(details)
}

fn oracle_triangle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut cases = 0;
    while cases < 50 {
        let t = rng.random_range(1..=12);
        let tag = GeneratorTag::ALL[rng.random_range(0..3)];
        let p1 = BlochPoint::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU)).unwrap();
        let p2 = BlochPoint::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU)).unwrap();
        let Ok(psi) = cat_state(&CatParams::new(spin(t), p1, p2)) else { continue };
        let h = tag.operator(spin(t));
        let fam = PhaseFamily::new(psi.clone(), &h).unwrap();
        let z0 = rng.random_range(-1.0..1.0);
        let a = qfi_pure(&psi, &h).unwrap();
        let b = qfi_sld(&fam, z0).unwrap();
        let c = qfi_fidelity_fd(&fam, z0, FIDELITY_STEP).unwrap();
        for (x, y) in [(a, b), (a, c), (b, c)] {
            worst = worst.max((x - y).abs() / x.abs().max(y.abs()));
        }
        cases += 1;
    }
    Outcome::new(worst <= 1e-4, format!("pure / SLD / fidelity on 50 random cats: max pairwise rel dev {worst:.2e}"))
}

fn analytic_vs_numeric() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let point = |rng: &mut ChaCha8Rng| {
        (
            BlochPoint::new(rng.random_range(0.0..PI - 1e-3), rng.random_range(0.0..TAU)).unwrap(),
            BlochPoint::new(rng.random_range(0.0..PI - 1e-3), rng.random_range(0.0..TAU)).unwrap(),
        )
    };
    for tag in GeneratorTag::ALL {
        let mut worst = 0.0f64;
        let mut n = 0;
        while n < 200 {
            let (p1, p2) = point(&mut rng);
            let Ok(psi) = cat_state(&CatParams::new(spin(3), p1, p2)) else { continue };
            let num = qfi_pure(&psi, &tag.operator(spin(3))).unwrap();
            let a = qfi_general_32(tag, p1.theta(), p2.theta(), p1.phi(), p2.phi()).unwrap();
            worst = worst.max(rel(a, num));
            n += 1;
        }
        ok &= worst <= 1e-9;
        details.push(format!("{tag} spin-3/2 form: max rel dev {worst:.2e} (tol 1e-9)"));
    }
    for tag in GeneratorTag::ALL {
        let (mut low, mut high) = (0.0f64, 0.0f64);
        let mut n = 0;
        while n < 200 {
            let t = rng.random_range(1..=40);
            let (p1, p2) = point(&mut rng);
            let Ok(psi) = cat_state(&CatParams::new(spin(t), p1, p2)) else { continue };
            let num = qfi_pure(&psi, &tag.operator(spin(t))).unwrap();
            let a = qfi_general_s(spin(t), p1, p2, tag).unwrap();
            if t >= 20 {
                high = high.max(rel(a, num));
            } else {
                low = low.max(rel(a, num));
            }
            n += 1;
        }
        ok &= low <= 1e-9 && high <= 1e-6;
        details.push(format!("{tag} general-s form: max rel dev {low:.2e} for s<10 (tol 1e-9), {high:.2e} for s>=10 (tol 1e-6)"));
    }
    Outcome::new(ok, "closed forms vs numeric engine on 200 random points each").with_details(details)
}

fn errata_catalog() -> Outcome {
    let report = errata_report(None);
    let mut details = Vec::new();
    let mut ok = report.special_forms.len() == 12;
    for e in &report.special_forms {
        let measured = e.max_rel_dev.is_finite() && e.points > 0;
        let confirmed = e.status == ErrataStatus::Confirmed && e.max_rel_dev <= CONFIRM_TOL;
        ok &= confirmed || measured;
        details.push(format!(
            "{:<14} {:<22} max rel dev {:.3e} non-real {}",
            e.id, e.status.to_string(), e.max_rel_dev, e.undefined_points
        ));
    }
    let identity = report.entry("sy-phi-pi").map(|e| e.status == ErrataStatus::Discrepant).unwrap_or(false);
    ok &= identity;
    let cataloged = report.special_forms.iter().filter(|e| e.status != ErrataStatus::Confirmed).count();
    Outcome::new(
        ok,
        format!(
            "errata report: {} special forms, {} confirmed, {} cataloged (sy Phi=pi identity cataloged: {identity})",
            report.special_forms.len(),
            report.special_forms.len() - cataloged,
            cataloged
        ),
    )
    .with_details(details)
}

fn argmin_cells(ds: &SweepDataset, t: u32, tol: f64) -> Vec<(f64, f64)> {
    let min = ds.minimum(t).unwrap().crb;
    ds.rows_for(t).filter(|r| r.crb.is_finite() && r.crb <= min + tol).map(|r| (r.theta1, r.theta2)).collect()
}

fn figure_geometry() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;

    let fig1a = run_sweep2d(&recipe("fig1a")).unwrap();
    let infs: Vec<(f64, f64)> =
        fig1a.rows.iter().filter(|r| r.crb == f64::INFINITY).map(|r| (r.theta1, r.theta2)).collect();
    let inf_ok = infs == vec![(0.0, 0.0), (PI, PI)];
    let mins = argmin_cells(&fig1a, 3, 1e-12);
    let min_ok = mins == vec![(0.0, PI), (PI, 0.0)] && (fig1a.minimum(3).unwrap().crb - 1.0 / 3.0).abs() < 1e-12;
    ok &= inf_ok && min_ok;
    details.push(format!("fig1a: inf cells {infs:?}, minimum cells {mins:?}"));

    let fig4b = run_sweep1d(&recipe("fig4b")).unwrap();
    for t in fig4b.spins() {
        let v: Vec<f64> = fig4b.rows_for(t).map(|r| r.crb).collect();
        let spread = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min);
        ok &= spread <= 1e-9;
        details.push(format!("fig4b 2s={t}: Sy bound spread along theta {spread:.2e}"));
    }

    let fig4a = run_sweep1d(&recipe("fig4a")).unwrap();
    for t in fig4a.spins() {
        let at_half = fig4a.rows_for(t).find(|r| (r.theta1 - PI / 2.0).abs() < 1e-12).map(|r| r.crb);
        let sql = fig4a.rows_for(t).next().unwrap().crb;
        ok &= at_half == Some(f64::INFINITY);
        details.push(format!("fig4a 2s={t}: Sx bound at pi/2 = {:?}, at 0 = {sql:.4}", at_half.unwrap_or(f64::NAN)));
    }

    let fig10c = run_sweep2d(&recipe("fig10c")).unwrap();
    for t in fig10c.spins() {
        let mins = argmin_cells(&fig10c, t, 1e-12);
        let centre = mins.iter().any(|&(a, b)| (a - PI / 2.0).abs() < 1e-12 && (b - PI / 2.0).abs() < 1e-12);
        let value = fig10c.minimum(t).unwrap().crb;
        ok &= centre && (value - 1.0 / f64::from(t)).abs() < 1e-10;
        details.push(format!("fig10c 2s={t}: minimum {value:.6} at {mins:?}"));
    }
    Outcome::new(ok, "figure geometry: fig1a corners, fig4 Sy constancy and Sx divergence, fig10c centre")
        .with_details(details)
}

fn algebra() -> Outcome {
    let i = Complex64::i();
    let (mut build, mut comm, mut casimir, mut spectrum, mut overlap) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for t in 1..=20 {
        let s = spin(t);
        let (x, y, z) = (build_sx(s), build_sy(s), build_sz(s));
        let diff = |a: &CMatrix, b: &CMatrix| (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max);
        build = build
            .max(diff(z.matrix(), &ref_sz(t)))
            .max(diff(build_splus(s).matrix(), &ref_splus(t)))
            .max(diff(x.matrix(), &ref_generator(t, GeneratorTag::Sx)))
            .max(diff(y.matrix(), &ref_generator(t, GeneratorTag::Sy)));
        for (a, b, c) in [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)] {
            comm = comm.max(commutator(a, b).unwrap().max_abs_diff(&c.scale(i)).unwrap());
        }
        let sq = x.mul(&x).unwrap().add(&y.mul(&y).unwrap()).unwrap().add(&z.mul(&z).unwrap()).unwrap();
        let ss = s.s() * (s.s() + 1.0);
        casimir = casimir.max(sq.max_abs_diff(&SpinOperator::identity(s).scale(Complex64::from(ss))).unwrap());
        for op in [&x, &y, &z] {
            let ev = op.eigenvalues().unwrap();
            for (k, e) in ev.iter().enumerate() {
                spectrum = spectrum.max((e - (k as f64 - s.s())).abs());
            }
        }
        for _ in 0..10 {
            let (t1, p1, t2, p2) =
                (rng.random_range(0.0..PI), rng.random_range(0.0..TAU), rng.random_range(0.0..PI), rng.random_range(0.0..TAU));
            let a = ref_coherent(t, t1, p1);
            let b = ref_coherent(t, t2, p2);
            let (b1, b2) = (BlochPoint::new(t1, p1).unwrap(), BlochPoint::new(t2, p2).unwrap());
            let closed = overlap_closed_form(s, b1, b2);
            let engine = coherent_state(s, b1).inner(&coherent_state(s, b2)).unwrap();
            overlap = overlap.max((ref_inner(&a, &b) - closed).norm()).max((engine - closed).norm());
        }
    }
    let ok = build <= 1e-12 && comm <= 1e-10 && casimir <= 1e-10 && spectrum <= 1e-10 && overlap <= 1e-12;
    Outcome::new(ok, "spin algebra for 2s=1..20").with_details(vec![
        format!("operators vs longhand construction {build:.2e}"),
        format!("commutators {comm:.2e}, Casimir {casimir:.2e}, eigenvalues {spectrum:.2e}"),
        format!("coherent overlap closed form vs inner products {overlap:.2e}"),
    ])
}

fn crb_saturation() -> Outcome {
    let s = spin(3);
    let fam = PhaseFamily::new(noon_state(s), &build_sz(s)).unwrap();
    let a = crb_saturation_experiment(&fam, 0.1, 10_000, 400, 7, Some(1)).unwrap();
    let b = crb_saturation_experiment(&fam, 0.1, 10_000, 400, 7, Some(8)).unwrap();
    let c = crb_saturation_experiment(&fam, 0.1, 10_000, 400, 7, Some(8)).unwrap();
    let bits = |r: &spincat::estimation::EstimationRun| r.estimates.iter().map(|e| e.to_bits()).collect::<Vec<_>>();
    let reproducible = bits(&a) == bits(&b) && bits(&b) == bits(&c) && a.report() == b.report();
    let in_range = (0.85..=1.25).contains(&a.ratio);
    Outcome::new(
        reproducible && in_range,
        format!(
            "NOON s=3/2 Sz, n=1e4, m=400, seed 7: variance ratio {:.4}, jobs 1 vs 8 identical: {reproducible}",
            a.ratio
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("ac1", heisenberg_law),
        ("ac2", sql_anchor),
        ("ac3", quoted_table),
        ("ac4", oracle_triangle),
        ("ac5", analytic_vs_numeric),
        ("ac6", errata_catalog),
        ("ac7", figure_geometry),
        ("ac8", algebra),
        ("ac9", crb_saturation),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        let start = Instant::now();
        let out = run();
        failed += usize::from(!out.passed);
        println!(
            "{} {id} {} ({:.1}s)",
            if out.passed { "PASS" } else { "FAIL" },
            out.summary,
            start.elapsed().as_secs_f64()
        );
        for d in &out.details {
            println!("        {d}");
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
