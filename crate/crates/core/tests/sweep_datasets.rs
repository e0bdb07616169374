use std::f64::consts::PI;
use std::path::PathBuf;

use spincat::sweep::heatmap::{colormap, INF_COLOR};
use spincat::sweep::{render_heatmap, run_sweep1d, run_sweep2d, AngleRange, SweepConfig, SweepDataset, ThetaSpec};

fn figures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../figures")
}

fn recipe(name: &str) -> SweepConfig {
    SweepConfig::load(&figures_dir().join(format!("{name}.json"))).unwrap()
}

fn coarse(mut cfg: SweepConfig, steps: usize) -> SweepConfig {
    cfg.theta1 = ThetaSpec::Range(AngleRange { lo: 0.0, hi: PI, steps });
    if let ThetaSpec::Range(_) = cfg.theta2 {
        cfg.theta2 = cfg.theta1;
    }
    cfg
}

#[test]
fn every_recipe_loads_and_validates() {
    let mut names: Vec<String> = std::fs::read_dir(figures_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    assert_eq!(names.len(), 36);
    for name in names {
        let cfg = SweepConfig::load(&figures_dir().join(&name)).unwrap();
        let ok = match cfg.theta2 {
            ThetaSpec::Range(_) => cfg.validate_2d().is_ok(),
            _ => cfg.validate_1d().is_ok(),
        };
        assert!(ok, "{name}");
        assert!(cfg.out.is_some(), "{name}");
    }
}

#[test]
fn csv_file_round_trip() {
    let cfg = coarse(recipe("fig2c"), 41);
    let ds = run_sweep2d(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2c.csv");
    ds.write_csv(&path).unwrap();
    let back = SweepDataset::read_csv(&path).unwrap();
    assert_eq!(back.rows.len(), 41 * 41);
    for (a, b) in ds.rows.iter().zip(&back.rows) {
        assert_eq!(a.theta1.to_bits(), b.theta1.to_bits());
        assert_eq!(a.theta2.to_bits(), b.theta2.to_bits());
        assert_eq!(a.qfi.to_bits(), b.qfi.to_bits());
        assert_eq!(a.crb.to_bits(), b.crb.to_bits());
        assert_eq!(a.engine, b.engine);
    }
    assert_eq!(back.max_deviation, ds.max_deviation);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), back.to_csv());
}

#[test]
fn recipes_keep_both_engines_within_a_millionth() {
    for name in ["fig1c", "fig2b", "fig3d", "fig9b", "fig10a", "fig11c"] {
        let ds = run_sweep2d(&coarse(recipe(name), 31)).unwrap();
        assert!(ds.max_deviation.unwrap() <= 1e-6, "{name}: {:?}", ds.max_deviation);
    }
    for name in ["fig4a", "fig5c", "fig6b", "fig7b", "fig8c"] {
        let ds = run_sweep1d(&coarse(recipe(name), 61)).unwrap();
        assert!(ds.max_deviation.unwrap() <= 1e-6, "{name}: {:?}", ds.max_deviation);
    }
}

#[test]
fn fig1a_heatmap_corners() {
    let ds = run_sweep2d(&coarse(recipe("fig1a"), 21)).unwrap();
    let img = render_heatmap(&ds, 1.0).unwrap();
    let header = b"P6\n21 21\n255\n";
    assert_eq!(&img[..header.len()], header);
    let px = &img[header.len()..];
    let at = |x: usize, y: usize| &px[3 * (y * 21 + x)..3 * (y * 21 + x) + 3];
    // y = 0 is the top row, theta2 = pi
    assert_eq!(at(0, 0), colormap(0.0));
    assert_eq!(at(20, 20), colormap(0.0));
    assert_eq!(at(0, 20), INF_COLOR);
    assert_eq!(at(20, 0), INF_COLOR);
    assert_eq!(render_heatmap(&ds, 1.0).unwrap(), img);
}

#[test]
fn one_dimensional_recipes_follow_theta2() {
    let ds = run_sweep1d(&coarse(recipe("fig8a"), 11)).unwrap();
    assert_eq!(ds.rows.len(), 6 * 11);
    assert!(ds.rows.iter().all(|r| (r.theta2 - PI / 3.0).abs() < 1e-15));
    let ds = run_sweep1d(&coarse(recipe("fig5a"), 11)).unwrap();
    assert!(ds.rows.iter().all(|r| r.theta1 == r.theta2));
}
