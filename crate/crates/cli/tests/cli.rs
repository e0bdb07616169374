use std::path::Path;
use std::process::{Command, Output};

fn spincat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spincat")).args(args).output().unwrap()
}

fn spincat_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spincat")).current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&spincat(&["--help"])), 0);
    assert_eq!(code(&spincat(&["sweep2d", "--help"])), 0);
    assert_eq!(code(&spincat(&[])), 1);
    assert_eq!(code(&spincat(&["frobnicate"])), 1);
    assert_eq!(code(&spincat(&["qfi", "--spin", "3", "--generator", "sw"])), 1);
    assert_eq!(code(&spincat(&["qfi", "--spin", "0"])), 1);
    assert_eq!(code(&spincat(&["qfi", "--spin", "3", "--theta1", "4"])), 1);
    // no output requested
    assert_eq!(code(&spincat(&["sweep2d", "--spin", "3", "--generator", "sz"])), 1);
    assert_eq!(code(&spincat(&["sweep1d", "--spin", "3", "--generator", "sz", "--theta2", "0:pi:3", "--out", "-"])), 1);
    assert_eq!(code(&spincat(&["estimate", "--m", "1"])), 1);
    assert_eq!(code(&spincat(&["verify", "nonsense"])), 1);
}

#[test]
fn qfi_point() {
    let o = spincat(&["qfi", "--spin", "3", "--generator", "sz", "--theta2", "pi/2", "--theta1", "pi/2", "--engine", "both"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("numeric   qfi=3.0000000000"), "{text}");
    assert!(text.contains("analytic  qfi=3.0000000000"), "{text}");
    let o = spincat(&["qfi", "--spin", "8", "--noon"]);
    assert!(stdout(&o).contains("crb       0.125"));
}

#[test]
fn sweep_to_stdout_and_files() {
    let o = spincat(&[
        "sweep1d", "--spin", "5", "--spin", "8", "--generator", "sy", "--theta1", "0:pi:9", "--theta2", "diag", "--out", "-",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("theta1,theta2,phi1,phi2,spin_times_2,generator,qfi,crb,engine\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 18);

    let dir = tempfile::tempdir().unwrap();
    let o = spincat_in(
        dir.path(),
        &["sweep2d", "--spin", "3", "--generator", "sz", "--theta1", "0:pi:11", "--theta2", "0:pi:11", "--out", "a/b.csv", "--heatmap", "a/b.ppm"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let direct = std::fs::read(dir.path().join("a/b.ppm")).unwrap();
    assert!(direct.starts_with(b"P6\n11 11\n255\n"));
    let o = spincat_in(dir.path(), &["render", "--input", "a/b.csv", "--heatmap", "c.ppm"]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(dir.path().join("c.ppm")).unwrap(), direct);
}

#[test]
fn flags_override_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"spins": [3], "generator": "sz", "phi2": "pi", "theta1": "0:pi:5", "theta2": "0:pi:5", "out": "from_config.csv"}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = spincat_in(dir.path(), &["sweep2d", "--config", cfg, "--generator", "sx", "--spin", "5", "--out", "-"]);
    assert_eq!(code(&o), 0);
    assert!(!dir.path().join("from_config.csv").exists());
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.contains(",5,sx,"), "{row}");
    assert!(row.contains("3.1415926535897931e0"), "{row}");

    let o = spincat_in(dir.path(), &["sweep2d", "--config", cfg]);
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("from_config.csv").exists());

    std::fs::write(dir.path().join("bad.json"), r#"{"spins": [3], "generator": "sz", "colour": 1}"#).unwrap();
    assert_eq!(code(&spincat_in(dir.path(), &["sweep2d", "--config", "bad.json", "--out", "-"])), 1);
}

#[test]
fn estimate_is_reproducible_across_runs_and_jobs() {
    let args = ["estimate", "--noon", "--spin", "3", "--zeta", "0.1", "--n", "10000", "--m", "400", "--seed", "7"];
    let a = spincat(&[&args[..], &["--jobs", "1"]].concat());
    let b = spincat(&[&args[..], &["--jobs", "8"]].concat());
    let c = spincat(&[&args[..], &["--jobs", "8"]].concat());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
    let text = stdout(&a);
    let ratio: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("ratio"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((0.85..=1.25).contains(&ratio), "{ratio}");
}

#[test]
fn verify_exit_codes() {
    let o = spincat(&["verify", "hl-law"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 failed"));
    let o = spincat(&["verify", "errata", "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("sy-phi-pi"));
}

#[test]
fn numerical_failure_exit_code() {
    let o = spincat(&["estimate", "--theta1", "pi", "--theta2", "pi", "--phi2", "pi/3", "--m", "10"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}
