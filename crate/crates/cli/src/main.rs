use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spincat::coherent_states::{cat_state, noon_state, CatParams, StateVector};
use spincat::qfi_engine::{crb, qfi_pure, GeneratorTag, PhaseFamily};
use spincat::spin_algebra::Spin;
use spincat::sweep::{
    analytic_qfi, numeric_qfi, parse_angle, run_sweep1d, run_sweep2d, run_verify, write_heatmap, Angle, Cell,
    Engine, Suite, SweepConfig, SweepDataset, ThetaSpec,
};
use spincat::{estimation, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "spincat", version, about = "Quantum Fisher information of spin cat states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// QFI and Cramér-Rao bound at a single point.
    Qfi(QfiArgs),
    /// Bound over a theta1 x theta2 grid.
    Sweep2d(SweepArgs),
    /// Bound along theta1 with theta2 fixed (fixed:v) or tied to theta1 (diag).
    Sweep1d(SweepArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Monte-Carlo maximum-likelihood estimation against the bound.
    Estimate(EstimateArgs),
    /// Render a heatmap from a 2-D sweep CSV.
    Render(RenderArgs),
}

#[derive(Args)]
struct QfiArgs {
    /// Spin as 2s.
    #[arg(long)]
    spin: u32,
    #[arg(long, default_value = "sz")]
    generator: GeneratorTag,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    theta1: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    theta2: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    phi1: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    phi2: String,
    /// Use the NOON state instead of the cat angles.
    #[arg(long)]
    noon: bool,
    #[arg(long, default_value = "numeric")]
    engine: Engine,
    /// Repetitions.
    #[arg(long, default_value_t = 1)]
    n: u64,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Spin as 2s (repeatable).
    #[arg(long)]
    spin: Vec<u32>,
    #[arg(long)]
    generator: Option<GeneratorTag>,
    #[arg(long, allow_hyphen_values = true)]
    phi1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi2: Option<String>,
    /// lo:hi:steps
    #[arg(long)]
    theta1: Option<String>,
    /// lo:hi:steps, fixed:v or diag
    #[arg(long)]
    theta2: Option<String>,
    #[arg(long)]
    engine: Option<Engine>,
    /// Repetitions.
    #[arg(long)]
    n: Option<u64>,
    /// CSV output, `-` for stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// PPM heatmap output (2-D only).
    #[arg(long)]
    heatmap: Option<PathBuf>,
    /// Upper end of the heatmap color scale.
    #[arg(long)]
    cap: Option<f64>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// algebra, oracles, analytic, hl-law, errata or all.
    #[arg(default_value = "all")]
    suite: Suite,
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write the report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Spin as 2s.
    #[arg(long, default_value_t = 3)]
    spin: u32,
    #[arg(long, default_value = "sz")]
    generator: GeneratorTag,
    /// Use the NOON state (the default when no angles are given).
    #[arg(long)]
    noon: bool,
    #[arg(long, allow_hyphen_values = true)]
    theta1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta2: Option<String>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    phi1: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    phi2: String,
    /// True phase.
    #[arg(long, default_value = "0.1", allow_hyphen_values = true)]
    zeta: String,
    /// Shots per experiment.
    #[arg(long, default_value_t = 10_000)]
    n: u64,
    /// Number of experiments.
    #[arg(long, default_value_t = 400)]
    m: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the report (and estimates as JSON next to it) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Sweep CSV produced by sweep2d.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    heatmap: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    cap: f64,
}

enum Failure {
    Usage(String),
    Numeric(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

type CmdResult = Result<(), Failure>;

fn angle(text: &str) -> Result<f64, Failure> {
    Ok(parse_angle(text)?)
}

fn spin(t: u32) -> Result<Spin, Failure> {
    Ok(Spin::new(t)?)
}

fn qfi(a: QfiArgs) -> CmdResult {
    let s = spin(a.spin)?;
    let h = a.generator.operator(s);
    if a.noon {
        let f = qfi_pure(&noon_state(s), &h)?;
        println!("state     noon");
        println!("spin      {s}");
        println!("generator {}", a.generator);
        println!("qfi       {f:.16e}");
        println!("crb       {}", crb(f, a.n));
        return Ok(());
    }
    let cell = Cell {
        spin: s,
        generator: a.generator,
        theta1: angle(&a.theta1)?,
        theta2: angle(&a.theta2)?,
        phi1: angle(&a.phi1)?,
        phi2: angle(&a.phi2)?,
    };
    CatParams::from_angles(s, cell.theta1, cell.phi1, cell.theta2, cell.phi2)?;
    println!("spin      {s}");
    println!("generator {}", a.generator);
    println!("theta1    {:.16e}", cell.theta1);
    println!("theta2    {:.16e}", cell.theta2);
    println!("phi1      {:.16e}", cell.phi1);
    println!("phi2      {:.16e}", cell.phi2);
    let report = |label: &str, f: f64| {
        if f.is_nan() {
            println!("{label:<9} degenerate superposition");
        } else {
            println!("{label:<9} qfi={f:.16e} crb={}", crb(f, a.n));
        }
    };
    if a.engine != Engine::Analytic {
        report("numeric", numeric_qfi(&cell)?);
    }
    if a.engine != Engine::Numeric {
        match analytic_qfi(&cell)? {
            Some(f) => report("analytic", f),
            None => println!("analytic  not evaluated at the pole (theta >= pi - 1e-6)"),
        }
    }
    Ok(())
}

fn sweep_config(a: &SweepArgs) -> Result<SweepConfig, Failure> {
    let mut cfg = match &a.config {
        Some(path) => SweepConfig::load(path)?,
        None => {
            let generator = a
                .generator
                .ok_or_else(|| Failure::Usage("--generator is required without --config".into()))?;
            SweepConfig::new(a.spin.clone(), generator)
        }
    };
    if !a.spin.is_empty() {
        cfg.spins = a.spin.clone();
    }
    if let Some(g) = a.generator {
        cfg.generator = g;
    }
    if let Some(p) = &a.phi1 {
        cfg.phi1 = Angle(angle(p)?);
    }
    if let Some(p) = &a.phi2 {
        cfg.phi2 = Angle(angle(p)?);
    }
    if let Some(t) = &a.theta1 {
        cfg.theta1 = t.parse::<ThetaSpec>()?;
    }
    if let Some(t) = &a.theta2 {
        cfg.theta2 = t.parse::<ThetaSpec>()?;
    }
    if let Some(e) = a.engine {
        cfg.engine = e;
    }
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if a.out.is_some() {
        cfg.out = a.out.clone();
    }
    if a.heatmap.is_some() {
        cfg.heatmap = a.heatmap.clone();
    }
    if let Some(c) = a.cap {
        cfg.cap = c;
    }
    if a.jobs.is_some() {
        cfg.jobs = a.jobs;
    }
    if cfg.out.is_none() && cfg.heatmap.is_none() {
        return Err(Failure::Usage("no output requested (use --out and/or --heatmap)".into()));
    }
    Ok(cfg)
}

fn ensure_parent(path: &Path) -> Result<(), Failure> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))
        }
        _ => Ok(()),
    }
}

fn write_csv(ds: &SweepDataset, out: &Path) -> Result<(), Failure> {
    if out == Path::new("-") {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(ds.to_csv().as_bytes()).map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(())
    } else {
        ensure_parent(out)?;
        Ok(ds.write_csv(out)?)
    }
}

fn summarize(ds: &SweepDataset) {
    for t in ds.spins() {
        match ds.minimum(t) {
            Some(r) => eprintln!(
                "2s={t}: min crb {:.10} at theta1={:.6} theta2={:.6}",
                r.crb, r.theta1, r.theta2
            ),
            None => eprintln!("2s={t}: no finite bound"),
        }
    }
    for line in &ds.footer {
        eprintln!("{line}");
    }
}

fn sweep(a: SweepArgs, two_d: bool) -> CmdResult {
    let cfg = sweep_config(&a)?;
    if !two_d && cfg.heatmap.is_some() {
        return Err(Failure::Usage("--heatmap needs a 2-D sweep".into()));
    }
    let ds = if two_d { run_sweep2d(&cfg)? } else { run_sweep1d(&cfg)? };
    if let Some(out) = &cfg.out {
        write_csv(&ds, out)?;
    }
    if let Some(path) = &cfg.heatmap {
        ensure_parent(path)?;
        write_heatmap(&ds, cfg.cap, path)?;
    }
    summarize(&ds);
    Ok(())
}

fn verify(a: VerifyArgs) -> CmdResult {
    let report = run_verify(a.suite, a.jobs)?;
    let text = report.to_text();
    print!("{text}");
    if let Some(out) = &a.out {
        std::fs::write(out, &text).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify(format!("{} check(s) failed", report.failures())))
    }
}

fn estimate(a: EstimateArgs) -> CmdResult {
    let s = spin(a.spin)?;
    let state: StateVector = match (&a.theta1, &a.theta2) {
        (Some(t1), Some(t2)) if !a.noon => {
            let p = CatParams::from_angles(s, angle(t1)?, angle(&a.phi1)?, angle(t2)?, angle(&a.phi2)?)?;
            cat_state(&p)?
        }
        (None, None) => noon_state(s),
        _ if a.noon => return Err(Failure::Usage("--noon conflicts with --theta1/--theta2".into())),
        _ => return Err(Failure::Usage("give both --theta1 and --theta2, or neither".into())),
    };
    let family = PhaseFamily::new(state, &a.generator.operator(s))?;
    let run = estimation::crb_saturation_experiment(&family, angle(&a.zeta)?, a.n, a.m, a.seed, a.jobs)?;
    let text = format!("spin               {s}\ngenerator          {}\n{}", a.generator, run.report());
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Usage(e.to_string()))?;
            let json = run.to_json()?;
            std::fs::write(path.with_extension("json"), json).map_err(|e| Failure::Usage(e.to_string()))?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn render(a: RenderArgs) -> CmdResult {
    let ds = SweepDataset::read_csv(&a.input)?;
    ensure_parent(&a.heatmap)?;
    write_heatmap(&ds, a.cap, &a.heatmap)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Qfi(a) => qfi(a),
        Command::Sweep2d(a) => sweep(a, true),
        Command::Sweep1d(a) => sweep(a, false),
        Command::Verify(a) => verify(a),
        Command::Estimate(a) => estimate(a),
        Command::Render(a) => render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
