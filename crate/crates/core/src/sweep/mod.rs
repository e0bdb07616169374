//! Parameter sweeps over the Bloch angles of the two cat components.
//!
//! Cells are evaluated through [`crate::par::map_indexed`] and collected in
//! grid order, so the output never depends on the worker count.

pub mod config;
pub mod dataset;
pub mod heatmap;
pub mod verify;

use std::f64::consts::PI;

pub use config::{parse_angle, Angle, AngleRange, Engine, SweepConfig, ThetaSpec};
pub use dataset::{SweepDataset, SweepRow, CSV_HEADER};
pub use heatmap::{render_heatmap, write_heatmap};
pub use verify::{run_verify, Suite, VerifyReport};

use crate::analytic::{qfi_general_32, qfi_general_s};
use crate::coherent_states::{cat_state, CatParams, POLE_GUARD};
use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::qfi_engine::{crb, qfi_pure, GeneratorTag};
use crate::spin_algebra::Spin;

/// One grid point of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub spin: Spin,
    pub generator: GeneratorTag,
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl Cell {
    fn params(&self) -> Result<CatParams> {
        CatParams::from_angles(self.spin, self.theta1, self.phi1, self.theta2, self.phi2)
    }

    fn near_pole(&self) -> bool {
        self.theta1 >= PI - POLE_GUARD || self.theta2 >= PI - POLE_GUARD
    }
}

/// QFI from the numeric engine; NaN for a degenerate superposition.
pub fn numeric_qfi(cell: &Cell) -> Result<f64> {
    let psi = match cell.params().and_then(|p| cat_state(&p)) {
        Ok(psi) => psi,
        Err(Error::DegenerateSuperposition { .. }) => return Ok(f64::NAN),
        Err(e) => return Err(e),
    };
    qfi_pure(&psi, &cell.generator.operator(cell.spin))
}

/// QFI from the closed forms; `None` when the cell sits on the pole guard.
pub fn analytic_qfi(cell: &Cell) -> Result<Option<f64>> {
    if cell.near_pole() {
        return Ok(None);
    }
    let p = cell.params()?;
    let value = if cell.spin.twice_s() == 3 {
        qfi_general_32(cell.generator, cell.theta1, cell.theta2, cell.phi1, cell.phi2)
    } else {
        qfi_general_s(cell.spin, p.p1, p.p2, cell.generator)
    };
    match value {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegenerateSuperposition { .. }) => Ok(Some(f64::NAN)),
        Err(e) => Err(e),
    }
}

struct CellResult {
    row: SweepRow,
    deviation: Option<f64>,
    rerouted: bool,
}

fn evaluate(cell: &Cell, engine: Engine, n: u64) -> Result<CellResult> {
    let (qfi, label, deviation, rerouted) = match engine {
        Engine::Numeric => (numeric_qfi(cell)?, "numeric", None, false),
        Engine::Analytic => match analytic_qfi(cell)? {
            Some(v) => (v, "analytic", None, false),
            None => (numeric_qfi(cell)?, "numeric", None, true),
        },
        Engine::Both => {
            let num = numeric_qfi(cell)?;
            match analytic_qfi(cell)? {
                Some(a) => {
                    let dev = (a.is_finite() && num.is_finite()).then(|| (a - num).abs());
                    (num, "both", dev, false)
                }
                None => (num, "numeric", None, true),
            }
        }
    };
    let bound = if qfi.is_nan() { f64::NAN } else { crb(qfi, n).value() };
    Ok(CellResult {
        row: SweepRow {
            theta1: cell.theta1,
            theta2: cell.theta2,
            phi1: cell.phi1,
            phi2: cell.phi2,
            spin_times_2: cell.spin.twice_s(),
            generator: cell.generator,
            qfi,
            crb: bound,
            engine: label.to_string(),
        },
        deviation,
        rerouted,
    })
}

/// Evaluate an explicit list of cells.
pub fn run_cells(cells: &[Cell], engine: Engine, n: u64, jobs: Option<usize>) -> Result<SweepDataset> {
    let results = map_indexed(cells.len(), jobs, |i| evaluate(&cells[i], engine, n))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut ds = SweepDataset::default();
    let mut max_dev: Option<f64> = None;
    let mut rerouted = 0usize;
    let mut degenerate = 0usize;
    for r in results {
        if let Some(d) = r.deviation {
            max_dev = Some(max_dev.map_or(d, |m: f64| m.max(d)));
        }
        rerouted += usize::from(r.rerouted);
        degenerate += usize::from(r.row.qfi.is_nan());
        ds.rows.push(r.row);
    }
    ds.footer.push(format!("cells={}", ds.rows.len()));
    ds.footer.push(format!("engine={engine}"));
    ds.footer.push(format!("degenerate_cells={degenerate}"));
    if engine != Engine::Numeric {
        ds.footer.push(format!("pole_cells_numeric={rerouted}"));
    }
    if engine == Engine::Both {
        let m = max_dev.unwrap_or(0.0);
        ds.footer.push(format!("max_abs_qfi_deviation={}", dataset::format_float(m)));
        ds.max_deviation = Some(m);
    }
    Ok(ds)
}

/// Bound over the `theta1 x theta2` grid for every configured spin.
pub fn run_sweep2d(config: &SweepConfig) -> Result<SweepDataset> {
    let r2 = config.validate_2d()?;
    let t1 = config.theta1_range()?.values();
    let t2 = r2.values();
    let mut cells = Vec::with_capacity(config.spins.len() * t1.len() * t2.len());
    for spin in config.spin_list()? {
        for &a in &t1 {
            for &b in &t2 {
                cells.push(Cell {
                    spin,
                    generator: config.generator,
                    theta1: a,
                    theta2: b,
                    phi1: config.phi1.0,
                    phi2: config.phi2.0,
                });
            }
        }
    }
    run_cells(&cells, config.engine, config.n, config.jobs)
}

/// Bound along `theta1` with `theta2` fixed or equal to `theta1`.
pub fn run_sweep1d(config: &SweepConfig) -> Result<SweepDataset> {
    config.validate_1d()?;
    let t1 = config.theta1_range()?.values();
    let mut cells = Vec::with_capacity(config.spins.len() * t1.len());
    for spin in config.spin_list()? {
        for &a in &t1 {
            let b = match config.theta2 {
                ThetaSpec::Fixed(v) => v.clamp(0.0, PI),
                ThetaSpec::Diagonal => a,
                ThetaSpec::Range(_) => unreachable!("validated"),
            };
            cells.push(Cell {
                spin,
                generator: config.generator,
                theta1: a,
                theta2: b,
                phi1: config.phi1.0,
                phi2: config.phi2.0,
            });
        }
    }
    run_cells(&cells, config.engine, config.n, config.jobs)
}
