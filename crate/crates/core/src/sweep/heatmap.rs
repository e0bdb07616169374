//! Binary PPM (P6) rendering of 2-D sweeps.
//!
//! One panel per spin, laid out left to right and separated by a black
//! column. Inside a panel `theta1` runs along x and `theta2` upward along y,
//! one pixel per cell. Bounds map linearly from `1/(2s)` to `cap`; larger
//! values saturate at the cap color.

use std::path::Path;

use crate::analytic::hl;
use crate::error::{Error, Result};
use crate::spin_algebra::Spin;

use super::dataset::{SweepDataset, SweepRow};

pub const INF_COLOR: [u8; 3] = [255, 255, 255];
pub const NAN_COLOR: [u8; 3] = [128, 128, 128];
pub const SEPARATOR: [u8; 3] = [0, 0, 0];

// dark blue -> teal -> green -> yellow
const STOPS: [[f64; 3]; 5] = [
    [68.0, 1.0, 84.0],
    [59.0, 82.0, 139.0],
    [33.0, 145.0, 140.0],
    [94.0, 201.0, 98.0],
    [253.0, 231.0, 37.0],
];

/// Colormap lookup for `t` in `[0, 1]` (clamped).
pub fn colormap(t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (t.floor() as usize).min(STOPS.len() - 2);
    let f = t - i as f64;
    let mut out = [0u8; 3];
    for (c, o) in out.iter_mut().enumerate() {
        *o = (STOPS[i][c] + f * (STOPS[i + 1][c] - STOPS[i][c])).round() as u8;
    }
    out
}

/// Pixel color for one bound.
pub fn cell_color(crb: f64, floor: f64, cap: f64) -> [u8; 3] {
    if crb.is_nan() {
        NAN_COLOR
    } else if crb.is_infinite() {
        INF_COLOR
    } else if cap <= floor {
        colormap(0.0)
    } else {
        colormap((crb - floor) / (cap - floor))
    }
}

struct Panel<'a> {
    twice_s: u32,
    n1: usize,
    n2: usize,
    rows: Vec<&'a SweepRow>,
}

fn panel(ds: &SweepDataset, twice_s: u32) -> Result<Panel<'_>> {
    let rows: Vec<&SweepRow> = ds.rows_for(twice_s).collect();
    let n2 = rows.iter().take_while(|r| r.theta1 == rows[0].theta1).count();
    if n2 < 2 || rows.len() % n2 != 0 {
        return Err(Error::NotAGrid(format!("spin 2s={twice_s}: {} rows do not form a grid", rows.len())));
    }
    let n1 = rows.len() / n2;
    if n1 < 2 {
        return Err(Error::NotAGrid(format!("spin 2s={twice_s}: only one theta1 value")));
    }
    for i in 0..n1 {
        for j in 0..n2 {
            let r = rows[i * n2 + j];
            if r.theta1 != rows[i * n2].theta1 || r.theta2 != rows[j].theta2 {
                return Err(Error::NotAGrid(format!(
                    "spin 2s={twice_s}: row {} breaks the theta1-major layout",
                    i * n2 + j
                )));
            }
        }
    }
    Ok(Panel { twice_s, n1, n2, rows })
}

/// Render a 2-D dataset as a P6 image.
pub fn render_heatmap(ds: &SweepDataset, cap: f64) -> Result<Vec<u8>> {
    if !(cap.is_finite() && cap > 0.0) {
        return Err(Error::InvalidConfig(format!("cap must be positive, got {cap}")));
    }
    let spins = ds.spins();
    if spins.is_empty() {
        return Err(Error::NotAGrid("dataset is empty".into()));
    }
    let panels = spins.iter().map(|&t| panel(ds, t)).collect::<Result<Vec<_>>>()?;
    let height = panels[0].n2;
    if panels.iter().any(|p| p.n2 != height) {
        return Err(Error::NotAGrid("panels have different theta2 grids".into()));
    }
    let width = panels.iter().map(|p| p.n1).sum::<usize>() + panels.len() - 1;

    let header = format!("P6\n{width} {height}\n255\n");
    let mut img = Vec::with_capacity(header.len() + 3 * width * height);
    img.extend_from_slice(header.as_bytes());
    let floors: Vec<f64> = panels.iter().map(|p| Spin::new(p.twice_s).map(hl)).collect::<Result<_>>()?;
    for y in 0..height {
        let j = height - 1 - y;
        for (k, p) in panels.iter().enumerate() {
            if k > 0 {
                img.extend_from_slice(&SEPARATOR);
            }
            for i in 0..p.n1 {
                img.extend_from_slice(&cell_color(p.rows[i * p.n2 + j].crb, floors[k], cap));
            }
        }
    }
    Ok(img)
}

pub fn write_heatmap(ds: &SweepDataset, cap: f64, path: &Path) -> Result<()> {
    std::fs::write(path, render_heatmap(ds, cap)?)?;
    Ok(())
}
