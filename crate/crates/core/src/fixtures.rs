//! Named, deterministic raster masks and box chains for tests and the command line.

use std::f64::consts::{LN_10, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex_map::{fixed_points_negative_axis, CPoint, MapParams};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::topology::{strip_grid, RasterSet};
use crate::verify::BoxChain;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureParams {
    /// Count parameter (circles, chain length).
    pub n: usize,
    pub seed: u64,
    /// Angular resolution of log-polar fixtures.
    pub width: usize,
    pub lambda: f64,
}

impl Default for FixtureParams {
    fn default() -> Self {
        Self {
            n: 5,
            seed: 0,
            width: 128,
            lambda: 32.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Fixture {
    Raster(RasterSet),
    Chain(BoxChain),
}

pub const NAMES: &[&str] = &[
    "circles-with-spoke",
    "concentric-circles",
    "single-circle",
    "plane-squares-web",
    "random-web",
    "random-mask",
    "fixed-point-chain",
    "orbit-chain",
];

pub fn fixture(name: &str, p: &FixtureParams) -> Result<Fixture> {
    Ok(match name {
        "circles-with-spoke" => Fixture::Raster(circles(p.n, p.width, true)?),
        "concentric-circles" => Fixture::Raster(circles(p.n, p.width, false)?),
        "single-circle" => Fixture::Raster(circles(1, p.width, false)?),
        "plane-squares-web" => Fixture::Raster(plane_squares_web(p.width)?),
        "random-web" => Fixture::Raster(random_web(p.seed)?),
        "random-mask" => Fixture::Raster(random_mask(p.seed, p.width, p.width / 2, 0.5)?),
        "fixed-point-chain" => {
            let params = MapParams::new(p.lambda)?;
            let fp = *fixed_points_negative_axis(&params).first().ok_or(Error::NoPointFound)?;
            Fixture::Chain(BoxChain::constant(CPoint::new(fp, 0.0), 0.01, p.n)?)
        }
        "orbit-chain" => {
            let params = MapParams::new(p.lambda)?;
            Fixture::Chain(BoxChain::along_orbit(&params, CPoint::new(3.0, 0.0), p.n, 0.2)?)
        }
        other => return Err(Error::UnknownFixture(other.into())),
    })
}

/// `n` concentric circles on a log-polar grid over `10^{±2}`, optionally joined by a radial spoke.
///
/// Circles sit every six rows and the unit circle falls in the middle gap
/// (or on the middle circle when `n` is odd).
pub fn circles(n: usize, width: usize, spoke: bool) -> Result<RasterSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one circle".into()));
    }
    let grid = GridSpec::log_polar((-2.0, 2.0), width, 6 * n + 2)?;
    let rows: Vec<usize> = (0..n).map(|k| 4 + 6 * k).collect();
    let (first, last) = (rows[0], rows[n - 1]);
    Ok(RasterSet::from_fn(grid, |r, c| {
        rows.contains(&r) || (spoke && c == 0 && r >= first && r <= last)
    }))
}

/// Boundaries of the squares `|x|, |y| ≤ R_k` for `R_k = 7, 9, 11`, joined
/// along the positive real axis, on a strip of four periods over `|x| ≤ 12`.
///
/// `theta_cols` is the angular resolution of the log-polar grid the strip projects to.
pub fn plane_squares_web(theta_cols: usize) -> Result<RasterSet> {
    let half = 12.0 / LN_10;
    let lp = GridSpec::log_polar((-half, half), theta_cols, 192)?;
    let grid = strip_grid(&lp, 4)?;
    let (dx, dy) = grid.cell_size();
    let radii = [7.0, 9.0, 11.0];
    let on_square = |x: f64, y: f64, r: f64| {
        let vertical = (x.abs() - r).abs() <= 0.5 * dx && y.abs() <= r + 0.5 * dy;
        let horizontal = (y.abs() - r).abs() <= 0.5 * dy && x.abs() <= r + 0.5 * dx;
        vertical || horizontal
    };
    Ok(RasterSet::from_fn(grid, |row, col| {
        let z = grid.center(row, col);
        let connector = z.im.abs() <= 0.5 * dy && z.re >= radii[0] && z.re <= radii[2];
        connector || radii.iter().any(|&r| on_square(z.re, z.im, r))
    }))
}

/// Randomised ring-and-spoke mask on a 48×40 log-polar grid.
///
/// Circles avoid the rows next to the unit circle and are usually joined by
/// a spoke; random defects (gaps in circles, a missing spoke, loose cells)
/// and attached radial hairs give a mix of webs and non-webs.
pub fn random_web(seed: u64) -> Result<RasterSet> {
    let grid = GridSpec::log_polar((-2.0, 2.0), 48, 40)?;
    let (w, h) = (grid.width, grid.height);
    let anchor = grid.unit_circle_row().unwrap_or(h / 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = RasterSet::empty(grid);
    let mut rows = Vec::new();
    for _ in 0..rng.gen_range(2..=5) {
        let row = rng.gen_range(1..h - 1);
        if row + 1 < anchor || row > anchor + 1 {
            rows.push(row);
        }
    }
    for &row in &rows {
        let gap = if rng.gen_bool(0.25) { rng.gen_range(1..=3) } else { 0 };
        let start = rng.gen_range(0..w);
        for c in 0..w {
            if (c + w - start) % w >= gap {
                r.set(row, c, true);
            }
        }
    }
    if let (Some(&lo), Some(&hi)) = (rows.iter().min(), rows.iter().max()) {
        if rng.gen_bool(0.85) {
            let col = rng.gen_range(0..w);
            for row in lo..=hi {
                r.set(row, col, true);
            }
        }
        for _ in 0..rng.gen_range(0..=4) {
            let from = rows[rng.gen_range(0..rows.len())];
            let col = rng.gen_range(0..w);
            let len = rng.gen_range(1..=5);
            let up = rng.gen_bool(0.5);
            for d in 0..=len {
                let row = if up { from.saturating_sub(d) } else { (from + d).min(h - 1) };
                r.set(row, col, true);
            }
        }
    }
    if rng.gen_bool(0.15) {
        for _ in 0..rng.gen_range(1..=3) {
            let (row, col) = (rng.gen_range(0..h), rng.gen_range(0..w));
            r.set(row, col, true);
        }
    }
    Ok(r)
}

/// Independent Bernoulli(`density`) cells on a log-polar grid over `10^{±2}`.
pub fn random_mask(seed: u64, width: usize, height: usize, density: f64) -> Result<RasterSet> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density {density} outside [0, 1]")));
    }
    let grid = GridSpec::log_polar((-2.0, 2.0), width, height)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = (0..grid.len()).map(|_| rng.gen_bool(density)).collect();
    Ok(RasterSet { grid, mask })
}

/// Strip rows per period: the strip's `y` extent is a whole number of `2π` periods.
pub fn strip_periods(strip: &GridSpec) -> Option<usize> {
    match strip.window {
        crate::grid::Window::Cartesian { y_min, y_max, .. } => {
            let p = (y_max - y_min) / (2.0 * PI);
            let k = p.round();
            ((p - k).abs() < 1e-9 && k >= 1.0).then_some(k as usize)
        }
        crate::grid::Window::LogPolar { .. } => None,
    }
}
