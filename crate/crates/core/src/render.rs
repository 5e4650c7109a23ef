//! Per-pixel classification rasters and their images.
//!
//! Every pixel is evaluated at its center, independently of all others, so
//! output does not depend on the tile size or the number of threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex_map::SelfMap;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::orbit::{first_entry_time, in_i_horizon};
use crate::pnm::RgbImage;
use crate::topology::RasterSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Layer {
    /// First `n` with `Re f^n(z) ≥ 2`.
    HEntryTime,
    /// Pixels outside the finite-horizon approximation `I_N`.
    IComplement,
}

/// Color of pixels whose orbit never reached `H` within the budget.
pub const NEVER: [u8; 3] = [128, 128, 128];
/// Color of pixels whose evaluation failed (the pixel center is `0`).
pub const ERROR: [u8; 3] = [0, 0, 255];
/// `I_COMPLEMENT` colors.
pub const OUTSIDE_I: [u8; 3] = [255, 224, 160];
pub const INSIDE_I: [u8; 3] = [64, 64, 64];

/// Entry time `n` as a shade of red on white, cycling with period 16.
pub fn entry_color(n: usize) -> [u8; 3] {
    let v = 16 * (n % 16) as u8;
    [255, v, v]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderOptions {
    /// Worker threads; 0 lets the pool choose.
    pub threads: usize,
    /// Rows per work unit.
    pub tile_rows: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            threads: 0,
            tile_rows: 8,
        }
    }
}

/// Evaluates `f(row, col)` over the grid in parallel row tiles.
pub fn per_pixel<T, F>(grid: &GridSpec, opts: RenderOptions, f: F) -> Result<Vec<T>>
where
    T: Send + Clone + Default,
    F: Fn(usize, usize) -> T + Sync,
{
    grid.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let w = grid.width;
    let tile = opts.tile_rows.max(1) * w;
    let mut out = vec![T::default(); grid.len()];
    pool.install(|| {
        out.par_chunks_mut(tile).enumerate().for_each(|(t, chunk)| {
            let base = t * tile;
            for (k, v) in chunk.iter_mut().enumerate() {
                let i = base + k;
                *v = f(i / w, i % w);
            }
        })
    });
    Ok(out)
}

/// Membership of each pixel center in `I_N`; pixels centered on `0` count as outside.
pub fn rasterize_i<M: SelfMap + ?Sized>(
    map: &M,
    grid: &GridSpec,
    horizon: usize,
    opts: RenderOptions,
) -> Result<RasterSet> {
    map.check_orbit_preconditions()?;
    let mask = per_pixel(grid, opts, |r, c| {
        in_i_horizon(map, grid.center(r, c), horizon).unwrap_or(false)
    })?;
    Ok(RasterSet { grid: *grid, mask })
}

/// Pixels not in `I_N`.
pub fn render_i_complement<M: SelfMap + ?Sized>(
    map: &M,
    grid: &GridSpec,
    horizon: usize,
    opts: RenderOptions,
) -> Result<RasterSet> {
    Ok(rasterize_i(map, grid, horizon, opts)?.complement())
}

pub fn render<M: SelfMap + ?Sized>(
    map: &M,
    grid: &GridSpec,
    budget: usize,
    horizon: usize,
    layer: Layer,
    opts: RenderOptions,
) -> Result<RgbImage> {
    map.check_orbit_preconditions()?;
    let pixels: Vec<[u8; 3]> = match layer {
        Layer::HEntryTime => per_pixel(grid, opts, |r, c| {
            match first_entry_time(map, grid.center(r, c), budget) {
                Ok(Some(n)) => entry_color(n),
                Ok(None) => NEVER,
                Err(_) => ERROR,
            }
        })?,
        Layer::IComplement => per_pixel(grid, opts, |r, c| {
            match in_i_horizon(map, grid.center(r, c), horizon) {
                Ok(true) => INSIDE_I,
                Ok(false) => OUTSIDE_I,
                Err(_) => ERROR,
            }
        })?,
    };
    let mut img = RgbImage::new(grid.width, grid.height);
    img.data = pixels.into_iter().flatten().collect();
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_map::MapParams;

    fn p32() -> MapParams {
        MapParams::new(32.0).unwrap()
    }

    #[test]
    fn palette() {
        assert_eq!(entry_color(0), [255, 0, 0]);
        assert_eq!(entry_color(15), [255, 240, 240]);
        assert_eq!(entry_color(16), entry_color(0));
        assert!((0..16).all(|n| entry_color(n) != NEVER && entry_color(n) != ERROR));
    }

    #[test]
    fn right_half_plane_has_entry_time_zero() {
        let g = GridSpec::cartesian((-6.0, 6.0), (-6.0, 6.0), 48, 48).unwrap();
        let img = render(&p32(), &g, 30, 12, Layer::HEntryTime, RenderOptions::default()).unwrap();
        for r in 0..48 {
            for c in 0..48 {
                if g.center(r, c).re >= 2.0 {
                    assert_eq!(img.pixel(r, c), entry_color(0));
                }
            }
        }
    }

    #[test]
    fn vertical_flip_symmetry() {
        let g = GridSpec::cartesian((-3.0, 3.0), (-3.0, 3.0), 37, 41).unwrap();
        for layer in [Layer::HEntryTime, Layer::IComplement] {
            let img = render(&p32(), &g, 30, 12, layer, RenderOptions::default()).unwrap();
            for r in 0..41 {
                for c in 0..37 {
                    assert_eq!(img.pixel(r, c), img.pixel(40 - r, c));
                }
            }
            // the center pixel sits on 0
            assert_eq!(img.pixel(20, 18), ERROR);
        }
    }

    #[test]
    fn tiling_and_threads_do_not_matter() {
        let g = GridSpec::cartesian((-3.5, 0.5), (-2.0, 2.0), 40, 30).unwrap();
        let base = render(&p32(), &g, 30, 12, Layer::HEntryTime, RenderOptions { threads: 1, tile_rows: 30 }).unwrap();
        for (threads, tile_rows) in [(2, 1), (3, 7), (0, 4)] {
            let img = render(&p32(), &g, 30, 12, Layer::HEntryTime, RenderOptions { threads, tile_rows }).unwrap();
            assert_eq!(img, base);
        }
    }

    #[test]
    fn horizon_monotonicity() {
        let g = GridSpec::log_polar((-1.5, 1.5), 48, 40).unwrap();
        let opts = RenderOptions::default();
        let mut prev = rasterize_i(&p32(), &g, 3, opts).unwrap();
        for n in 4..9 {
            let next = rasterize_i(&p32(), &g, n, opts).unwrap();
            assert!(next.is_subset_of(&prev), "I_{n} not inside I_{}", n - 1);
            prev = next;
        }
    }

    #[test]
    fn needs_lambda_at_least_two() {
        let g = GridSpec::cartesian((-1.0, 1.0), (-1.0, 1.0), 4, 4).unwrap();
        let p = MapParams::new(1.0).unwrap();
        assert!(render(&p, &g, 10, 5, Layer::HEntryTime, RenderOptions::default()).is_err());
    }
}
