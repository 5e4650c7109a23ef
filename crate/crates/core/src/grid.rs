//! Pixel grids over windows of the punctured plane.
//!
//! Cartesian grids put row 0 at the top (largest `y`). Log-polar grids put
//! the innermost ring (smallest `|z|`) in row 0 and sweep `θ ∈ [0, 2π)` along
//! the columns; the column axis is periodic.

use std::f64::consts::{LN_10, PI};

use serde::{Deserialize, Serialize};

use crate::complex_map::{CPoint, LogPoint};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Window {
    Cartesian {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
    /// Annulus `10^log10_min ≤ |z| ≤ 10^log10_max`.
    LogPolar { log10_min: f64, log10_max: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub window: Window,
    pub width: usize,
    pub height: usize,
}

impl GridSpec {
    pub fn cartesian(x: (f64, f64), y: (f64, f64), width: usize, height: usize) -> Result<Self> {
        let g = Self {
            window: Window::Cartesian {
                x_min: x.0,
                x_max: x.1,
                y_min: y.0,
                y_max: y.1,
            },
            width,
            height,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn log_polar(log10: (f64, f64), width: usize, height: usize) -> Result<Self> {
        let g = Self {
            window: Window::LogPolar {
                log10_min: log10.0,
                log10_max: log10.1,
            },
            width,
            height,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParameter("grid must have positive size".into()));
        }
        let ok = match self.window {
            Window::Cartesian {
                x_min,
                x_max,
                y_min,
                y_max,
            } => [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) && x_max > x_min && y_max > y_min,
            Window::LogPolar {
                log10_min,
                log10_max,
            } => log10_min.is_finite() && log10_max.is_finite() && log10_max > log10_min,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("degenerate window {:?}", self.window)))
        }
    }

    pub fn is_log_polar(&self) -> bool {
        matches!(self.window, Window::LogPolar { .. })
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell extents: `(dx, dy)` for Cartesian grids, `(dθ, d ln|z|)` for log-polar ones.
    pub fn cell_size(&self) -> (f64, f64) {
        match self.window {
            Window::Cartesian {
                x_min,
                x_max,
                y_min,
                y_max,
            } => (
                (x_max - x_min) / self.width as f64,
                (y_max - y_min) / self.height as f64,
            ),
            Window::LogPolar {
                log10_min,
                log10_max,
            } => (
                2.0 * PI / self.width as f64,
                (log10_max - log10_min) * LN_10 / self.height as f64,
            ),
        }
    }

    /// Center of cell `(row, col)` in log coordinates.
    ///
    /// Cartesian centers are placed symmetrically about the window midpoint,
    /// so a window symmetric in `y` has rows that are exact mirror images.
    pub fn center_log(&self, row: usize, col: usize) -> LogPoint {
        match self.window {
            Window::Cartesian { .. } => LogPoint::from_cpoint(self.center(row, col)),
            Window::LogPolar { log10_min, .. } => {
                let (dt, dr) = self.cell_size();
                LogPoint::new(
                    log10_min * LN_10 + (row as f64 + 0.5) * dr,
                    (col as f64 + 0.5) * dt,
                )
            }
        }
    }

    pub fn center(&self, row: usize, col: usize) -> CPoint {
        match self.window {
            Window::Cartesian {
                x_min,
                x_max,
                y_min,
                y_max,
            } => {
                let (dx, dy) = self.cell_size();
                let (cx, cy) = (0.5 * (x_min + x_max), 0.5 * (y_min + y_max));
                let x = cx + (2.0 * col as f64 + 1.0 - self.width as f64) * dx * 0.5;
                let y = cy + (self.height as f64 - 1.0 - 2.0 * row as f64) * dy * 0.5;
                CPoint::new(x, y)
            }
            Window::LogPolar { .. } => self.center_log(row, col).to_cpoint(),
        }
    }

    /// The cell containing `z`, if it lies in the window.
    pub fn cell_of(&self, z: CPoint) -> Option<(usize, usize)> {
        let (fr, fc) = match self.window {
            Window::Cartesian {
                x_min,
                x_max,
                y_min,
                y_max,
            } => (
                (y_max - z.im) / (y_max - y_min),
                (z.re - x_min) / (x_max - x_min),
            ),
            Window::LogPolar {
                log10_min,
                log10_max,
            } => {
                if z.re == 0.0 && z.im == 0.0 {
                    return None;
                }
                let theta = z.im.atan2(z.re).rem_euclid(2.0 * PI);
                (
                    (z.norm().log10() - log10_min) / (log10_max - log10_min),
                    theta / (2.0 * PI),
                )
            }
        };
        if !(0.0..=1.0).contains(&fr) || !(0.0..=1.0).contains(&fc) {
            return None;
        }
        let row = ((fr * self.height as f64) as usize).min(self.height - 1);
        let col = ((fc * self.width as f64) as usize) % self.width;
        let col = if self.is_log_polar() {
            col
        } else {
            col.min(self.width - 1)
        };
        Some((row, col))
    }

    /// Log-polar row whose ring contains `|z| = 1`, if the annulus does.
    pub fn unit_circle_row(&self) -> Option<usize> {
        match self.window {
            Window::LogPolar { .. } => self.cell_of(CPoint::new(1.0, 0.0)).map(|(r, _)| r),
            Window::Cartesian { .. } => None,
        }
    }
}
