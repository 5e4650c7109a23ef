//! Raster topology on annuli and strips.
//!
//! A [`RasterSet`] on a log-polar grid is a bit mask over an annulus whose
//! angular axis wraps around; the first row stands in for `0` and the last row
//! for `∞`. On a Cartesian grid (used for strips of the lift plane) nothing
//! wraps and the window edge stands in for `∞`.
//!
//! Connectivity is 4-neighbour for both a set and its complement. All
//! predicates are statements about the grid, not about the continuum.

use std::collections::BTreeSet;
use std::f64::consts::{LN_10, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, Window};
use crate::pnm;

const UNLABELED: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct RasterSet {
    pub grid: GridSpec,
    /// Row-major; `mask[row * width + col]`.
    pub mask: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Part {
    Set,
    Complement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabeling {
    /// Label per cell, `None` for cells of the other part.
    pub labels: Vec<Option<u32>>,
    pub count: usize,
    pub touches_inner: Vec<bool>,
    pub touches_outer: Vec<bool>,
    pub sizes: Vec<usize>,
}

impl ComponentLabeling {
    pub fn touches_boundary(&self, label: u32) -> bool {
        self.touches_inner[label as usize] || self.touches_outer[label as usize]
    }
}

impl RasterSet {
    pub fn empty(grid: GridSpec) -> Self {
        Self {
            mask: vec![false; grid.len()],
            grid,
        }
    }

    pub fn full(grid: GridSpec) -> Self {
        Self {
            mask: vec![true; grid.len()],
            grid,
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(usize, usize) -> bool) -> Self {
        let mask = (0..grid.height)
            .flat_map(|r| (0..grid.width).map(move |c| (r, c)))
            .map(|(r, c)| f(r, c))
            .collect();
        Self { grid, mask }
    }

    pub fn width(&self) -> usize {
        self.grid.width
    }

    pub fn height(&self) -> usize {
        self.grid.height
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.mask[row * self.grid.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: bool) {
        let w = self.grid.width;
        self.mask[row * w + col] = v;
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        Self {
            grid: self.grid,
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect(),
        })
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| !a || *b)
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GeometryMismatch("rasters are on different grids".into()))
        }
    }

    /// Whether the column axis is periodic.
    pub fn wraps(&self) -> bool {
        self.grid.is_log_polar()
    }

    /// Rotates a log-polar mask by `k` columns (multiplication by `e^{2πik/W}`).
    pub fn rotate_theta(&self, k: usize) -> Self {
        let w = self.grid.width;
        Self::from_fn(self.grid, |r, c| self.get(r, (c + w - k % w) % w))
    }

    /// Cells with a set cell among their 4-neighbours (or themselves).
    pub fn dilate(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.mask.len() {
            if self.mask[i] {
                for j in self.neighbors(i) {
                    out.mask[j] = true;
                }
            }
        }
        out
    }

    pub fn to_pbm(&self) -> Vec<u8> {
        pnm::encode_pbm(self.grid.width, self.grid.height, &self.mask)
    }

    /// Reads a P4 mask; its dimensions must match `grid`.
    pub fn from_pbm(grid: GridSpec, bytes: &[u8]) -> Result<Self> {
        let (w, h, mask) = pnm::decode_pbm(bytes)?;
        if (w, h) != (grid.width, grid.height) {
            return Err(Error::GeometryMismatch(format!(
                "PBM is {w}x{h}, grid is {}x{}",
                grid.width, grid.height
            )));
        }
        Ok(Self { grid, mask })
    }

    fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> {
        let (w, h) = (self.grid.width, self.grid.height);
        let (r, c) = (i / w, i % w);
        let wrap = self.wraps();
        let up = (r > 0).then(|| i - w);
        let down = (r + 1 < h).then(|| i + w);
        let left = if c > 0 {
            Some(i - 1)
        } else if wrap && w > 1 {
            Some(i + w - 1)
        } else {
            None
        };
        let right = if c + 1 < w {
            Some(i + 1)
        } else if wrap && w > 1 {
            Some(i + 1 - w)
        } else {
            None
        };
        [up, down, left, right].into_iter().flatten()
    }

    /// Whether cell `i` lies on the ring standing in for `0` / `∞`.
    fn on_inner(&self, i: usize) -> bool {
        let w = self.grid.width;
        if self.wraps() {
            i < w
        } else {
            false
        }
    }

    fn on_outer(&self, i: usize) -> bool {
        let (w, h) = (self.grid.width, self.grid.height);
        let (r, c) = (i / w, i % w);
        if self.wraps() {
            r + 1 == h
        } else {
            r == 0 || r + 1 == h || c == 0 || c + 1 == w
        }
    }

    /// Flood fill of the part containing `start`; returns the cells and ring flags.
    fn flood(&self, start: usize, part: bool, seen: &mut [bool]) -> (Vec<usize>, bool, bool) {
        let mut cells = vec![start];
        let mut stack = vec![start];
        seen[start] = true;
        let (mut inner, mut outer) = (false, false);
        while let Some(i) = stack.pop() {
            inner |= self.on_inner(i);
            outer |= self.on_outer(i);
            for j in self.neighbors(i) {
                if !seen[j] && self.mask[j] == part {
                    seen[j] = true;
                    stack.push(j);
                    cells.push(j);
                }
            }
        }
        (cells, inner, outer)
    }
}

/// 4-connected labeling of one part of `r`, labels in row-major first-seen order.
pub fn components(r: &RasterSet, of: Part) -> ComponentLabeling {
    let part = of == Part::Set;
    let n = r.mask.len();
    let mut labels = vec![UNLABELED; n];
    let mut seen = vec![false; n];
    let mut out = ComponentLabeling {
        labels: Vec::new(),
        count: 0,
        touches_inner: Vec::new(),
        touches_outer: Vec::new(),
        sizes: Vec::new(),
    };
    for i in 0..n {
        if seen[i] || r.mask[i] != part {
            continue;
        }
        let (cells, inner, outer) = r.flood(i, part, &mut seen);
        let label = out.count as u32;
        for &j in &cells {
            labels[j] = label;
        }
        out.count += 1;
        out.touches_inner.push(inner);
        out.touches_outer.push(outer);
        out.sizes.push(cells.len());
    }
    out.labels = labels
        .into_iter()
        .map(|l| (l != UNLABELED).then_some(l))
        .collect();
    out
}

/// `r` together with every complement component touching neither ring.
pub fn fill_t(r: &RasterSet) -> RasterSet {
    let lab = components(r, Part::Complement);
    let mut out = r.clone();
    for (i, l) in lab.labels.iter().enumerate() {
        if let Some(l) = l {
            if !lab.touches_boundary(*l) {
                out.mask[i] = true;
            }
        }
    }
    out
}

/// Whether the complement component of cell `p` touches neither ring.
pub fn separates(r: &RasterSet, p: (usize, usize)) -> Result<bool> {
    let (row, col) = p;
    if row >= r.height() || col >= r.width() {
        return Err(Error::InvalidParameter(format!("cell {p:?} outside the grid")));
    }
    if r.get(row, col) {
        return Err(Error::CellInSet { row, col });
    }
    let mut seen = vec![false; r.mask.len()];
    let (_, inner, outer) = r.flood(row * r.width() + col, false, &mut seen);
    Ok(!inner && !outer)
}

/// One doubly connected domain of a web witness, summarised by its radial extent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnularDomain {
    /// Row just inside the domain's innermost cells.
    pub inner_boundary_row: usize,
    /// Row just outside the domain's outermost cells.
    pub outer_boundary_row: usize,
    pub cells: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebReport {
    pub is_web: bool,
    pub connected: bool,
    pub anchor_row: usize,
    /// Nested domains `G'_1 ⊂ G'_2 ⊂ …`, each with boundary in the set.
    pub witness: Vec<AnnularDomain>,
    /// Distinct boundary rows used by the witness.
    pub rings: Vec<usize>,
}

/// Row used as the compact core that a web must separate from the rings:
/// the ring through `|z| = 1` when the annulus contains it, else the middle row.
pub fn anchor_row(r: &RasterSet) -> usize {
    r.grid.unit_circle_row().unwrap_or(r.height() / 2)
}

fn anchor_band(r: &RasterSet) -> (usize, usize) {
    let c = anchor_row(r);
    (c.saturating_sub(1), (c + 1).min(r.height() - 1))
}

fn rows_mask(r: &RasterSet, lo: usize, hi: usize) -> RasterSet {
    RasterSet::from_fn(r.grid, |row, _| row >= lo && row <= hi)
}

fn is_connected_nonempty(r: &RasterSet) -> bool {
    components(r, Part::Set).count == 1
}

/// `G(K)`: `K` plus every complement component meeting or adjacent to `K`, hole-filled.
fn domain_around(k: &RasterSet, lab: &ComponentLabeling) -> RasterSet {
    let reach = k.dilate();
    let mut wanted = vec![false; lab.count];
    for (i, l) in lab.labels.iter().enumerate() {
        if let (Some(l), true) = (l, reach.mask[i]) {
            wanted[*l as usize] = true;
        }
    }
    let mut g = k.clone();
    for (i, l) in lab.labels.iter().enumerate() {
        if l.is_some_and(|l| wanted[l as usize]) {
            g.mask[i] = true;
        }
    }
    fill_t(&g)
}

/// Bounded in the punctured plane and with exactly two complementary components.
fn is_doubly_connected_bounded(g: &RasterSet) -> bool {
    let lab = components(g, Part::Complement);
    let inner = lab.touches_inner.iter().filter(|&&b| b).count();
    let outer = lab.touches_outer.iter().filter(|&&b| b).count();
    let touches_ring = (0..g.width()).any(|c| g.get(0, c) || g.get(g.height() - 1, c));
    !touches_ring
        && lab.count == 2
        && inner == 1
        && outer == 1
        && (0..lab.count).all(|l| lab.touches_inner[l] != lab.touches_outer[l])
        && components(g, Part::Set).count == 1
}

fn row_extent(g: &RasterSet) -> (usize, usize, usize) {
    let w = g.width();
    let rows: Vec<usize> = (0..g.mask.len()).filter(|&i| g.mask[i]).map(|i| i / w).collect();
    let lo = *rows.iter().min().unwrap_or(&0);
    let hi = *rows.iter().max().unwrap_or(&0);
    (lo, hi, rows.len())
}

/// Builds the nested witness `G'_1 ⊂ G'_2 ⊂ …` around the anchor row.
///
/// `K_1` is the anchor row; `K_{n+1}` is the hole-filled union of a central
/// annulus of `2n+1` rows with the one-cell closure of `G'_n`. The sequence
/// stops at the first `G'` that fails to be bounded and doubly connected.
pub fn web_witness(r: &RasterSet) -> Vec<AnnularDomain> {
    if !r.wraps() || r.height() < 3 {
        return Vec::new();
    }
    let lab = components(r, Part::Complement);
    let c = anchor_row(r);
    let h = r.height();
    let mut out: Vec<AnnularDomain> = Vec::new();
    let mut k = rows_mask(r, c, c);
    let mut n = 1;
    loop {
        if (0..r.width()).any(|col| k.get(0, col) || k.get(h - 1, col)) {
            break;
        }
        let g = domain_around(&k, &lab);
        if !is_doubly_connected_bounded(&g) {
            break;
        }
        let (lo, hi, cells) = row_extent(&g);
        if out.last().is_none_or(|d| cells > d.cells) {
            out.push(AnnularDomain {
                inner_boundary_row: lo - 1,
                outer_boundary_row: hi + 1,
                cells,
            });
        }
        if c < n || c + n >= h {
            break;
        }
        let annulus = rows_mask(r, c - n, c + n);
        k = fill_t(&annulus.union(&g.dilate()).expect("same grid"));
        n += 1;
    }
    out
}

/// Whether `r` is a C*-spider's web at grid scale, with its nested witness.
///
/// The set must be nonempty and connected, and no complement component
/// meeting the three-row band around the anchor row may touch either ring.
pub fn is_cstar_spiders_web(r: &RasterSet) -> WebReport {
    let connected = is_connected_nonempty(r);
    let witness = if connected { web_witness(r) } else { Vec::new() };
    let rings: BTreeSet<usize> = witness
        .iter()
        .flat_map(|d| [d.inner_boundary_row, d.outer_boundary_row])
        .collect();
    WebReport {
        is_web: connected && web_condition_components(r),
        connected,
        anchor_row: anchor_row(r),
        witness,
        rings: rings.into_iter().collect(),
    }
}

/// Witness route: a first bounded doubly connected `G'_1` exists.
pub fn web_condition_witness(r: &RasterSet) -> bool {
    is_connected_nonempty(r) && !web_witness(r).is_empty()
}

/// Labeling route: complement components meeting the anchor band are interior.
pub fn web_condition_components(r: &RasterSet) -> bool {
    if !r.wraps() || !is_connected_nonempty(r) {
        return false;
    }
    let lab = components(r, Part::Complement);
    let (lo, hi) = anchor_band(r);
    let w = r.width();
    (lo * w..(hi + 1) * w).all(|i| lab.labels[i].is_none_or(|l| !lab.touches_boundary(l)))
}

/// Separation route: every complement cell of the anchor band is separated.
pub fn web_condition_separation(r: &RasterSet) -> bool {
    if !r.wraps() || !is_connected_nonempty(r) {
        return false;
    }
    let (lo, hi) = anchor_band(r);
    let w = r.width();
    let mut known = vec![false; r.mask.len()];
    for i in lo * w..(hi + 1) * w {
        if r.mask[i] || known[i] {
            continue;
        }
        let mut seen = vec![false; r.mask.len()];
        let (cells, inner, outer) = r.flood(i, false, &mut seen);
        if inner || outer {
            return false;
        }
        for j in cells {
            known[j] = true;
        }
    }
    true
}

/// Cartesian strip of the lift plane covering the annulus of `lp` with `periods` copies of `[0, 2π)`.
///
/// Columns follow `Re w = ln|z|` (one per log-polar row) and rows follow
/// `Im w`, `lp.width` rows per period, top row first.
pub fn strip_grid(lp: &GridSpec, periods: usize) -> Result<GridSpec> {
    let Window::LogPolar {
        log10_min,
        log10_max,
    } = lp.window
    else {
        return Err(Error::GeometryMismatch("expected a log-polar grid".into()));
    };
    if periods == 0 {
        return Err(Error::InvalidParameter("periods must be positive".into()));
    }
    let half = periods as f64 * PI;
    let (y0, y1) = if periods % 2 == 0 {
        (-half, half)
    } else {
        (-half + PI, half + PI)
    };
    GridSpec::cartesian(
        (log10_min * LN_10, log10_max * LN_10),
        (y0, y1),
        lp.height,
        lp.width * periods,
    )
}

/// The log-polar grid onto which a strip projects, and the strip's period count.
fn projected_grid(strip: &GridSpec) -> Result<(GridSpec, usize)> {
    let Window::Cartesian {
        x_min,
        x_max,
        y_min,
        y_max,
    } = strip.window
    else {
        return Err(Error::GeometryMismatch("expected a Cartesian strip".into()));
    };
    let tau = 2.0 * PI;
    let periods_f = (y_max - y_min) / tau;
    let periods = periods_f.round() as usize;
    let aligned = |v: f64| ((v / tau).round() * tau - v).abs() < 1e-9 * tau.max(v.abs());
    if periods == 0 || (periods_f - periods as f64).abs() > 1e-9 || !aligned(y_max) || !aligned(y_min) {
        return Err(Error::GeometryMismatch(
            "strip height must span whole periods with ends at multiples of 2π".into(),
        ));
    }
    if strip.height % periods != 0 {
        return Err(Error::GeometryMismatch(format!(
            "{} strip rows do not divide into {periods} periods",
            strip.height
        )));
    }
    let lp = GridSpec::log_polar(
        (x_min / LN_10, x_max / LN_10),
        strip.height / periods,
        strip.width,
    )?;
    Ok((lp, periods))
}

/// Log-polar column of strip row `j` when a period has `n` rows.
fn theta_col(j: usize, n: usize) -> usize {
    n - 1 - (j % n)
}

/// `exp(E)` for a mask on a strip of the lift plane.
pub fn exp_project(strip: &RasterSet) -> Result<RasterSet> {
    let (lp, _) = projected_grid(&strip.grid)?;
    let n = lp.width;
    let mut out = RasterSet::empty(lp);
    for j in 0..strip.height() {
        let t = theta_col(j, n);
        for i in 0..strip.width() {
            if strip.get(j, i) {
                out.set(i, t, true);
            }
        }
    }
    Ok(out)
}

/// `exp^{-1}(E)` restricted to `periods` fundamental strips.
pub fn exp_lift(r: &RasterSet, periods: usize) -> Result<RasterSet> {
    let grid = strip_grid(&r.grid, periods)?;
    let n = r.width();
    Ok(RasterSet::from_fn(grid, |j, i| r.get(i, theta_col(j, n))))
}

/// Grid-scale spider's web test for a lift-plane strip.
///
/// The set must be nonempty and connected, and every complement component
/// meeting the core (the middle period, between the first and last columns
/// holding set cells) must stay off the window edge.
pub fn is_plane_spiders_web(strip: &RasterSet) -> Result<bool> {
    let (lp, periods) = projected_grid(&strip.grid)?;
    if !is_connected_nonempty(strip) {
        return Ok(false);
    }
    let w = strip.width();
    let cols: Vec<usize> = (0..strip.mask.len())
        .filter(|&i| strip.mask[i])
        .map(|i| i % w)
        .collect();
    let (c0, c1) = (
        *cols.iter().min().expect("nonempty"),
        *cols.iter().max().expect("nonempty"),
    );
    let n = lp.width;
    let (r0, r1) = ((periods / 2) * n, (periods / 2) * n + n - 1);
    let lab = components(strip, Part::Complement);
    for row in r0..=r1 {
        for col in c0..=c1 {
            if let Some(l) = lab.labels[row * w + col] {
                if lab.touches_outer[l as usize] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(w: usize, h: usize) -> GridSpec {
        GridSpec::log_polar((-2.0, 2.0), w, h).unwrap()
    }

    fn circles(g: GridSpec, rows: &[usize]) -> RasterSet {
        RasterSet::from_fn(g, |r, _| rows.contains(&r))
    }

    #[test]
    fn labeling_examples() {
        let g = lp(16, 12);
        let full = RasterSet::full(g);
        let l = components(&full, Part::Set);
        assert_eq!(l.count, 1);
        assert!(l.touches_inner[0] && l.touches_outer[0]);

        let two = circles(g, &[3, 7]);
        let l = components(&two, Part::Set);
        assert_eq!(l.count, 2);
        assert!(!l.touches_boundary(0) && !l.touches_boundary(1));

        let mut seam = RasterSet::empty(g);
        seam.set(5, 0, true);
        seam.set(5, 15, true);
        assert_eq!(components(&seam, Part::Set).count, 1);
    }

    #[test]
    fn labels_are_first_seen_row_major() {
        let g = lp(8, 6);
        let mut r = RasterSet::empty(g);
        r.set(1, 5, true);
        r.set(3, 1, true);
        let l = components(&r, Part::Set);
        assert_eq!(l.labels[8 + 5], Some(0));
        assert_eq!(l.labels[3 * 8 + 1], Some(1));
        assert_eq!(l.sizes, vec![1, 1]);
    }

    #[test]
    fn fill_examples() {
        let g = lp(16, 12);
        let one = circles(g, &[6]);
        assert_eq!(fill_t(&one), one);
        let pair = circles(g, &[3, 7]);
        let filled = fill_t(&pair);
        assert_eq!(filled, RasterSet::from_fn(g, |r, _| (3..=7).contains(&r)));
        assert_eq!(fill_t(&filled), filled);
    }

    #[test]
    fn separation_examples() {
        let g = lp(16, 12);
        let pair = circles(g, &[3, 7]);
        assert!(separates(&pair, (5, 4)).unwrap());
        assert!(!separates(&pair, (9, 4)).unwrap());
        let one = circles(g, &[6]);
        assert!(!separates(&one, (4, 0)).unwrap());
        assert_eq!(
            separates(&one, (6, 2)).unwrap_err(),
            Error::CellInSet { row: 6, col: 2 }
        );
    }

    #[test]
    fn web_examples() {
        let g = lp(32, 40);
        let rows = [8, 13, 17, 24, 31];
        let mut web = circles(g, &rows);
        for r in 8..=31 {
            web.set(r, 5, true);
        }
        let rep = is_cstar_spiders_web(&web);
        assert!(rep.is_web && rep.connected);
        assert!(rep.rings.len() >= 4, "{rep:?}");
        assert!(web_condition_witness(&web) && web_condition_separation(&web));

        let no_spoke = circles(g, &rows);
        assert!(!is_cstar_spiders_web(&no_spoke).is_web);
        let single = circles(g, &[20]);
        let rep = is_cstar_spiders_web(&single);
        assert!(rep.connected && !rep.is_web);
        assert!(!web_condition_witness(&single) && !web_condition_separation(&single));

        for k in [1, 7, 31] {
            assert!(is_cstar_spiders_web(&web.rotate_theta(k)).is_web);
        }
    }

    #[test]
    fn witness_is_nested() {
        let g = lp(24, 40);
        let mut web = circles(g, &[6, 12, 18, 23, 30, 35]);
        for r in 6..=35 {
            web.set(r, 11, true);
        }
        let w = web_witness(&web);
        assert!(w.len() >= 2);
        for p in w.windows(2) {
            assert!(p[1].inner_boundary_row <= p[0].inner_boundary_row);
            assert!(p[1].outer_boundary_row >= p[0].outer_boundary_row);
            assert!(p[1].cells > p[0].cells);
        }
    }

    #[test]
    fn lift_and_project() {
        let g = lp(8, 5);
        let full = RasterSet::full(g);
        let strip = exp_lift(&full, 3).unwrap();
        assert_eq!(strip.count(), strip.mask.len());
        assert_eq!(exp_project(&strip).unwrap(), full);

        let mut r = RasterSet::empty(g);
        r.set(2, 1, true);
        r.set(4, 7, true);
        let strip = exp_lift(&r, 2).unwrap();
        assert_eq!(strip.count(), 4);
        assert_eq!(exp_project(&strip).unwrap(), r);
        // cell centers agree under exp
        let sg = strip.grid;
        for j in 0..sg.height {
            for i in 0..sg.width {
                let w = sg.center(j, i);
                let z = num_complex::Complex64::new(w.re, w.im).exp();
                let (row, col) = g.cell_of(z).unwrap();
                assert_eq!((row, col), (i, theta_col(j, g.width)));
            }
        }
    }

    #[test]
    fn geometry_mismatch() {
        let bad = GridSpec::cartesian((-1.0, 1.0), (0.0, 5.0), 4, 8).unwrap();
        assert!(matches!(
            exp_project(&RasterSet::empty(bad)),
            Err(Error::GeometryMismatch(_))
        ));
        let cart = GridSpec::cartesian((-1.0, 1.0), (-1.0, 1.0), 4, 4).unwrap();
        assert!(exp_lift(&RasterSet::empty(cart), 1).is_err());
        let odd = GridSpec::cartesian((-1.0, 1.0), (0.0, 2.0 * PI), 4, 7).unwrap();
        assert!(exp_project(&RasterSet::empty(odd)).is_ok());
        let pbm = RasterSet::empty(lp(4, 4)).to_pbm();
        assert!(RasterSet::from_pbm(lp(5, 4), &pbm).is_err());
        assert!(RasterSet::from_pbm(lp(4, 4), &pbm).is_ok());
    }

    #[test]
    fn plane_web_check() {
        let g = lp(16, 24);
        let mut web = circles(g, &[4, 9, 14, 19]);
        for r in 4..=19 {
            web.set(r, 3, true);
        }
        assert!(is_cstar_spiders_web(&web).is_web);
        let strip = exp_lift(&web, 3).unwrap();
        assert!(is_plane_spiders_web(&strip).unwrap());
        let no_spoke = exp_lift(&circles(g, &[4, 9, 14, 19]), 3).unwrap();
        assert!(!is_plane_spiders_web(&no_spoke).unwrap());
    }
}
