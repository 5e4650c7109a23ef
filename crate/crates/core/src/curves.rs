//! Implicit curves: preimages of the positive real axis, the barrier set
//! `x sin y + y cos y = 0`, the approximating circles `A_n` near 0 and the
//! curves `A'_n` far to the left, plus the channel regions `C(R)`.
//!
//! Curves are extracted by marching squares over a Cartesian window or a
//! polar window in `(ln r, θ)`. Each crossing is refined by bisection along
//! its cell edge; vertices that miss the residual tolerance are dropped
//! rather than kept imprecise. Cells crossed by more than one branch are
//! detected by subsampling the cell edges.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex_map::{xi_zeta, CPoint, MapParams};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CurveKind {
    PreimageRplus,
    Barrier,
    AnCircle,
    AnPrime,
}

impl CurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveKind::PreimageRplus => "PREIMAGE_RPLUS",
            CurveKind::Barrier => "BARRIER",
            CurveKind::AnCircle => "A_N_CIRCLE",
            CurveKind::AnPrime => "A_N_PRIME",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePolyline {
    pub points: Vec<CPoint>,
    pub branch: Option<i64>,
    pub kind: CurveKind,
    pub closed: bool,
}

impl CurvePolyline {
    pub fn rightmost(&self) -> Option<CPoint> {
        self.points.iter().copied().max_by(|a, b| a.re.total_cmp(&b.re))
    }

    pub fn leftmost(&self) -> Option<CPoint> {
        self.points.iter().copied().min_by(|a, b| a.re.total_cmp(&b.re))
    }

    /// `max Im − min Im` over the vertices.
    pub fn imaginary_spread(&self) -> f64 {
        let (lo, hi) = self
            .points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z.im), hi.max(z.im)));
        if lo > hi {
            0.0
        } else {
            hi - lo
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TraceWindow {
    Cartesian {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
    /// `ln r ∈ [ln_r_min, ln_r_max]`, `θ ∈ [theta_min, theta_max]`.
    Polar {
        ln_r_min: f64,
        ln_r_max: f64,
        theta_min: f64,
        theta_max: f64,
    },
}

impl TraceWindow {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        match *self {
            TraceWindow::Cartesian {
                x_min,
                x_max,
                y_min,
                y_max,
            } => (x_min, x_max, y_min, y_max),
            TraceWindow::Polar {
                ln_r_min,
                ln_r_max,
                theta_min,
                theta_max,
            } => (ln_r_min, ln_r_max, theta_min, theta_max),
        }
    }

    fn to_point(&self, u: f64, v: f64) -> CPoint {
        match self {
            TraceWindow::Cartesian { .. } => CPoint::new(u, v),
            TraceWindow::Polar { .. } => CPoint::from_polar(u.exp(), v),
        }
    }

    fn validate(&self) -> Result<()> {
        let (a, b, c, d) = self.bounds();
        if [a, b, c, d].iter().all(|v| v.is_finite()) && b > a && d > c {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("degenerate window {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Ambiguity {
    /// Return `ResolutionTooCoarse`.
    Fail,
    /// Drop the cell and count it.
    Skip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    /// Cells along the first window axis (`x` or `ln r`).
    pub nu: usize,
    /// Cells along the second window axis (`y` or `θ`).
    pub nv: usize,
    /// Interior samples per cell edge used to detect multiple crossings.
    pub edge_samples: usize,
    pub on_ambiguous: Ambiguity,
}

impl Resolution {
    pub fn new(nu: usize, nv: usize) -> Self {
        Self {
            nu,
            nv,
            edge_samples: 2,
            on_ambiguous: Ambiguity::Fail,
        }
    }

    pub fn skipping(self) -> Self {
        Self {
            on_ambiguous: Ambiguity::Skip,
            ..self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceResult {
    pub curves: Vec<CurvePolyline>,
    /// Cells dropped because two branches crossed them.
    pub ambiguous_cells: usize,
    /// Crossings whose refined vertex missed the residual tolerance (lost precision).
    pub dropped_vertices: usize,
}

/// An implicit curve `residual = 0`.
struct Implicit<R, A, K> {
    /// NaN where the residual cannot be evaluated.
    residual: R,
    /// Whether a refined vertex meets the residual tolerance.
    accept: A,
    /// Side condition selecting which zeros of the residual belong to the curve.
    keep: K,
    /// Lower bound on the number of zeros on the segment between two points.
    min_zeros: fn(CPoint, CPoint) -> usize,
}

fn no_bound(_: CPoint, _: CPoint) -> usize {
    0
}

/// Radius below which cells are never traced.
const MIN_RADIUS: f64 = 1e-6;

fn march<R, A, K>(window: &TraceWindow, res: &Resolution, imp: &Implicit<R, A, K>) -> Result<(Vec<Vec<CPoint>>, usize, usize)>
where
    R: Fn(CPoint) -> f64 + Sync,
    A: Fn(CPoint) -> bool + Sync,
    K: Fn(CPoint) -> bool + Sync,
{
    window.validate()?;
    let (nu, nv) = (res.nu, res.nv);
    if nu == 0 || nv == 0 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    let (u0, u1, v0, v1) = window.bounds();
    let (du, dv) = ((u1 - u0) / nu as f64, (v1 - v0) / nv as f64);
    let uv = |i: f64, j: f64| window.to_point(u0 + i * du, v0 + j * dv);
    let stride = nu + 1;

    let vals: Vec<f64> = (0..(nv + 1) * stride)
        .into_par_iter()
        .map(|k| (imp.residual)(uv((k % stride) as f64, (k / stride) as f64)))
        .collect();
    let positive = |v: f64| v >= 0.0;

    // Edges: horizontal (i, j)-(i+1, j) then vertical (i, j)-(i, j+1).
    let n_h = nu * (nv + 1);
    let n_edges = n_h + stride * nv;
    let edge_ends = |e: usize| -> ((usize, usize), (usize, usize)) {
        if e < n_h {
            let (i, j) = (e % nu, e / nu);
            ((i, j), (i + 1, j))
        } else {
            let k = e - n_h;
            let (i, j) = (k % stride, k / stride);
            ((i, j), (i, j + 1))
        }
    };

    #[derive(Clone, Copy, Default)]
    struct EdgeInfo {
        crossing: bool,
        ambiguous: bool,
        /// The crossing belongs to a curve the caller filters out.
        excluded: bool,
        vertex: Option<CPoint>,
    }

    let edges: Vec<EdgeInfo> = (0..n_edges)
        .into_par_iter()
        .map(|e| {
            let ((ia, ja), (ib, jb)) = edge_ends(e);
            let (fa, fb) = (vals[ja * stride + ia], vals[jb * stride + ib]);
            if fa.is_nan() || fb.is_nan() {
                return EdgeInfo::default();
            }
            let (pa, pb) = ((ia as f64, ja as f64), (ib as f64, jb as f64));
            let at = |t: f64| uv(pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1));
            let crossing = positive(fa) != positive(fb);
            let m = res.edge_samples;
            let mut changes = 0;
            let mut zeros = 0;
            let mut prev = fa;
            let mut prev_z = at(0.0);
            for s in 1..=m + 1 {
                let z = at(s as f64 / (m + 1) as f64);
                zeros += (imp.min_zeros)(prev_z, z);
                prev_z = z;
                let cur = if s == m + 1 { fb } else { (imp.residual)(z) };
                if cur.is_nan() {
                    return EdgeInfo {
                        crossing,
                        ambiguous: true,
                        excluded: false,
                        vertex: None,
                    };
                }
                if positive(cur) != positive(prev) {
                    changes += 1;
                }
                prev = cur;
            }
            let ambiguous = changes != usize::from(crossing) || zeros > changes;
            let (mut vertex, mut excluded) = (None, false);
            if crossing && !ambiguous {
                let (mut a, mut b) = (0.0f64, 1.0f64);
                let mut z = at(0.5);
                for _ in 0..80 {
                    z = at(0.5 * (a + b));
                    if (imp.accept)(z) {
                        vertex = Some(z);
                        break;
                    }
                    let ft = (imp.residual)(z);
                    if ft.is_nan() {
                        break;
                    }
                    if positive(ft) == positive(fa) {
                        a = 0.5 * (a + b);
                    } else {
                        b = 0.5 * (a + b);
                    }
                    if b - a < 1e-17 {
                        break;
                    }
                }
                if !(imp.keep)(z) {
                    vertex = None;
                    excluded = true;
                }
            }
            EdgeInfo {
                crossing,
                ambiguous,
                excluded,
                vertex,
            }
        })
        .collect();

    let h_edge = |i: usize, j: usize| j * nu + i;
    let v_edge = |i: usize, j: usize| n_h + j * stride + i;

    let near_zero = |i: usize, j: usize| -> bool {
        match window {
            TraceWindow::Cartesian { .. } => {
                let (xa, xb) = (u0 + i as f64 * du, u0 + (i + 1) as f64 * du);
                let (ya, yb) = (v0 + j as f64 * dv, v0 + (j + 1) as f64 * dv);
                let dx = if xa > 0.0 { xa } else if xb < 0.0 { -xb } else { 0.0 };
                let dy = if ya > 0.0 { ya } else if yb < 0.0 { -yb } else { 0.0 };
                dx.hypot(dy) < MIN_RADIUS.max(du.hypot(dv))
            }
            TraceWindow::Polar { .. } => (u0 + i as f64 * du).exp() < MIN_RADIUS,
        }
    };

    // Segments between edge ids, cell by cell in row-major order.
    let mut segments: Vec<(usize, usize)> = Vec::new();
    let mut ambiguous_cells = 0;
    for j in 0..nv {
        for i in 0..nu {
            let corners = [
                vals[j * stride + i],
                vals[j * stride + i + 1],
                vals[(j + 1) * stride + i + 1],
                vals[(j + 1) * stride + i],
            ];
            if corners.iter().any(|v| v.is_nan()) || near_zero(i, j) {
                continue;
            }
            // bottom, right, top, left
            let ids = [h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)];
            if ids.iter().any(|&e| edges[e].ambiguous) {
                ambiguous_cells += 1;
                continue;
            }
            let cross: Vec<usize> = (0..4).filter(|&k| edges[ids[k]].crossing).collect();
            match cross.len() {
                0 => {}
                2 => segments.push((ids[cross[0]], ids[cross[1]])),
                4 => {
                    let center = (imp.residual)(uv(i as f64 + 0.5, j as f64 + 0.5));
                    if center.is_nan() {
                        ambiguous_cells += 1;
                        continue;
                    }
                    if positive(center) == positive(corners[0]) {
                        // corners 0 and 2 joined through the center
                        segments.push((ids[0], ids[1]));
                        segments.push((ids[2], ids[3]));
                    } else {
                        segments.push((ids[3], ids[0]));
                        segments.push((ids[1], ids[2]));
                    }
                }
                _ => ambiguous_cells += 1,
            }
        }
    }
    if ambiguous_cells > 0 && res.on_ambiguous == Ambiguity::Fail {
        return Err(Error::ResolutionTooCoarse { ambiguous_cells });
    }

    let mut dropped = 0;
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in &segments {
        if edges[a].vertex.is_none() || edges[b].vertex.is_none() {
            continue;
        }
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    dropped += edges.iter().filter(|e| e.crossing && !e.ambiguous && !e.excluded && e.vertex.is_none()).count();

    // Open chains from degree-1 vertices first, then closed loops.
    let mut used: BTreeMap<usize, bool> = adj.keys().map(|&k| (k, false)).collect();
    let mut chains = Vec::new();
    let starts: Vec<usize> = adj
        .iter()
        .filter(|(_, n)| n.len() == 1)
        .map(|(&k, _)| k)
        .chain(adj.keys().copied())
        .collect();
    for s in starts {
        if used[&s] {
            continue;
        }
        let mut chain = vec![s];
        used.insert(s, true);
        let mut cur = s;
        while let Some(&next) = adj[&cur].iter().find(|n| !used[*n]) {
            used.insert(next, true);
            chain.push(next);
            cur = next;
        }
        let closed = chain.len() > 2 && adj[&cur].contains(&s);
        let mut pts: Vec<CPoint> = chain.iter().map(|e| edges[*e].vertex.expect("kept")).collect();
        if closed {
            pts.push(pts[0]);
        }
        chains.push(pts);
    }
    Ok((chains, ambiguous_cells, dropped))
}

fn polylines(chains: Vec<Vec<CPoint>>, kind: CurveKind, index: impl Fn(&[CPoint]) -> Option<i64>) -> Vec<CurvePolyline> {
    chains
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|points| {
            let closed = points.len() > 2 && points.first() == points.last();
            CurvePolyline {
                branch: index(&points),
                points,
                kind,
                closed,
            }
        })
        .collect()
}

/// `φ = arg z + ζ`; `Im f = λ e^ξ |z| sin φ` and `Re f = λ e^ξ |z| cos φ`.
pub fn preimage_phase(z: CPoint) -> Option<f64> {
    let xz = xi_zeta(z).ok()?;
    Some(z.im.atan2(z.re) + xz.zeta)
}

/// Residual `Im f / |f|` of the preimage equation; independent of `λ`.
pub fn preimage_residual(z: CPoint) -> f64 {
    preimage_phase(z).map_or(f64::NAN, f64::sin)
}

/// Multiples of `π` strictly passed by the continuous phase `φ` between `a` and `b`.
///
/// Each one is a zero of `sin φ` on the segment, so a count above one means
/// the segment is crossed by several branches however the samples fall.
fn phase_levels_crossed(a: CPoint, b: CPoint) -> usize {
    let (Ok(xa), Ok(xb)) = (xi_zeta(a), xi_zeta(b)) else {
        return 0;
    };
    let pa = a.im.atan2(a.re) + xa.zeta;
    // the arg difference along a short segment is taken continuously
    let pb = pa + crate::complex_map::wrap_angle(b.im.atan2(b.re) - a.im.atan2(a.re)) + (xb.zeta - xa.zeta);
    ((pb / PI).floor() - (pa / PI).floor()).abs() as usize
}

/// Branch index `n = round((−ζ − arctan(y/x)) / π)` at `z`.
pub fn preimage_branch_index(z: CPoint) -> Option<i64> {
    let xz = xi_zeta(z).ok()?;
    Some(((-xz.zeta - (z.im / z.re).atan()) / PI).round() as i64)
}

/// Components of `f^{-1}(ℝ⁺)` in `window`.
///
/// Each vertex satisfies `|Im f| ≤ 1e-10 |Re f|` and `Re f > 0`.
pub fn trace_preimage_rplus(params: &MapParams, window: &TraceWindow, res: &Resolution) -> Result<TraceResult> {
    // The zero set of Im f and the sign of Re f do not depend on λ.
    let _ = params;
    let imp = Implicit {
        residual: preimage_residual,
        accept: |z: CPoint| {
            preimage_phase(z).is_some_and(|phi| {
                let (s, c) = phi.sin_cos();
                s.abs() <= 1e-10 * c.abs()
            })
        },
        // zeros with Re f < 0 are preimages of the negative axis
        keep: |z: CPoint| preimage_phase(z).is_some_and(|phi| phi.cos() > 0.0),
        min_zeros: phase_levels_crossed,
    };
    let (chains, ambiguous_cells, dropped_vertices) = march(window, res, &imp)?;
    let curves = polylines(chains, CurveKind::PreimageRplus, |pts| {
        let right = pts.iter().copied().max_by(|a, b| a.re.total_cmp(&b.re))?;
        preimage_branch_index(right)
    });
    Ok(TraceResult {
        curves,
        ambiguous_cells,
        dropped_vertices,
    })
}

pub fn barrier_residual(z: CPoint) -> f64 {
    z.re * z.im.sin() + z.im * z.im.cos()
}

/// Components of `x sin y + y cos y = 0`, indexed by the nearest `m` with `y ≈ mπ` at the leftmost vertex.
pub fn trace_barrier(window: &TraceWindow, res: &Resolution) -> Result<TraceResult> {
    let imp = Implicit {
        residual: barrier_residual,
        accept: |z: CPoint| barrier_residual(z).abs() <= 1e-10,
        keep: |_| true,
        min_zeros: no_bound,
    };
    let (chains, ambiguous_cells, dropped_vertices) = march(window, res, &imp)?;
    let curves = polylines(chains, CurveKind::Barrier, |pts| {
        let left = pts.iter().copied().min_by(|a, b| a.re.total_cmp(&b.re))?;
        Some((left.im / PI).round() as i64)
    });
    Ok(TraceResult {
        curves,
        ambiguous_cells,
        dropped_vertices,
    })
}

/// `y` on the barrier branch near `y = mπ` at abscissa `x < -1`, by bisection.
pub fn barrier_crossing(x: f64, m: i64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    // tan y = −y/x has exactly one root in (mπ − π/2, mπ + π/2) for x < −1
    let c = m as f64 * PI;
    let g = |y: f64| x * y.sin() + y * y.cos();
    crate::roots::bisect(g, c - 0.5 * PI + 1e-12, c + 0.5 * PI - 1e-12, 1e-14)
}

/// The circle `A_n`: center `i p`, radius `|p|`, `p = 1 / (2nπ)`.
pub fn approx_a_n(n: i64, points: usize) -> Result<CurvePolyline> {
    if n == 0 {
        return Err(Error::InvalidParameter("A_n needs n != 0".into()));
    }
    let p = 1.0 / (2.0 * n as f64 * PI);
    let m = points.max(3);
    let mut pts: Vec<CPoint> = (0..m)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / m as f64;
            CPoint::new(0.0, p) + CPoint::from_polar(p.abs(), t - 0.5 * PI * p.signum())
        })
        .collect();
    pts.push(pts[0]);
    Ok(CurvePolyline {
        points: pts,
        branch: Some(n),
        kind: CurveKind::AnCircle,
        closed: true,
    })
}

/// Largest relative distance `||z − ip| − |p|| / |p|` from the vertices to the circle `A_n`.
pub fn relative_distance_to_a_n(points: &[CPoint], n: i64) -> f64 {
    let p = 1.0 / (2.0 * n as f64 * PI);
    points
        .iter()
        .map(|z| ((z - CPoint::new(0.0, p)).norm() - p.abs()).abs() / p.abs())
        .fold(0.0, f64::max)
}

fn point_segment_distance(z: CPoint, a: CPoint, b: CPoint) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    let t = if len2 > 0.0 {
        ((z - a).re * d.re + (z - a).im * d.im) / len2
    } else {
        0.0
    };
    (z - (a + d * t.clamp(0.0, 1.0))).norm()
}

/// Hausdorff distance between the union of `curves` and `A_n`, relative to `|p|`.
///
/// The circle side is sampled at `samples` points; distances to the curves are
/// measured to their segments.
pub fn relative_hausdorff_to_a_n(curves: &[CurvePolyline], n: i64, samples: usize) -> Result<f64> {
    let p = 1.0 / (2.0 * n as f64 * PI);
    let pts: Vec<CPoint> = curves.iter().flat_map(|c| c.points.iter().copied()).collect();
    if pts.is_empty() {
        return Err(Error::NoPointFound);
    }
    let forward = relative_distance_to_a_n(&pts, n);
    let circle = approx_a_n(n, samples)?;
    let backward = circle
        .points
        .iter()
        .map(|&z| {
            curves
                .iter()
                .flat_map(|c| c.points.windows(2).map(move |w| point_segment_distance(z, w[0], w[1])))
                .chain(pts.iter().map(|&q| (z - q).norm()))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
        / p.abs();
    Ok(forward.max(backward))
}

pub fn a_n_prime_residual(n: i64, z: CPoint) -> f64 {
    let (x, y) = (z.re, z.im);
    (y + (y / x).atan()).sin() - x.exp() * z.norm() * n as f64 * PI
}

/// `A'_n` traced in a window of the left half-plane.
pub fn approx_a_n_prime(n: i64, window: &TraceWindow, res: &Resolution) -> Result<TraceResult> {
    if n == 0 {
        return Err(Error::InvalidParameter("A'_n needs n != 0".into()));
    }
    let in_left = match *window {
        TraceWindow::Cartesian { x_max, .. } => x_max < 0.0,
        TraceWindow::Polar {
            theta_min,
            theta_max,
            ..
        } => theta_min > 0.5 * PI && theta_max < 1.5 * PI,
    };
    if !in_left {
        return Err(Error::InvalidParameter("A'_n window must lie in the left half-plane".into()));
    }
    let imp = Implicit {
        residual: |z: CPoint| a_n_prime_residual(n, z),
        accept: |z: CPoint| a_n_prime_residual(n, z).abs() <= 1e-10,
        keep: |_| true,
        min_zeros: no_bound,
    };
    let (chains, ambiguous_cells, dropped_vertices) = march(window, res, &imp)?;
    Ok(TraceResult {
        curves: polylines(chains, CurveKind::AnPrime, |_| Some(n)),
        ambiguous_cells,
        dropped_vertices,
    })
}

/// Rightmost point of the tongue of `A'_n` between `y = 0` and `y = π`.
///
/// On that tongue `sin(y + arctan(y/x)) ≤ 1`, so the tip is where
/// `max_y [sin(y + arctan(y/x)) − e^x |z| nπ] = 0`; found by bisection in `x`.
pub fn a_n_prime_tip(n: i64) -> f64 {
    let peak = |x: f64| {
        // golden-section search for the maximum in y ∈ (0, π)
        let f = |y: f64| a_n_prime_residual(n, CPoint::new(x, y));
        let (mut a, mut b) = (1e-9, PI - 1e-9);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let (c, d) = (b - g * (b - a), a + g * (b - a));
            if f(c) > f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        f(0.5 * (a + b))
    };
    let (mut lo, mut hi) = (-60.0, -1e-6);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if peak(m) >= 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// `y` where `A'_n` crosses the vertical line at `x`, on the branch near `y = mπ`, by bisection.
pub fn a_n_prime_height(n: i64, x: f64, m: i64) -> f64 {
    let c = m as f64 * PI;
    let g = |y: f64| a_n_prime_residual(n, CPoint::new(x, y));
    crate::roots::bisect(g, c - 0.4 * PI, c + 0.4 * PI, 1e-14)
}

/// Channel labels: `C⁺(R)`, `C⁻(R)` near 0 and the horizontal `C_n(R)` far left.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChannelId {
    Plus { r: f64 },
    Minus { r: f64 },
    Horiz { n: i64, r: f64 },
}

pub const EPSILON_0: f64 = 0.25;

pub fn channel_membership(z: CPoint, r: f64) -> Result<Option<ChannelId>> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("channel parameter R must be >= 1, got {r}")));
    }
    let (x, y) = (z.re, z.im);
    if z.norm() < 1.0 / r && y.abs() < EPSILON_0 * x.abs() {
        if x > 0.0 {
            return Ok(Some(ChannelId::Plus { r }));
        }
        if x < 0.0 {
            return Ok(Some(ChannelId::Minus { r }));
        }
    }
    let n = (y / PI).round();
    if (y - n * PI).abs() < EPSILON_0 && x < -r * (n.abs() + 1.0) {
        return Ok(Some(ChannelId::Horiz { n: n as i64, r }));
    }
    Ok(None)
}

pub const CSV_HEADER: &str = "kind,branch,x,y,residual";

/// One row per vertex: `kind,branch,x,y,residual`; empty branch when unindexed.
pub fn to_csv(curves: &[CurvePolyline], residual: impl Fn(&CurvePolyline, CPoint) -> f64) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in curves {
        let branch = c.branch.map(|b| b.to_string()).unwrap_or_default();
        for &z in &c.points {
            let _ = writeln!(out, "{},{},{:e},{:e},{:e}", c.kind.as_str(), branch, z.re, z.im, residual(c, z));
        }
    }
    out
}

/// Residual of a vertex according to the kind of its curve.
pub fn default_residual(c: &CurvePolyline, z: CPoint) -> f64 {
    match c.kind {
        CurveKind::PreimageRplus => preimage_residual(z),
        CurveKind::Barrier => barrier_residual(z),
        CurveKind::AnCircle => {
            let n = c.branch.unwrap_or(1);
            relative_distance_to_a_n(&[z], n)
        }
        CurveKind::AnPrime => a_n_prime_residual(c.branch.unwrap_or(1), z),
    }
}

/// `θ + nπ − e^{−cos θ} sin(sin θ + θ)` reduced to its distance from the nearest multiple of `π`.
pub fn unit_circle_gap(theta: f64) -> f64 {
    let rhs = (-theta.cos()).exp() * (theta.sin() + theta).sin();
    let d = (rhs - theta) / PI;
    (d - d.round()).abs() * PI
}

/// Minimum of [`unit_circle_gap`] over `samples` interior points of `(0, π)`, with its location.
pub fn unit_circle_min_gap(samples: usize) -> (f64, f64) {
    (1..=samples)
        .map(|k| PI * k as f64 / (samples + 1) as f64)
        .map(|t| (unit_circle_gap(t), t))
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
}

fn segments_by_cell(curves: &[CurvePolyline], window: &TraceWindow, res: &Resolution) -> BTreeMap<(usize, usize), Vec<(CPoint, CPoint)>> {
    let (u0, u1, v0, v1) = window.bounds();
    let (du, dv) = ((u1 - u0) / res.nu as f64, (v1 - v0) / res.nv as f64);
    let mut out: BTreeMap<(usize, usize), Vec<(CPoint, CPoint)>> = BTreeMap::new();
    for c in curves {
        for w in c.points.windows(2) {
            let m = 0.5 * (w[0] + w[1]);
            let (u, v) = match window {
                TraceWindow::Cartesian { .. } => (m.re, m.im),
                TraceWindow::Polar { .. } => (m.norm().ln(), m.arg()),
            };
            let (i, j) = (((u - u0) / du).floor(), ((v - v0) / dv).floor());
            if i >= 0.0 && j >= 0.0 && (i as usize) < res.nu && (j as usize) < res.nv {
                out.entry((i as usize, j as usize)).or_default().push((w[0], w[1]));
            }
        }
    }
    out
}

/// Grid cells of `window` at `res` holding a segment of one of `curves`.
///
/// Consecutive vertices of a traced polyline lie on edges of one cell, so a
/// segment's midpoint identifies its cell.
pub fn segment_cells(curves: &[CurvePolyline], window: &TraceWindow, res: &Resolution) -> BTreeSet<(usize, usize)> {
    segments_by_cell(curves, window, res).into_keys().collect()
}

/// Points where a polyline passes from one side of the barrier set to the other:
/// consecutive vertices with opposite signs of `x sin y + y cos y`, linearly interpolated.
pub fn barrier_crossings(c: &CurvePolyline) -> Vec<CPoint> {
    c.points
        .windows(2)
        .filter_map(|w| {
            let (a, b) = (barrier_residual(w[0]), barrier_residual(w[1]));
            ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)).then(|| w[0] + (w[1] - w[0]) * (a / (a - b)))
        })
        .collect()
}

/// Points where consecutive vertices straddle `|z| = 1`, linearly interpolated.
pub fn unit_circle_crossings(c: &CurvePolyline) -> Vec<CPoint> {
    c.points
        .windows(2)
        .filter_map(|w| {
            let (a, b) = (w[0].norm() - 1.0, w[1].norm() - 1.0);
            ((a < 0.0) != (b < 0.0)).then(|| w[0] + (w[1] - w[0]) * (a / (a - b)))
        })
        .collect()
}
