//! Sampled verification of the quantitative estimates, and constructive shadowing.
//!
//! Every report is a minimum over a fixed sample set, evaluated in parallel
//! and reduced sequentially in sample order, so margins are bit-reproducible.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex_map::{eval, eval_log_point, re_im_parts, wrap_angle, CPoint, MapParams};
use crate::curves::EPSILON_0;
use crate::error::{Error, Result};
use crate::roots::bisect;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub lemma: String,
    pub params: Value,
    pub samples: usize,
    pub worst_margin: f64,
    pub worst_location: CPoint,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl MarginReport {
    fn new(lemma: &str, params: Value, samples: usize, worst: (f64, CPoint), details: Value) -> Self {
        Self {
            lemma: lemma.into(),
            params,
            samples,
            worst_margin: worst.0,
            worst_location: worst.1,
            // NaN margins fail
            pass: worst.0 >= 0.0,
            details,
        }
    }
}

/// Smallest margin and its location; ties keep the earliest sample. Failed evaluations count as `-∞`.
fn worst_of(points: &[CPoint], margin: impl Fn(CPoint) -> Result<f64> + Sync) -> (f64, CPoint) {
    let values: Vec<f64> = points
        .par_iter()
        .map(|&z| match margin(z) {
            Ok(m) if !m.is_nan() => m,
            _ => f64::NEG_INFINITY,
        })
        .collect();
    fold_worst(values.into_iter().zip(points.iter().copied()))
}

fn fold_worst(items: impl Iterator<Item = (f64, CPoint)>) -> (f64, CPoint) {
    items.fold((f64::INFINITY, CPoint::new(f64::NAN, f64::NAN)), |acc, it| {
        if it.0 < acc.0 {
            it
        } else {
            acc
        }
    })
}

/// `n` points `a·(b/a)^{(i+½)/n}`, strictly inside `(a, b)`.
fn log_interior(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let r = (b / a).ln();
    (0..n).map(move |i| a * (r * (i as f64 + 0.5) / n as f64).exp())
}

/// `n` points `a + (b−a)(i+½)/n`, strictly inside `(a, b)`.
fn lin_interior(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| a + (b - a) * (i as f64 + 0.5) / n as f64)
}

fn side(samples: usize) -> usize {
    ((samples as f64).sqrt().ceil() as usize).max(2)
}

/// `min Re f(z) / (λ Re z) − 0.7` over `Re z ∈ [2, x_max]` (log-spaced), `|Im z| ≤ y_max`.
pub fn verify_growth(params: &MapParams, x_max: f64, y_max: f64, samples: usize) -> Result<MarginReport> {
    params.require_baker()?;
    if !(x_max > 2.0) || !(y_max >= 0.0) || !x_max.is_finite() || !y_max.is_finite() {
        return Err(Error::InvalidParameter("growth window needs x_max > 2 and y_max >= 0".into()));
    }
    let n = side(samples);
    let xs: Vec<f64> = (0..n)
        .map(|i| 2.0 * (x_max / 2.0).powf(i as f64 / (n - 1) as f64))
        .collect();
    let pts: Vec<CPoint> = xs
        .iter()
        .flat_map(|&x| (0..n).map(move |j| CPoint::new(x, -y_max + 2.0 * y_max * j as f64 / (n - 1) as f64)))
        .collect();
    let lambda = params.lambda();
    let worst = worst_of(&pts, |z| {
        let (re, _, _) = re_im_parts(params, z)?;
        Ok(re / (lambda * z.re) - 0.7)
    });
    Ok(MarginReport::new(
        "growth",
        json!({"lambda": lambda, "x_min": 2.0, "x_max": x_max, "y_max": y_max, "bound": 0.7}),
        pts.len(),
        worst,
        Value::Null,
    ))
}

/// Half-line estimate at `y = 2nπ` for each `n` in `n_lo..=n_hi`.
///
/// Two margins per `n`: `min Re f − 2` over `x ∈ [−(ln y + ln 2), 10]`, and
/// `0.5 − |x* − x̂|` where `x*` is the zero of `Im f` on the segment found by
/// bisection and `x̂ = −(ln y + ln(π/2))`.
pub fn verify_halfline(params: &MapParams, n_lo: u32, n_hi: u32) -> Result<MarginReport> {
    params.require_channels()?;
    if n_lo == 0 || n_hi < n_lo {
        return Err(Error::InvalidParameter("half-line range needs 1 <= n_lo <= n_hi".into()));
    }
    const PER_LINE: usize = 4001;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for n in n_lo..=n_hi {
        let y = 2.0 * n as f64 * PI;
        let x_lo = -(y.ln() + 2f64.ln());
        let pts: Vec<CPoint> = (0..PER_LINE)
            .map(|i| CPoint::new(x_lo + (10.0 - x_lo) * i as f64 / (PER_LINE - 1) as f64, y))
            .collect();
        let (m_re, at_re) = worst_of(&pts, |z| Ok(re_im_parts(params, z)?.0 - 2.0));
        let im = |x: f64| re_im_parts(params, CPoint::new(x, y)).map(|p| p.1).unwrap_or(f64::NAN);
        let predicted = -(y.ln() + (PI / 2.0).ln());
        let (a, b) = (im(x_lo), im(10.0));
        let crossing = if a.is_finite() && b.is_finite() && a * b < 0.0 {
            bisect(im, x_lo, 10.0, 1e-13)
        } else {
            f64::NAN
        };
        let m_cross = 0.5 - (crossing - predicted).abs();
        rows.push(json!({
            "n": n,
            "min_re_minus_2": m_re,
            "crossing": crossing,
            "predicted": predicted,
            "offset": crossing - predicted,
        }));
        items.push((m_re, at_re));
        items.push((if m_cross.is_nan() { f64::NEG_INFINITY } else { m_cross }, CPoint::new(crossing, y)));
    }
    Ok(MarginReport::new(
        "halfline",
        json!({"lambda": params.lambda(), "n_min": n_lo, "n_max": n_hi, "x_max": 10.0, "crossing_band": 0.5}),
        (n_hi - n_lo + 1) as usize * (PER_LINE + 1),
        fold_worst(items.into_iter()),
        Value::Array(rows),
    ))
}

/// The four channel behaviours, labelled by what `|f|` does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChannelCase {
    /// `C⁺`: `|f(z)| ≥ L/|z|`, `|f(z0)/f(z1)| ≥ LK`.
    Plus,
    /// `C⁻`: `|f(z)| ≤ |z|/L`, `|f(z1)/f(z0)| ≥ LK`.
    Minus,
    /// Horizontal channels where `|f| ≥ L|z|` and `|f(z1)/f(z0)| ≥ LK`.
    BlowUp,
    /// Horizontal channels where `|f| ≤ 1/(L|z|)` and `|f(z0)/f(z1)| ≥ LK`.
    Collapse,
}

impl ChannelCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelCase::Plus => "plus",
            ChannelCase::Minus => "minus",
            ChannelCase::BlowUp => "blow_up",
            ChannelCase::Collapse => "collapse",
        }
    }
}

/// Horizontal channel indices sampled for each parity.
pub const CHANNEL_INDICES: [i64; 5] = [-2, -1, 0, 1, 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub r: f64,
    pub l: f64,
    pub k: f64,
    /// Pointwise and pair reports for each case, with the observed parity:
    /// even `C_n` collapse and odd `C_n` blow up.
    pub cases: Vec<MarginReport>,
    /// The horizontal cases with the opposite parity assignment (even blow
    /// up, odd collapse), kept to record the index shift.
    pub swapped_parity: Vec<MarginReport>,
    pub pass: bool,
}

/// Far end of horizontal channel samples: `e^{-x}` must stay a double.
pub const FAR_LEFT: f64 = 700.0;

/// Sample points strictly inside one channel component, spanning a modulus ratio of `span`.
fn channel_points(which: Option<i64>, plus: bool, r: f64, span: f64, samples: usize) -> Vec<CPoint> {
    let n = side(samples);
    match which {
        None => {
            let half = EPSILON_0.atan();
            log_interior(1.0 / (r * span), 1.0 / r, n)
                .flat_map(|m| {
                    lin_interior(-half, half, n).map(move |a| {
                        let z = CPoint::from_polar(m, a);
                        if plus {
                            z
                        } else {
                            -z
                        }
                    })
                })
                .collect()
        }
        Some(k) => {
            let x0 = r * (k.unsigned_abs() as f64 + 1.0);
            let c = k as f64 * PI;
            log_interior(x0, (x0 * span).min(FAR_LEFT.max(x0)), n)
                .flat_map(|ax| lin_interior(c - EPSILON_0, c + EPSILON_0, n).map(move |y| CPoint::new(-ax, y)))
                .collect()
        }
    }
}

/// Pointwise and pair margins of `case` on the points of one channel component.
fn channel_margins(params: &MapParams, case: ChannelCase, pts: &[CPoint], l: f64, k: f64) -> ((f64, CPoint), (f64, CPoint), usize) {
    let ln_f: Vec<f64> = pts
        .par_iter()
        .map(|&z| eval_log_point(params, z).map(|p| p.rho).unwrap_or(f64::NAN))
        .collect();
    let (ll, lk) = (l.ln(), (l * k).ln());
    let point = |i: usize| {
        let (lf, lz) = (ln_f[i], pts[i].norm().ln());
        let m = match case {
            ChannelCase::Plus => lf - (ll - lz),
            ChannelCase::Minus => (lz - ll) - lf,
            ChannelCase::BlowUp => lf - (ll + lz),
            ChannelCase::Collapse => -(ll + lz) - lf,
        };
        if m.is_nan() {
            f64::NEG_INFINITY
        } else {
            m
        }
    };
    let pointwise = fold_worst((0..pts.len()).map(|i| (point(i), pts[i])));

    // pairs |z1| ≥ K|z0|: the binding z1 is an extreme of ln|f| over a suffix in modulus order
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| pts[a].norm().total_cmp(&pts[b].norm()));
    let outer_grows = matches!(case, ChannelCase::Minus | ChannelCase::BlowUp);
    let mut suffix = vec![if outer_grows { f64::INFINITY } else { f64::NEG_INFINITY }; order.len() + 1];
    for s in (0..order.len()).rev() {
        let v = ln_f[order[s]];
        suffix[s] = if v.is_nan() {
            f64::NAN
        } else if outer_grows {
            suffix[s + 1].min(v)
        } else {
            suffix[s + 1].max(v)
        };
    }
    let moduli: Vec<f64> = order.iter().map(|&i| pts[i].norm()).collect();
    let mut pairs = 0;
    let pair = fold_worst(order.iter().enumerate().filter_map(|(s, &i)| {
        let first = moduli.partition_point(|&m| m < k * moduli[s]);
        if first >= order.len() {
            return None;
        }
        pairs += order.len() - first;
        let m = if outer_grows {
            suffix[first] - ln_f[i] - lk
        } else {
            ln_f[i] - suffix[first] - lk
        };
        Some((if m.is_nan() { f64::NEG_INFINITY } else { m }, pts[i]))
    }));
    (pointwise, pair, pairs)
}

fn case_report(params: &MapParams, case: ChannelCase, channels: &[Option<i64>], r: f64, l: f64, k: f64, samples: usize) -> Result<MarginReport> {
    let span = 4.0 * k;
    let mut point_items = Vec::new();
    let mut pair_items = Vec::new();
    let mut total = 0;
    let mut pair_total = 0;
    let mut rows = Vec::new();
    for &ch in channels {
        let pts = channel_points(ch, case != ChannelCase::Minus, r, span, samples);
        if pts.is_empty() {
            return Err(Error::EmptyChannelSample);
        }
        let (pw, pr, pairs) = channel_margins(params, case, &pts, l, k);
        if pairs == 0 {
            return Err(Error::EmptyChannelSample);
        }
        let (lo, hi) = pts.iter().fold((f64::INFINITY, 0.0f64), |(a, b), z| (a.min(z.norm()), b.max(z.norm())));
        rows.push(json!({"channel": ch, "pointwise": pw.0, "pair": pr.0, "pairs": pairs, "modulus_range": [lo, hi]}));
        point_items.push(pw);
        pair_items.push(pr);
        total += pts.len();
        pair_total += pairs;
    }
    let pw = fold_worst(point_items.into_iter());
    let pr = fold_worst(pair_items.into_iter());
    let worst = fold_worst([pw, pr].into_iter());
    Ok(MarginReport::new(
        &format!("channels/{}", case.as_str()),
        json!({"lambda": params.lambda(), "R": r, "L": l, "K": k, "epsilon_0": EPSILON_0, "modulus_span": span}),
        total,
        worst,
        json!({"pointwise_margin": pw.0, "pair_margin": pr.0, "pairs": pair_total, "channels": rows}),
    ))
}

/// All four channel cases at parameter `R`, with `samples` points per channel component.
pub fn verify_channels(params: &MapParams, r: f64, l: f64, k: f64, samples: usize) -> Result<ChannelReport> {
    params.require_channels()?;
    if !(r >= 1.0) || !(l > 1.0) || !(k > 1.0) || !r.is_finite() || !l.is_finite() || !k.is_finite() {
        return Err(Error::InvalidParameter("channels need R >= 1, L > 1, K > 1".into()));
    }
    if samples == 0 {
        return Err(Error::EmptyChannelSample);
    }
    let even: Vec<Option<i64>> = CHANNEL_INDICES.iter().filter(|n| *n % 2 == 0).map(|&n| Some(n)).collect();
    let odd: Vec<Option<i64>> = CHANNEL_INDICES.iter().filter(|n| *n % 2 != 0).map(|&n| Some(n)).collect();
    let cases = vec![
        case_report(params, ChannelCase::Plus, &[None], r, l, k, samples)?,
        case_report(params, ChannelCase::Minus, &[None], r, l, k, samples)?,
        case_report(params, ChannelCase::BlowUp, &odd, r, l, k, samples)?,
        case_report(params, ChannelCase::Collapse, &even, r, l, k, samples)?,
    ];
    let swapped_parity = vec![
        case_report(params, ChannelCase::BlowUp, &even, r, l, k, samples)?,
        case_report(params, ChannelCase::Collapse, &odd, r, l, k, samples)?,
    ];
    let pass = cases.iter().all(|c| c.pass);
    Ok(ChannelReport {
        r,
        l,
        k,
        cases,
        swapped_parity,
        pass,
    })
}

/// Doubles `R` from 2 until all four cases pass or `R` exceeds `r_max`; returns the last report.
pub fn find_channel_radius(params: &MapParams, l: f64, k: f64, samples: usize, r_max: f64) -> Result<ChannelReport> {
    let mut r = 2.0;
    loop {
        let rep = verify_channels(params, r, l, k, samples)?;
        if rep.pass || 2.0 * r > r_max {
            return Ok(rep);
        }
        r *= 2.0;
    }
}

/// A compact box of `ℂ*`, in Cartesian or log-polar coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChainBox {
    Cartesian { x_min: f64, x_max: f64, y_min: f64, y_max: f64 },
    /// `rho = ln|z|`, `theta = arg z`; the θ interval is shorter than `2π`.
    Log { rho_min: f64, rho_max: f64, theta_min: f64, theta_max: f64 },
}

impl ChainBox {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        match *self {
            ChainBox::Cartesian { x_min, x_max, y_min, y_max } => (x_min, x_max, y_min, y_max),
            ChainBox::Log { rho_min, rho_max, theta_min, theta_max } => (rho_min, rho_max, theta_min, theta_max),
        }
    }

    fn validate(&self) -> Result<()> {
        let (a, b, c, d) = self.bounds();
        let finite = [a, b, c, d].iter().all(|v| v.is_finite());
        let ok = finite
            && a < b
            && c < d
            && match self {
                ChainBox::Cartesian { .. } => !(a <= 0.0 && b >= 0.0 && c <= 0.0 && d >= 0.0),
                ChainBox::Log { .. } => d - c < 2.0 * PI,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("box {self:?} is not a compact box avoiding 0")))
        }
    }

    /// Box coordinates of `z`; the angle is unwrapped next to the box center.
    fn coords(&self, z: CPoint) -> (f64, f64) {
        match *self {
            ChainBox::Cartesian { .. } => (z.re, z.im),
            ChainBox::Log { theta_min, theta_max, .. } => {
                let c = 0.5 * (theta_min + theta_max);
                (z.norm().ln(), c + wrap_angle(z.im.atan2(z.re) - c))
            }
        }
    }

    fn point(&self, u: f64, v: f64) -> CPoint {
        match self {
            ChainBox::Cartesian { .. } => CPoint::new(u, v),
            ChainBox::Log { .. } => CPoint::from_polar(u.exp(), v),
        }
    }

    pub fn center(&self) -> CPoint {
        let (a, b, c, d) = self.bounds();
        self.point(0.5 * (a + b), 0.5 * (c + d))
    }

    /// `1 − (normalised Chebyshev distance from the center)`: 1 at the center, 0 on the boundary.
    fn depth(&self, z: CPoint) -> f64 {
        let (a, b, c, d) = self.bounds();
        let (u, v) = self.coords(z);
        let du = (u - 0.5 * (a + b)).abs() / (0.5 * (b - a));
        let dv = (v - 0.5 * (c + d)).abs() / (0.5 * (d - c));
        1.0 - du.max(dv)
    }

    /// Membership after inflating the box by `tol` in log coordinates.
    pub fn contains_inflated(&self, z: CPoint, tol: f64) -> bool {
        let (a, b, c, d) = self.bounds();
        let (u, v) = self.coords(z);
        let t = match self {
            ChainBox::Cartesian { .. } => tol * z.norm(),
            ChainBox::Log { .. } => tol,
        };
        u >= a - t && u <= b + t && v >= c - t && v <= d + t
    }

    /// Boundary points, counter-clockwise in box coordinates, `per_side` per side.
    fn boundary(&self, per_side: usize) -> Vec<CPoint> {
        let (a, b, c, d) = self.bounds();
        let m = per_side.max(1);
        let corners = [(a, c), (b, c), (b, d), (a, d)];
        let mut out = Vec::with_capacity(4 * m);
        for s in 0..4 {
            let (p, q) = (corners[s], corners[(s + 1) % 4]);
            for i in 0..m {
                let t = i as f64 / m as f64;
                out.push(self.point(p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
            }
        }
        out
    }

    fn corners(&self) -> [CPoint; 4] {
        let (a, b, c, d) = self.bounds();
        [self.point(a, c), self.point(b, c), self.point(b, d), self.point(a, d)]
    }
}

/// Boxes `E_0, …, E_N` for which `f(E_n) ⊇ E_{n+1}` is assumed or sample-checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxChain {
    pub boxes: Vec<ChainBox>,
}

impl BoxChain {
    pub fn new(boxes: Vec<ChainBox>) -> Result<Self> {
        if boxes.is_empty() {
            return Err(Error::InvalidParameter("a box chain needs at least one box".into()));
        }
        for b in &boxes {
            b.validate()?;
        }
        Ok(Self { boxes })
    }

    /// `N + 1` copies of the square of half-width `half` around `c`.
    pub fn constant(c: CPoint, half: f64, n: usize) -> Result<Self> {
        let b = ChainBox::Cartesian {
            x_min: c.re - half,
            x_max: c.re + half,
            y_min: c.im - half,
            y_max: c.im + half,
        };
        Self::new(vec![b; n + 1])
    }

    /// Log boxes of half-width `radius` around `f^k(z0)`, `k = 0..=n`.
    pub fn along_orbit(params: &MapParams, z0: CPoint, n: usize, radius: f64) -> Result<Self> {
        let mut z = z0;
        let mut boxes = Vec::with_capacity(n + 1);
        for k in 0..=n {
            if k > 0 {
                z = eval(params, z)?;
            }
            let (rho, theta) = (z.norm().ln(), z.im.atan2(z.re));
            boxes.push(ChainBox::Log {
                rho_min: rho - radius,
                rho_max: rho + radius,
                theta_min: theta - radius,
                theta_max: theta + radius,
            });
        }
        Self::new(boxes)
    }

    /// For each `n < N`: whether the image of a boundary mesh of `E_n` winds around every corner of `E_{n+1}`.
    pub fn check_covering(&self, params: &MapParams, per_side: usize) -> Vec<bool> {
        self.boxes
            .windows(2)
            .map(|w| {
                let image: Option<Vec<CPoint>> = w[0].boundary(per_side).into_iter().map(|z| eval(params, z).ok()).collect();
                match image {
                    Some(poly) => w[1].corners().iter().all(|&c| winding_number(&poly, c) != 0),
                    None => false,
                }
            })
            .collect()
    }
}

/// Winding number of the closed polygon `poly` around `p`.
fn winding_number(poly: &[CPoint], p: CPoint) -> i64 {
    let total: f64 = (0..poly.len())
        .map(|i| {
            let (a, b) = (poly[i] - p, poly[(i + 1) % poly.len()] - p);
            wrap_angle(b.im.atan2(b.re) - a.im.atan2(a.re))
        })
        .sum();
    (total / (2.0 * PI)).round() as i64
}

/// Log-coordinate tolerance for the final membership check.
pub const SHADOW_TOLERANCE: f64 = 1e-8;

/// Node budget of the subdivision search.
const SHADOW_NODES: usize = 200_000;

/// A point `z ∈ E_0` with `f^k(z) ∈ E_k` for every `k ≤ N`.
///
/// `E_0` is subdivided into overlapping half-size sub-boxes (a 3×3 pattern),
/// explored depth first, most central image orbit first: the score of a
/// point is its smallest normalised depth in the boxes along its orbit.
/// Sub-boxes whose center orbit falls more than one box-width outside are
/// dropped. The leaf center at `depth` is returned once its orbit passes the
/// membership check with [`SHADOW_TOLERANCE`].
pub fn shadow_orbit(params: &MapParams, chain: &BoxChain, depth: usize) -> Result<CPoint> {
    for b in &chain.boxes {
        b.validate()?;
    }
    let e0 = chain.boxes[0];
    if chain.boxes.len() == 1 {
        return Ok(e0.center());
    }
    let score = |z: CPoint| -> f64 {
        let mut w = z;
        let mut s = f64::INFINITY;
        for (k, b) in chain.boxes.iter().enumerate() {
            if k > 0 {
                match eval(params, w) {
                    Ok(v) => w = v,
                    Err(_) => return f64::NEG_INFINITY,
                }
            }
            s = s.min(b.depth(w));
        }
        s
    };
    let verified = |z: CPoint| -> bool {
        let mut w = z;
        for (k, b) in chain.boxes.iter().enumerate() {
            if k > 0 {
                match eval(params, w) {
                    Ok(v) => w = v,
                    Err(_) => return false,
                }
            }
            if !b.contains_inflated(w, SHADOW_TOLERANCE) {
                return false;
            }
        }
        true
    };
    let (a, b, c, d) = e0.bounds();
    let mut nodes = 0;
    let mut stack = vec![(0.5 * (a + b), 0.5 * (c + d), 0.5 * (b - a), 0.5 * (d - c), 0usize)];
    while let Some((u, v, hu, hv, level)) = stack.pop() {
        nodes += 1;
        if nodes > SHADOW_NODES {
            break;
        }
        if level == depth {
            let z = e0.point(u, v);
            if verified(z) {
                return Ok(z);
            }
            continue;
        }
        let mut kids: Vec<(f64, f64, f64)> = Vec::with_capacity(9);
        for i in [-1.0, 0.0, 1.0] {
            for j in [-1.0, 0.0, 1.0] {
                let (cu, cv) = (u + 0.5 * i * hu, v + 0.5 * j * hv);
                let s = score(e0.point(cu, cv));
                if s >= -1.0 {
                    kids.push((s, cu, cv));
                }
            }
        }
        // stable sort keeps the fixed subdivision order among equal scores; best is pushed last
        kids.sort_by(|p, q| p.0.total_cmp(&q.0));
        for (_, cu, cv) in kids {
            stack.push((cu, cv, 0.5 * hu, 0.5 * hv, level + 1));
        }
    }
    Err(Error::NoPointFound)
}

/// `f^k(z)` for `k = 0..=n`.
pub fn forward_orbit(params: &MapParams, z: CPoint, n: usize) -> Result<Vec<CPoint>> {
    let mut out = vec![z];
    for _ in 0..n {
        let w = eval(params, *out.last().expect("nonempty"))?;
        out.push(w);
    }
    Ok(out)
}
