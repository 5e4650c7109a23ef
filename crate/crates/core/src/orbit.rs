//! Overflow-safe iteration and orbit classification.
//!
//! Orbits are carried in Cartesian form while `|f^n(z)|` stays inside
//! `[1e-300, 1e300]` and in log coordinates `(log|z|, arg z)` outside it. An
//! orbit whose log-modulus itself leaves the double range is *saturated*;
//! iteration stops there and the orbit is treated as escaping to `{0, ∞}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex_map::{wrap_angle, CPoint, LogFactor, LogPoint, SelfMap, WidePoint};
use crate::error::{Error, Result};

/// `ln(1e300)`: beyond this log-modulus iterates are kept in log coordinates.
pub const LOG_RANGE: f64 = 690.775_527_898_213_7;

/// One iterate of an orbit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrbitPoint {
    Plane(CPoint),
    Log(LogPoint),
    Saturated { toward_infinity: bool },
}

impl OrbitPoint {
    fn normalize(lp: LogPoint) -> Self {
        if lp.rho.abs() <= LOG_RANGE {
            OrbitPoint::Plane(lp.to_cpoint())
        } else {
            OrbitPoint::Log(lp)
        }
    }

    /// `log |z|`, clamped to `±f64::MAX` for saturated points.
    pub fn log_modulus(&self) -> f64 {
        match self {
            OrbitPoint::Plane(z) => z.norm().ln(),
            OrbitPoint::Log(lp) => lp.rho,
            OrbitPoint::Saturated { toward_infinity } => {
                if *toward_infinity {
                    f64::MAX
                } else {
                    -f64::MAX
                }
            }
        }
    }

    /// `Re z ≥ c` for `c > 0`, decided in logs when `z` is in log coordinates.
    pub fn re_at_least(&self, c: f64) -> bool {
        match self {
            OrbitPoint::Plane(z) => z.re >= c,
            OrbitPoint::Log(lp) => {
                let cos = lp.theta.cos();
                cos > 0.0 && lp.rho + cos.ln() >= c.ln()
            }
            OrbitPoint::Saturated { .. } => false,
        }
    }

    pub fn is_saturated(&self) -> bool {
        matches!(self, OrbitPoint::Saturated { .. })
    }
}

/// One application of the map to an orbit point.
pub fn step<M: SelfMap + ?Sized>(map: &M, p: OrbitPoint) -> OrbitPoint {
    let wide = match p {
        OrbitPoint::Saturated { .. } => return p,
        OrbitPoint::Plane(z) => {
            if let Ok(v) = map.eval(z) {
                let m = v.norm();
                if m <= 1e300 && m >= 1e-300 {
                    return OrbitPoint::Plane(v);
                }
            }
            WidePoint::from_cpoint(z)
        }
        OrbitPoint::Log(lp) => WidePoint::from_log(lp),
    };
    match map.log_factor(&wide) {
        LogFactor::Finite(a) => {
            let rho = wide.log.rho + a.re;
            if !rho.is_finite() {
                return OrbitPoint::Saturated {
                    toward_infinity: rho > 0.0,
                };
            }
            OrbitPoint::normalize(LogPoint {
                rho,
                theta: wrap_angle(wide.log.theta + a.im),
            })
        }
        LogFactor::Saturated { toward_infinity } => OrbitPoint::Saturated { toward_infinity },
    }
}

/// Which of the conditions defining `I` held at one step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    /// `|f^n(z)| ≥ n/2`
    pub big: bool,
    /// `|f^n(z)| ≤ 2/n`
    pub small: bool,
    /// `Re f^{n+2}(z) ≥ 2`
    pub h2: bool,
}

impl Conditions {
    pub fn any(&self) -> bool {
        self.big || self.small || self.h2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitStep {
    pub log_modulus: f64,
    pub conditions: Conditions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    /// Entered `H = {Re z ≥ 2}` and stayed there for the rest of the budget.
    Absorbed,
    /// Satisfied the `I` condition at every step `1..=horizon`.
    InIHorizon,
    /// Left the representable range (in logs) without entering `H`.
    EscapingUnclassified,
    BoundedOrUnknown,
}

/// The itinerary of one orbit. `steps[n]` describes `f^n(z)`; `steps[0]` is the seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub steps: Vec<OrbitStep>,
    pub first_h_entry: Option<usize>,
    pub classification: Classification,
    pub budget_used: usize,
    pub horizon: usize,
    pub in_i_horizon: bool,
    /// Step at which the log-modulus left the double range, if it did.
    pub saturated_at: Option<usize>,
}

fn conditions_at(n: usize, lm: f64) -> Conditions {
    if n == 0 {
        return Conditions::default();
    }
    let half = (n as f64 / 2.0).ln();
    Conditions {
        big: lm >= half,
        small: lm <= -half,
        h2: false,
    }
}

/// Iterates `z` for `len` further steps (or until saturation).
fn orbit<M: SelfMap + ?Sized>(map: &M, z: CPoint, len: usize) -> Vec<OrbitPoint> {
    let mut pts = Vec::with_capacity(len + 1);
    let mut p = OrbitPoint::Plane(z);
    pts.push(p);
    for _ in 0..len {
        p = step(map, p);
        pts.push(p);
        if p.is_saturated() {
            break;
        }
    }
    pts
}

fn check_seed<M: SelfMap + ?Sized>(map: &M, z: CPoint) -> Result<()> {
    map.check_orbit_preconditions()?;
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::DomainError);
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidParameter("non-finite seed".into()));
    }
    Ok(())
}

/// Whether the `I` condition holds at step `n`, given iterates `pts`.
///
/// Steps at or past saturation, and steps whose `f^{n+2}` lies past
/// saturation, count as satisfied.
fn i_condition(pts: &[OrbitPoint], n: usize) -> bool {
    let Some(p) = pts.get(n) else {
        return true;
    };
    if p.is_saturated() {
        return true;
    }
    if conditions_at(n, p.log_modulus()).any() {
        return true;
    }
    match pts.get(n + 2) {
        Some(q) => q.is_saturated() || q.re_at_least(2.0),
        None => true,
    }
}

/// Runs `budget` steps of the orbit of `z` and classifies it.
pub fn classify_orbit<M: SelfMap + ?Sized>(
    map: &M,
    z: CPoint,
    budget: usize,
    horizon: usize,
) -> Result<OrbitRecord> {
    check_seed(map, z)?;
    if budget < horizon + 2 {
        return Err(Error::InvalidParameter(format!(
            "budget {budget} must be at least horizon + 2 = {}",
            horizon + 2
        )));
    }
    let pts = orbit(map, z, budget);
    let saturated_at = pts.iter().position(|p| p.is_saturated());

    let steps: Vec<OrbitStep> = pts
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let lm = p.log_modulus();
            let mut c = conditions_at(n, lm);
            if let Some(p) = p.is_saturated().then_some(p) {
                if let OrbitPoint::Saturated { toward_infinity } = p {
                    c.big = *toward_infinity;
                    c.small = !*toward_infinity;
                }
            }
            c.h2 = n > 0 && pts.get(n + 2).is_some_and(|q| q.re_at_least(2.0));
            OrbitStep {
                log_modulus: lm,
                conditions: c,
            }
        })
        .collect();

    let first_h_entry = pts.iter().position(|p| p.re_at_least(2.0));
    let absorbed = first_h_entry.is_some_and(|k| pts[k..].iter().all(|p| p.re_at_least(2.0)));
    let in_i_horizon = (1..=horizon).all(|n| i_condition(&pts, n));
    let escaped = saturated_at.is_some()
        || pts.last().is_some_and(|p| p.log_modulus().abs() > LOG_RANGE);

    let classification = if absorbed {
        Classification::Absorbed
    } else if escaped {
        Classification::EscapingUnclassified
    } else if in_i_horizon {
        Classification::InIHorizon
    } else {
        Classification::BoundedOrUnknown
    };

    Ok(OrbitRecord {
        budget_used: pts.len() - 1,
        steps,
        first_h_entry,
        classification,
        horizon,
        in_i_horizon,
        saturated_at,
    })
}

/// Least `n ≤ budget` with `Re f^n(z) ≥ 2`.
pub fn first_entry_time<M: SelfMap + ?Sized>(
    map: &M,
    z: CPoint,
    budget: usize,
) -> Result<Option<usize>> {
    check_seed(map, z)?;
    let mut p = OrbitPoint::Plane(z);
    for n in 0..=budget {
        if p.re_at_least(2.0) {
            return Ok(Some(n));
        }
        if p.is_saturated() {
            return Ok(None);
        }
        if n < budget {
            p = step(map, p);
        }
    }
    Ok(None)
}

/// Membership of `z` in the finite-horizon approximation `I_N` of `I`.
///
/// Iterates at most `horizon + 2` steps and returns early on the first failing step.
pub fn in_i_horizon<M: SelfMap + ?Sized>(map: &M, z: CPoint, horizon: usize) -> Result<bool> {
    check_seed(map, z)?;
    let pts = orbit(map, z, horizon + 2);
    Ok((1..=horizon).all(|n| i_condition(&pts, n)))
}

/// Log-safe iterates `f^0(z) ..= f^len(z)`, truncated after saturation.
pub fn iterates<M: SelfMap + ?Sized>(map: &M, z: CPoint, len: usize) -> Vec<OrbitPoint> {
    orbit(map, z, len)
}

/// Cartesian form of an orbit point, when representable.
pub fn as_cpoint(p: &OrbitPoint) -> Option<CPoint> {
    match p {
        OrbitPoint::Plane(z) => Some(*z),
        OrbitPoint::Log(lp) => {
            let z = lp.to_cpoint();
            (z.re.is_finite() && z.im.is_finite() && z != Complex64::new(0.0, 0.0)).then_some(z)
        }
        OrbitPoint::Saturated { .. } => None,
    }
}
