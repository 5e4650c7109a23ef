//! Sign-bracketing and bisection for real functions of one variable.

/// Bisects `f` on `[a, b]`, which must bracket a sign change.
///
/// Stops when the bracket is narrower than `tol` (absolute) or no longer
/// shrinks in floating point. Returns the midpoint of the final bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if f(b) == 0.0 {
        return b;
    }
    loop {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
}

/// Brackets of sign changes of `f` found by sampling `samples + 1`
/// log-spaced points in `[lo, hi]` (`0 < lo < hi`).
pub fn log_scan_brackets<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Vec<(f64, f64)> {
    assert!(lo > 0.0 && hi > lo && samples > 0);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let at = |k: usize| {
        if k == samples {
            hi
        } else {
            (llo + (lhi - llo) * k as f64 / samples as f64).exp()
        }
    };
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0);
    for k in 1..=samples {
        let x1 = at(k);
        let f1 = f(x1);
        if f0 == 0.0 {
            out.push((x0, x0));
        } else if f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        out.push((x0, x0));
    }
    out
}

/// All roots of `f` on `[lo, hi]` visible as sign changes on a log-spaced scan,
/// each refined by bisection to `tol`.
pub fn log_scan_roots<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    samples: usize,
    tol: f64,
) -> Vec<f64> {
    log_scan_brackets(&f, lo, hi, samples)
        .into_iter()
        .map(|(a, b)| if a == b { a } else { bisect(&f, a, b, tol) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn scan_finds_both_roots() {
        // e^t - 4t has roots near 0.357 and 2.153
        let roots = log_scan_roots(|t| t.exp() - 4.0 * t, 1e-3, 10.0, 200, 1e-13);
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!((r.exp() - 4.0 * r).abs() < 1e-11);
        }
    }

    #[test]
    fn scan_without_sign_change_is_empty() {
        assert!(log_scan_brackets(|t| t.exp(), 1e-3, 10.0, 50).is_empty());
    }
}
