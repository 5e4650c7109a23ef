use std::f64::consts::PI;

use cstar::curves::*;
use cstar::MapParams;

fn p32() -> MapParams {
    MapParams::new(32.0).unwrap()
}

fn cart(x: (f64, f64), y: (f64, f64)) -> TraceWindow {
    TraceWindow::Cartesian {
        x_min: x.0,
        x_max: x.1,
        y_min: y.0,
        y_max: y.1,
    }
}

fn a_n_branch(n: i64) -> (i64, Vec<CurvePolyline>) {
    let p = 1.0 / (2.0 * n as f64 * PI);
    let w = TraceWindow::Polar {
        ln_r_min: (p / 20.0).ln(),
        ln_r_max: (3.0 * p).ln(),
        theta_min: 1e-3,
        theta_max: PI - 1e-3,
    };
    // the angular step must shrink like 1/n² to resolve the crowding near 0
    let res = Resolution::new(400, (8 * n * n) as usize).skipping();
    let k = 2 * (n / 2);
    let r = trace_preimage_rplus(&p32(), &w, &res).unwrap();
    (k, r.curves.into_iter().filter(|c| c.branch == Some(k)).collect())
}

#[test]
fn preimage_branches_approach_circles_near_zero() {
    let mut prev = f64::INFINITY;
    for n in [10, 15, 20, 25] {
        let (k, branch) = a_n_branch(n);
        assert!(!branch.is_empty(), "no branch {k}");
        let d = relative_hausdorff_to_a_n(&branch, k, 4096).unwrap();
        assert!(d < prev, "n={n}: {d} >= {prev}");
        prev = d;
    }
    assert!(prev < 0.15);
}

#[test]
fn preimages_never_cross_the_barrier() {
    for (w, res) in [
        (cart((-2.0, 2.0), (-2.0, 2.0)), Resolution::new(512, 512).skipping()),
        (cart((-8.0, 4.0), (-6.0, 6.0)), Resolution::new(600, 600).skipping()),
        (cart((-12.0, -8.0), (3.0, 4.0)), Resolution::new(800, 200).skipping()),
    ] {
        let r = trace_preimage_rplus(&p32(), &w, &res).unwrap();
        assert!(!r.curves.is_empty());
        for c in &r.curves {
            let x = barrier_crossings(c);
            assert!(x.is_empty(), "{:?} crosses the barrier at {:?}", c.branch, x);
        }
    }
}

#[test]
fn preimages_meet_the_unit_circle_only_on_the_real_axis() {
    let r = trace_preimage_rplus(&p32(), &cart((-2.0, 2.0), (-2.0, 2.0)), &Resolution::new(2048, 2048).skipping()).unwrap();
    let hits: Vec<_> = r.curves.iter().flat_map(unit_circle_crossings).collect();
    assert!(!hits.is_empty());
    for z in hits {
        assert!(z.im.abs() < 1e-6 && z.re > 0.0, "crossing at {z}");
    }
}

#[test]
fn traced_branches_stay_in_their_strip() {
    let r = trace_preimage_rplus(&p32(), &cart((-40.0, 0.0), (0.01, 10.0)), &Resolution::new(800, 200).skipping()).unwrap();
    assert!(!r.curves.is_empty());
    for c in &r.curves {
        assert!(c.imaginary_spread() < 2.0 * PI + 1.0, "{:?} spreads {}", c.branch, c.imaginary_spread());
    }
}

#[test]
fn traced_barrier_matches_bisection() {
    let r = trace_barrier(&cart((-51.0, -49.0), (0.5, 10.5)), &Resolution::new(100, 500)).unwrap();
    let mut seen = Vec::new();
    for c in &r.curves {
        let m = c.branch.unwrap();
        seen.push(m);
        for z in &c.points {
            assert!((z.im - barrier_crossing(z.re, m)).abs() < 1e-8, "m={m} at {z}");
        }
    }
    seen.sort();
    assert_eq!(seen, vec![1, 2, 3]);
}

#[test]
fn traced_a_n_prime_matches_tip_and_heights() {
    let n = 100;
    let tip = a_n_prime_tip(n);
    let r = approx_a_n_prime(n, &cart((-12.0, -5.0), (0.0, PI)), &Resolution::new(700, 300).skipping()).unwrap();
    let right = r
        .curves
        .iter()
        .filter_map(CurvePolyline::rightmost)
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((right - tip).abs() < 0.02, "tip {tip}, traced {right}");

    let r = approx_a_n_prime(n, &cart((-31.0, -29.0), (2.0, 7.5)), &Resolution::new(40, 550)).unwrap();
    for c in &r.curves {
        for z in &c.points {
            let m = (z.im / PI).round() as i64;
            assert!((z.im - a_n_prime_height(n, z.re, m)).abs() < 1e-8, "at {z}");
        }
    }
}
