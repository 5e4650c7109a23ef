//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cstar::complex_map::{eval, fixed_points_negative_axis};
use cstar::curves::{relative_hausdorff_to_a_n, trace_preimage_rplus, unit_circle_min_gap, Resolution, TraceWindow};
use cstar::fixtures::{circles, plane_squares_web, random_mask, random_web};
use cstar::grid::GridSpec;
use cstar::orbit::{first_entry_time, iterates};
use cstar::render::{rasterize_i, render, Layer, RenderOptions};
use cstar::topology::{
    components, exp_lift, exp_project, is_cstar_spiders_web, is_plane_spiders_web, separates, web_condition_components,
    web_condition_separation, web_condition_witness, Part,
};
use cstar::verify::{find_channel_radius, forward_orbit, shadow_orbit, verify_growth, verify_halfline, BoxChain, SHADOW_TOLERANCE};
use cstar::{CPoint, MapParams};

type Outcome = Result<String, String>;

fn p(lambda: f64) -> MapParams {
    MapParams::new(lambda).expect("valid lambda")
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let t = start.elapsed();
    if t < limit {
        Ok(format!("{detail}; {:.2}s", t.as_secs_f64()))
    } else {
        Err(format!("{detail}; took {:.2}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
    }
}

fn growth() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for l in [2.0, 32.0] {
        let r = verify_growth(&p(l), 60.0, 60.0, 1_000_000).map_err(|e| e.to_string())?;
        let min_ratio = r.worst_margin + 0.7;
        if r.samples < 1_000_000 || !(min_ratio >= 0.7) {
            return Err(format!("lambda={l}: min Re f/(λ Re z) = {min_ratio} at {}", r.worst_location));
        }
        parts.push(format!("λ={l}: min ratio {min_ratio:.6} at {}", r.worst_location));
    }
    within(Duration::from_secs(10), start, parts.join(", "))
}

fn absorption() -> Outcome {
    let params = p(32.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut max_steps_checked = 0;
    for i in 0..100_000 {
        // Re z log-uniform in [2, 1e6], Im z uniform in [−1e3, 1e3]
        let x = 2.0 * (rng.gen::<f64>() * (5e5f64).ln()).exp();
        let y = rng.gen_range(-1e3..1e3);
        let z = CPoint::new(x, y);
        let w = eval(&params, z).map_err(|e| format!("sample {i} at {z}: {e}"))?;
        if w.re < 2.0 {
            return Err(format!("f({z}) = {w} leaves H"));
        }
        if first_entry_time(&params, z, 50).map_err(|e| e.to_string())? != Some(0) {
            return Err(format!("first_entry_time({z}) != 0"));
        }
        let orbit = iterates(&params, z, 51);
        if orbit.len() < 51 {
            return Err(format!("orbit of {z} stopped after {} points", orbit.len()));
        }
        if let Some(k) = orbit.iter().position(|q| !q.re_at_least(2.0)) {
            return Err(format!("orbit of {z} leaves H at step {k}"));
        }
        max_steps_checked = max_steps_checked.max(orbit.len() - 1);
    }
    Ok(format!("100000 samples stay in H for {max_steps_checked} steps"))
}

fn unit_circle() -> Outcome {
    let (gap, theta) = unit_circle_min_gap(100_000);
    if gap > 0.0 {
        Ok(format!("min gap to nπ {gap:.6e} at θ = {theta:.6}"))
    } else {
        Err(format!("gap {gap} at θ = {theta}"))
    }
}

fn near_zero_circles() -> Outcome {
    let params = p(32.0);
    let mut dists = Vec::new();
    for n in [10i64, 15, 20, 25] {
        let q = 1.0 / (2.0 * n as f64 * PI);
        let window = TraceWindow::Polar {
            ln_r_min: (q / 20.0).ln(),
            ln_r_max: (3.0 * q).ln(),
            theta_min: 1e-3,
            theta_max: PI - 1e-3,
        };
        let res = Resolution::new(400, (8 * n * n) as usize).skipping();
        let traced = trace_preimage_rplus(&params, &window, &res).map_err(|e| e.to_string())?;
        // the branch tangent to the real axis at 0 carries the even index next to n
        let k = 2 * (n / 2);
        let branch: Vec<_> = traced.curves.into_iter().filter(|c| c.branch == Some(k)).collect();
        let d = relative_hausdorff_to_a_n(&branch, k, 4096).map_err(|e| format!("n={n}: {e}"))?;
        dists.push((n, d));
    }
    let detail = dists.iter().map(|(n, d)| format!("n={n}: {d:.4}")).collect::<Vec<_>>().join(", ");
    let monotone = dists.windows(2).all(|w| w[1].1 < w[0].1);
    let last = dists.last().map(|x| x.1).unwrap_or(f64::INFINITY);
    if monotone && last < 0.15 {
        Ok(format!("relative Hausdorff distance {detail}"))
    } else {
        Err(format!("relative Hausdorff distance {detail}"))
    }
}

fn channels() -> Outcome {
    let start = Instant::now();
    let rep = find_channel_radius(&p(32.0), 2.0, 4.0, 10_000, 1024.0).map_err(|e| e.to_string())?;
    let detail = rep
        .cases
        .iter()
        .map(|c| {
            format!(
                "{} pointwise {:.3} pair {:.3}",
                c.lemma,
                c.details["pointwise_margin"].as_f64().unwrap_or(f64::NAN),
                c.details["pair_margin"].as_f64().unwrap_or(f64::NAN)
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    let detail = format!("R = {}: {detail}", rep.r);
    if !rep.pass {
        return Err(detail);
    }
    within(Duration::from_secs(30), start, detail)
}

fn desk_scale_web() -> Outcome {
    let start = Instant::now();
    let params = p(32.0);
    let grid = GridSpec::log_polar((-4.0, 4.0), 2048, 2048).map_err(|e| e.to_string())?;
    let set = rasterize_i(&params, &grid, 12, RenderOptions::default()).map_err(|e| e.to_string())?;
    let lab = components(&set, Part::Complement);
    let touching = (0..lab.count as u32).filter(|&l| lab.touches_boundary(l)).count();
    let fp = -0.4545;
    let cell = grid.cell_of(CPoint::new(fp, 0.0)).ok_or("fixed point outside the annulus")?;
    let sep = separates(&set, cell).map_err(|e| e.to_string())?;
    let detail = format!(
        "{} complement components, {touching} touch a ring; separates cell {cell:?} of {fp}: {sep}",
        lab.count
    );
    if touching != 0 || !sep {
        return Err(detail);
    }
    within(Duration::from_secs(300), start, detail)
}

fn lift_tests() -> Outcome {
    let squares = plane_squares_web(64).map_err(|e| e.to_string())?;
    let projected = exp_project(&squares).map_err(|e| e.to_string())?;
    let rep = is_cstar_spiders_web(&projected);
    if !rep.is_web {
        return Err("projected squares fail the C*-web check".into());
    }
    let web = circles(5, 128, true).map_err(|e| e.to_string())?;
    let lifted = exp_lift(&web, 3).map_err(|e| e.to_string())?;
    if !is_plane_spiders_web(&lifted).map_err(|e| e.to_string())? {
        return Err("lifted circles fail the plane web check".into());
    }
    for seed in 0..20 {
        let r = random_mask(seed, 64 + seed as usize, 24 + 2 * seed as usize, 0.5).map_err(|e| e.to_string())?;
        let periods = 1 + (seed as usize % 4);
        let back = exp_project(&exp_lift(&r, periods).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if back != r {
            return Err(format!("round trip differs for seed {seed}"));
        }
    }
    Ok(format!(
        "squares project to a C*-web ({} rings), lifted circles pass the plane check, 20 round trips exact",
        rep.rings.len()
    ))
}

fn equivalence() -> Outcome {
    let mut webs = 0;
    for seed in 0..50 {
        let r = random_web(seed).map_err(|e| e.to_string())?;
        let (a, b, c) = (
            web_condition_witness(&r),
            web_condition_components(&r),
            web_condition_separation(&r),
        );
        if a != b || b != c {
            return Err(format!("seed {seed}: witness {a}, components {b}, separation {c}"));
        }
        webs += usize::from(a);
    }
    Ok(format!("50 fixtures agree ({webs} webs, {} non-webs)", 50 - webs))
}

fn shadowing() -> Outcome {
    let params = p(32.0);
    let fp = fixed_points_negative_axis(&params)[0];
    let chain = BoxChain::constant(CPoint::new(fp, 0.0), 0.01, 12).map_err(|e| e.to_string())?;
    let z = shadow_orbit(&params, &chain, 40).map_err(|e| e.to_string())?;
    let d_fp = (z - CPoint::new(fp, 0.0)).norm();
    if d_fp > 1e-6 {
        return Err(format!("constant chain returned {z}, {d_fp:e} from the fixed point {fp}"));
    }
    let chain = BoxChain::along_orbit(&params, CPoint::new(3.0, 0.0), 6, 0.2).map_err(|e| e.to_string())?;
    let z = shadow_orbit(&params, &chain, 40).map_err(|e| e.to_string())?;
    let orbit = forward_orbit(&params, z, 6).map_err(|e| e.to_string())?;
    let inside = orbit.iter().zip(&chain.boxes).all(|(w, b)| b.contains_inflated(*w, SHADOW_TOLERANCE));
    let d3 = (z - CPoint::new(3.0, 0.0)).norm();
    let detail = format!("fixed point {fp:.10}: |z − p| = {d_fp:.1e}; orbit chain: |z − 3| = {d3:.1e}, iterates inside: {inside}");
    if d3 <= 1e-3 && inside {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn halfline() -> Outcome {
    let r = verify_halfline(&p(32.0), 5, 50).map_err(|e| e.to_string())?;
    let worst_offset = r
        .details
        .as_array()
        .map(|rows| rows.iter().filter_map(|x| x["offset"].as_f64()).fold(0.0f64, |a, b| a.max(b.abs())))
        .unwrap_or(f64::NAN);
    let min_re = r
        .details
        .as_array()
        .map(|rows| rows.iter().filter_map(|x| x["min_re_minus_2"].as_f64()).fold(f64::INFINITY, f64::min))
        .unwrap_or(f64::NAN);
    let detail = format!("min Re f − 2 = {min_re:.3}, max |crossing offset| = {worst_offset:.4}");
    if r.pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn determinism() -> Outcome {
    let params = p(32.0);
    let grids = [
        GridSpec::cartesian((-6.0, 6.0), (-6.0, 6.0), 512, 512),
        GridSpec::cartesian((-3.5, 0.5), (-2.0, 2.0), 300, 301),
        GridSpec::log_polar((-4.0, 4.0), 384, 256),
    ];
    let mut count = 0;
    for g in grids {
        let g = g.map_err(|e| e.to_string())?;
        for layer in [Layer::HEntryTime, Layer::IComplement] {
            let imgs: Vec<_> = [1, 4, 16]
                .iter()
                .map(|&threads| {
                    render(&params, &g, 50, 12, layer, RenderOptions { threads, tile_rows: 8 })
                        .map(|i| i.to_ppm())
                        .map_err(|e| e.to_string())
                })
                .collect::<Result<_, _>>()?;
            if imgs.windows(2).any(|w| w[0] != w[1]) {
                return Err(format!("{layer:?} on {:?} differs across thread counts", g.window));
            }
            count += 1;
        }
    }
    Ok(format!("{count} renders byte-identical at 1, 4 and 16 threads"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("growth bound", growth),
        ("absorption in H", absorption),
        ("unit-circle uniqueness", unit_circle),
        ("near-zero circles", near_zero_circles),
        ("channels", channels),
        ("desk-scale escaping-set web", desk_scale_web),
        ("lift and projection", lift_tests),
        ("raster web equivalence", equivalence),
        ("shadowing", shadowing),
        ("half-line estimate", halfline),
        ("render determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(d) => println!("PASS {:>2} {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
