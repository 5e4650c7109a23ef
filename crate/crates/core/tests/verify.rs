use cstar::complex_map::fixed_points_negative_axis;
use cstar::verify::*;
use cstar::{CPoint, MapParams};

fn p(l: f64) -> MapParams {
    MapParams::new(l).unwrap()
}

#[test]
fn growth_holds_for_a_range_of_lambda() {
    for l in [2.0, 4.0, 8.0, 16.0, 32.0] {
        let r = verify_growth(&p(l), 60.0, 60.0, 250_000).unwrap();
        assert!(r.pass, "lambda={l}: {}", r.worst_margin);
    }
}

#[test]
fn margins_are_bit_reproducible() {
    let a = verify_growth(&p(32.0), 40.0, 30.0, 40_000).unwrap();
    let b = verify_growth(&p(32.0), 40.0, 30.0, 40_000).unwrap();
    assert_eq!(a.worst_margin.to_bits(), b.worst_margin.to_bits());
    let c = verify_channels(&p(32.0), 8.0, 2.0, 4.0, 900).unwrap();
    let d = verify_channels(&p(32.0), 8.0, 2.0, 4.0, 900).unwrap();
    assert_eq!(c, d);
}

#[test]
fn report_json_has_the_documented_keys() {
    let r = verify_halfline(&p(32.0), 5, 8).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for key in ["lemma", "params", "samples", "worst_margin", "worst_location", "pass"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["pass"], serde_json::Value::Bool(r.worst_margin >= 0.0));
}

#[test]
fn halfline_crossings_approach_the_prediction() {
    let r = verify_halfline(&p(32.0), 5, 50).unwrap();
    assert!(r.pass);
    let offsets: Vec<f64> = r.details.as_array().unwrap().iter().map(|x| x["offset"].as_f64().unwrap().abs()).collect();
    assert!(offsets.last().unwrap() < offsets.first().unwrap());
}

#[test]
fn small_n_scan_reports_first_passing_n() {
    let r = verify_halfline(&p(32.0), 1, 4).unwrap();
    let rows = r.details.as_array().unwrap();
    // no sign change of Im f at n = 1; from n = 2 on the crossing is inside the band
    assert!(rows[0]["crossing"].is_null());
    assert!(rows[1..].iter().all(|x| x["offset"].as_f64().unwrap().abs() < 0.5));
    assert!(!r.pass);
}

#[test]
fn channel_radius_search_and_parity() {
    let rep = find_channel_radius(&p(32.0), 2.0, 4.0, 2_500, 1024.0).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.cases.len(), 4);
    assert!(rep.swapped_parity.iter().all(|c| !c.pass));
    assert!(matches!(verify_channels(&p(8.0), 4.0, 2.0, 4.0, 100), Err(cstar::Error::InvalidParameter(_))));
    assert!(matches!(verify_channels(&p(32.0), 4.0, 2.0, 4.0, 0), Err(cstar::Error::EmptyChannelSample)));
}

#[test]
fn shadowing_results_verified_by_iteration() {
    let params = p(32.0);
    let fp = fixed_points_negative_axis(&params)[0];
    for chain in [
        BoxChain::constant(CPoint::new(fp, 0.0), 0.01, 12).unwrap(),
        BoxChain::along_orbit(&params, CPoint::new(3.0, 0.0), 6, 0.2).unwrap(),
        BoxChain::along_orbit(&params, CPoint::new(2.5, 0.7), 4, 0.1).unwrap(),
    ] {
        let z = shadow_orbit(&params, &chain, 40).unwrap();
        let orbit = forward_orbit(&params, z, chain.boxes.len() - 1).unwrap();
        for (w, b) in orbit.iter().zip(&chain.boxes) {
            assert!(b.contains_inflated(*w, SHADOW_TOLERANCE));
        }
    }
}

#[test]
fn fixed_point_chain_covers_itself() {
    let params = p(32.0);
    let fp = fixed_points_negative_axis(&params)[0];
    let chain = BoxChain::constant(CPoint::new(fp, 0.0), 0.01, 3).unwrap();
    assert_eq!(chain.check_covering(&params, 64), vec![true; 3]);
}
