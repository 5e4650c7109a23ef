//! `cstar`: render, trace, verify and topology runs for `f_λ(z) = λ z exp(e^{-z}/z)`.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cstar::curves::{
    approx_a_n, approx_a_n_prime, default_residual, to_csv, trace_barrier, trace_preimage_rplus, Ambiguity, Resolution, TraceResult,
    TraceWindow,
};
use cstar::fixtures::{fixture, Fixture, FixtureParams};
use cstar::grid::GridSpec;
use cstar::render::{rasterize_i, render, Layer, RenderOptions};
use cstar::topology::{
    components, exp_lift, exp_project, is_cstar_spiders_web, is_plane_spiders_web, separates, web_condition_components,
    web_condition_separation, web_condition_witness, Part, RasterSet,
};
use cstar::verify::{find_channel_radius, forward_orbit, shadow_orbit, verify_channels, verify_growth, verify_halfline};
use cstar::{CPoint, Error as CoreError, MapParams};

use config::{parse_list, pick, threads_from_env, FileConfig, DEFAULT_BUDGET, DEFAULT_HORIZON, DEFAULT_LAMBDA, DEFAULT_PX};
use output::Outputs;

#[derive(Parser, Debug)]
#[command(name = "cstar", version, about = "Dynamics of f(z) = λ z exp(e^{-z}/z) on the punctured plane")]
struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts and manifest.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render an escape-time or escaping-set image.
    Render(RenderArgs),
    /// Trace curves to CSV.
    Trace(TraceArgs),
    /// Sampled verification of the growth, half-line, channel and shadowing estimates.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Raster topology checks.
    #[command(subcommand)]
    Topo(TopoCmd),
}

#[derive(Args, Debug, Clone)]
struct MapArgs {
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Cartesian window `x_min,x_max,y_min,y_max`.
    #[arg(long, value_parser = parse_list::<4>, allow_hyphen_values = true, conflicts_with = "logpolar")]
    window: Option<[f64; 4]>,
    /// Log-polar annulus `log10_min,log10_max`.
    #[arg(long, value_parser = parse_list::<2>, allow_hyphen_values = true)]
    logpolar: Option<[f64; 2]>,
    /// Width in pixels.
    #[arg(long)]
    px: Option<usize>,
    /// Height in pixels; defaults to the width.
    #[arg(long)]
    py: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum LayerArg {
    HEntry,
    IComplement,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    map: MapArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "h-entry")]
    layer: LayerArg,
    /// Iteration budget for the entry-time layer.
    #[arg(long)]
    budget: Option<usize>,
    /// Horizon `N` of the escaping-set approximation.
    #[arg(long)]
    horizon: Option<usize>,
    /// Also write the `I_N` complement as a PBM mask.
    #[arg(long)]
    pbm: bool,
    #[arg(long, default_value = "render.ppm")]
    output: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum CurveArg {
    Preimage,
    Barrier,
    AnPrime,
    AnCircle,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[arg(long, value_enum, default_value = "preimage")]
    kind: CurveArg,
    #[command(flatten)]
    map: MapArgs,
    /// Cartesian window `x_min,x_max,y_min,y_max`.
    #[arg(long, value_parser = parse_list::<4>, allow_hyphen_values = true, conflicts_with = "polar")]
    window: Option<[f64; 4]>,
    /// Polar window `ln_r_min,ln_r_max,theta_min,theta_max`.
    #[arg(long, value_parser = parse_list::<4>, allow_hyphen_values = true)]
    polar: Option<[f64; 4]>,
    /// Grid cells `nu,nv`.
    #[arg(long, value_parser = parse_list::<2>, default_value = "800,800")]
    res: [f64; 2],
    #[arg(long, default_value_t = 2)]
    edge_samples: usize,
    /// Count and skip ambiguous cells instead of failing.
    #[arg(long)]
    skip_ambiguous: bool,
    /// Branch index for `an-prime` and `an-circle`.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    n: i64,
    #[arg(long, default_value = "trace.csv")]
    output: String,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// `Re f ≥ 0.7 λ Re z` on `Re z ≥ 2`.
    Growth {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 60.0)]
        x_max: f64,
        #[arg(long, default_value_t = 60.0)]
        y_max: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
    /// Horizontal half-lines `y = 2nπ`.
    Halfline {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 5)]
        n_min: u32,
        #[arg(long, default_value_t = 50)]
        n_max: u32,
    },
    /// Channel blow-up and collapse bounds; `R` is searched by doubling when not given.
    Channels {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long = "R")]
        r: Option<f64>,
        #[arg(long = "L", default_value_t = 2.0)]
        l: f64,
        #[arg(long = "K", default_value_t = 4.0)]
        k: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Shadow a box chain by subdivision.
    Shadow {
        #[command(flatten)]
        map: MapArgs,
        /// `fixed-point-chain` or `orbit-chain`.
        #[arg(long, default_value = "orbit-chain")]
        chain: String,
        /// Chain length `N`.
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        depth: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct MaskArgs {
    /// Built-in fixture name.
    #[arg(long, conflicts_with = "mask")]
    fixture: Option<String>,
    /// PBM mask; its grid is given by --logpolar or --window.
    #[arg(long)]
    mask: Option<PathBuf>,
    #[arg(long, value_parser = parse_list::<2>, allow_hyphen_values = true)]
    logpolar: Option<[f64; 2]>,
    #[arg(long, value_parser = parse_list::<4>, allow_hyphen_values = true)]
    window: Option<[f64; 4]>,
    /// Fixture count parameter.
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Angular resolution of log-polar fixtures.
    #[arg(long, default_value_t = 128)]
    width: usize,
}

#[derive(Subcommand, Debug)]
enum TopoCmd {
    /// C*-spider's web check with witness.
    Websheck {
        #[command(flatten)]
        mask: MaskArgs,
        #[arg(long, default_value = "websheck.json")]
        output: String,
    },
    /// Lift a log-polar mask to a strip, or project a strip mask to the annulus.
    Lift {
        #[command(flatten)]
        mask: MaskArgs,
        #[arg(long, default_value_t = 3)]
        periods: usize,
        #[arg(long, default_value = "lift")]
        output: String,
    },
    /// Whether the rasterized escaping set separates a point from 0 and ∞.
    Separate {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = parse_list::<2>, allow_hyphen_values = true)]
        logpolar: Option<[f64; 2]>,
        #[arg(long)]
        px: Option<usize>,
        #[arg(long)]
        py: Option<usize>,
        #[arg(long)]
        horizon: Option<usize>,
        /// The point `x,y`; defaults to the fixed point on the negative axis nearest 0.
        #[arg(long, value_parser = parse_list::<2>, allow_hyphen_values = true)]
        point: Option<[f64; 2]>,
        #[arg(long, default_value = "separate")]
        output: String,
    },
}

/// Failure classes and their exit codes.
enum Failure {
    /// A check ran and did not pass.
    Check,
    /// Bad arguments or parameters.
    Usage(anyhow::Error),
    /// The computation could not be completed.
    Run(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<CoreError>() {
            Some(
                CoreError::InvalidParameter(_)
                | CoreError::UnknownFixture(_)
                | CoreError::GeometryMismatch(_)
                | CoreError::Format(_)
                | CoreError::DomainError,
            ) => Failure::Usage(e),
            _ if e.downcast_ref::<std::io::Error>().is_some() || e.downcast_ref::<CoreError>().is_some() => Failure::Run(e),
            _ => Failure::Usage(e),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        anyhow::Error::from(e).into()
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Ctx {
    file: FileConfig,
    out: PathBuf,
    threads: usize,
    argv: Vec<String>,
}

impl Ctx {
    fn outputs(&self, params: Value) -> Outputs {
        Outputs::new(self.out.clone(), self.argv.clone(), params)
    }

    fn params(&self, map: &MapArgs) -> Result<MapParams> {
        Ok(MapParams::new(pick(map.lambda, self.file.lambda, DEFAULT_LAMBDA))?)
    }

    fn grid(&self, g: &GridArgs) -> Result<GridSpec> {
        let px = pick(g.px, self.file.px, DEFAULT_PX);
        let py = g.py.or(self.file.py).unwrap_or(px);
        let (window, logpolar) = if g.window.is_some() || g.logpolar.is_some() {
            (g.window, g.logpolar)
        } else {
            (self.file.window, self.file.logpolar)
        };
        Ok(match (window, logpolar) {
            (Some(_), Some(_)) => bail!("give either a Cartesian window or a log-polar annulus, not both"),
            (_, Some([a, b])) => GridSpec::log_polar((a, b), px, py)?,
            (Some([a, b, c, d]), None) => GridSpec::cartesian((a, b), (c, d), px, py)?,
            (None, None) => GridSpec::cartesian((-6.0, 6.0), (-6.0, 6.0), px, py)?,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let code = match run(cli) {
        Ok(()) => 0,
        Err(Failure::Check) => 1,
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            1
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            eprintln!("usage: cstar [--config FILE] [--out DIR] <render|trace|verify|topo> ...  (see --help)");
            2
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Outcome {
    let file = FileConfig::load(cli.config.as_deref()).map_err(Failure::Usage)?;
    let threads = threads_from_env().map_err(Failure::Usage)?;
    let out = cli
        .out
        .clone()
        .or_else(|| file.out.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Run(anyhow!("thread pool: {e}")))?;
    let mut argv: Vec<String> = std::env::args().skip(1).collect();
    argv.insert(0, "cstar".into());
    let ctx = Ctx {
        file,
        out,
        threads,
        argv,
    };
    match cli.command {
        Command::Render(a) => cmd_render(&ctx, a),
        Command::Trace(a) => cmd_trace(&ctx, a),
        Command::Verify(v) => cmd_verify(&ctx, v),
        Command::Topo(t) => cmd_topo(&ctx, t),
    }
}

fn check(pass: bool) -> Outcome {
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_render(ctx: &Ctx, a: RenderArgs) -> Outcome {
    let params = ctx.params(&a.map)?;
    let grid = ctx.grid(&a.grid)?;
    let budget = pick(a.budget, ctx.file.budget, DEFAULT_BUDGET);
    let horizon = pick(a.horizon, ctx.file.horizon, DEFAULT_HORIZON);
    let layer = match a.layer {
        LayerArg::HEntry => Layer::HEntryTime,
        LayerArg::IComplement => Layer::IComplement,
    };
    let opts = RenderOptions {
        threads: ctx.threads,
        ..RenderOptions::default()
    };
    let img = render(&params, &grid, budget, horizon, layer, opts)?;
    let mut out = ctx.outputs(json!({
        "lambda": params.lambda(), "grid": grid, "layer": layer, "budget": budget, "horizon": horizon,
    }));
    out.write(&a.output, "PPM", &img.to_ppm())?;
    if a.pbm {
        let mask = rasterize_i(&params, &grid, horizon, opts)?.complement();
        out.write(&format!("{}.pbm", a.output.trim_end_matches(".ppm")), "PBM", &mask.to_pbm())?;
    }
    out.finish()?;
    Ok(())
}

fn trace_summary(r: &TraceResult) -> Value {
    json!({
        "curves": r.curves.len(),
        "ambiguous_cells": r.ambiguous_cells,
        "dropped_vertices": r.dropped_vertices,
        "branches": r.curves.iter().filter_map(|c| c.branch).collect::<std::collections::BTreeSet<_>>(),
    })
}

fn cmd_trace(ctx: &Ctx, a: TraceArgs) -> Outcome {
    let window = match (a.window, a.polar) {
        (_, Some([u0, u1, v0, v1])) => TraceWindow::Polar {
            ln_r_min: u0,
            ln_r_max: u1,
            theta_min: v0,
            theta_max: v1,
        },
        (Some([x0, x1, y0, y1]), None) => TraceWindow::Cartesian {
            x_min: x0,
            x_max: x1,
            y_min: y0,
            y_max: y1,
        },
        (None, None) => TraceWindow::Cartesian {
            x_min: -4.0,
            x_max: 4.0,
            y_min: -4.0,
            y_max: 4.0,
        },
    };
    let [nu, nv] = a.res;
    if nu < 1.0 || nv < 1.0 || nu.fract() != 0.0 || nv.fract() != 0.0 {
        return Err(Failure::Usage(anyhow!("--res needs two positive integers")));
    }
    let mut res = Resolution::new(nu as usize, nv as usize);
    res.edge_samples = a.edge_samples;
    if a.skip_ambiguous {
        res.on_ambiguous = Ambiguity::Skip;
    }
    let params = ctx.params(&a.map)?;
    let result = match a.kind {
        CurveArg::Preimage => trace_preimage_rplus(&params, &window, &res)?,
        CurveArg::Barrier => trace_barrier(&window, &res)?,
        CurveArg::AnPrime => approx_a_n_prime(a.n, &window, &res)?,
        CurveArg::AnCircle => TraceResult {
            curves: vec![approx_a_n(a.n, nu as usize)?],
            ambiguous_cells: 0,
            dropped_vertices: 0,
        },
    };
    let mut out = ctx.outputs(json!({
        "kind": format!("{:?}", a.kind), "lambda": params.lambda(), "window": window, "res": [nu, nv],
        "edge_samples": a.edge_samples, "skip_ambiguous": a.skip_ambiguous, "n": a.n,
    }));
    out.write(&a.output, "CSV", to_csv(&result.curves, default_residual).as_bytes())?;
    out.write_json(&format!("{}.json", a.output.trim_end_matches(".csv")), &trace_summary(&result))?;
    out.finish()?;
    Ok(())
}

fn cmd_verify(ctx: &Ctx, v: VerifyCmd) -> Outcome {
    match v {
        VerifyCmd::Growth {
            map,
            x_max,
            y_max,
            samples,
        } => {
            let params = ctx.params(&map)?;
            let rep = verify_growth(&params, x_max, y_max, samples)?;
            let mut out = ctx.outputs(rep.params.clone());
            out.write_json("verify-growth.json", &rep)?;
            out.finish()?;
            check(rep.pass)
        }
        VerifyCmd::Halfline { map, n_min, n_max } => {
            let params = ctx.params(&map)?;
            let rep = verify_halfline(&params, n_min, n_max)?;
            let mut out = ctx.outputs(rep.params.clone());
            out.write_json("verify-halfline.json", &rep)?;
            out.finish()?;
            check(rep.pass)
        }
        VerifyCmd::Channels { map, r, l, k, samples } => {
            let params = ctx.params(&map)?;
            let rep = match r {
                Some(r) => verify_channels(&params, r, l, k, samples)?,
                None => find_channel_radius(&params, l, k, samples, 1024.0)?,
            };
            let mut out = ctx.outputs(json!({"lambda": params.lambda(), "R": rep.r, "L": l, "K": k, "samples": samples}));
            out.write_json("verify-channels.json", &rep)?;
            out.finish()?;
            check(rep.pass)
        }
        VerifyCmd::Shadow { map, chain, n, depth } => {
            let params = ctx.params(&map)?;
            let fp = FixtureParams {
                n,
                lambda: params.lambda(),
                ..FixtureParams::default()
            };
            let Fixture::Chain(boxes) = fixture(&chain, &fp)? else {
                return Err(Failure::Usage(anyhow!("{chain} is not a box chain")));
            };
            let covering = boxes.check_covering(&params, 64);
            let found = shadow_orbit(&params, &boxes, depth);
            let (z, orbit, verified) = match &found {
                Ok(z) => {
                    let orbit = forward_orbit(&params, *z, n)?;
                    let ok = orbit
                        .iter()
                        .zip(&boxes.boxes)
                        .all(|(w, b)| b.contains_inflated(*w, cstar::verify::SHADOW_TOLERANCE));
                    (Some(*z), orbit, ok)
                }
                Err(_) => (None, Vec::new(), false),
            };
            let report = json!({
                "chain": chain, "boxes": boxes, "covering": covering, "z": z, "orbit": orbit,
                "verified": verified, "error": found.as_ref().err().map(|e| e.to_string()),
            });
            let mut out = ctx.outputs(json!({"lambda": params.lambda(), "chain": chain, "n": n, "depth": depth}));
            out.write_json("verify-shadow.json", &report)?;
            out.finish()?;
            check(verified)
        }
    }
}

/// The mask named by `--fixture` or read from `--mask`, with the parameters that produced it.
fn load_mask(ctx: &Ctx, m: &MaskArgs) -> Result<(RasterSet, Value)> {
    let seed = pick(m.seed, ctx.file.seed, 0);
    match (&m.fixture, &m.mask) {
        (Some(name), _) => {
            let p = FixtureParams {
                n: m.n,
                seed,
                width: m.width,
                ..FixtureParams::default()
            };
            match fixture(name, &p)? {
                Fixture::Raster(r) => Ok((r, json!({"fixture": name, "n": m.n, "seed": seed, "width": m.width}))),
                Fixture::Chain(_) => bail!(CoreError::InvalidParameter(format!("{name} is not a raster fixture"))),
            }
        }
        (None, Some(path)) => {
            let bytes = std::fs::read(path)?;
            let (w, h, _) = cstar::pnm::decode_pbm(&bytes)?;
            let grid = match (m.logpolar, m.window) {
                (Some([a, b]), None) => GridSpec::log_polar((a, b), w, h)?,
                (None, Some([a, b, c, d])) => GridSpec::cartesian((a, b), (c, d), w, h)?,
                _ => bail!(CoreError::InvalidParameter("a PBM mask needs exactly one of --logpolar or --window".into())),
            };
            Ok((
                RasterSet::from_pbm(grid, &bytes)?,
                json!({"mask": path, "grid": grid}),
            ))
        }
        (None, None) => bail!(CoreError::InvalidParameter("give --fixture or --mask".into())),
    }
}

fn cmd_topo(ctx: &Ctx, t: TopoCmd) -> Outcome {
    match t {
        TopoCmd::Websheck { mask, output } => {
            let (r, src) = load_mask(ctx, &mask)?;
            if !r.grid.is_log_polar() {
                return Err(Failure::Usage(anyhow!("the C*-web check needs a log-polar mask")));
            }
            let rep = is_cstar_spiders_web(&r);
            let conditions = json!({
                "witness": web_condition_witness(&r),
                "components": web_condition_components(&r),
                "separation": web_condition_separation(&r),
            });
            let mut out = ctx.outputs(src);
            out.write_json(&output, &json!({"report": rep, "conditions": conditions}))?;
            out.finish()?;
            check(rep.is_web)
        }
        TopoCmd::Lift { mask, periods, output } => {
            let (r, src) = load_mask(ctx, &mask)?;
            let mut out = ctx.outputs(json!({"source": src, "periods": periods}));
            let pass = if r.grid.is_log_polar() {
                let strip = exp_lift(&r, periods)?;
                let web = is_plane_spiders_web(&strip)?;
                out.write(&format!("{output}.pbm"), "PBM", &strip.to_pbm())?;
                out.write_json(&format!("{output}.json"), &json!({"direction": "lift", "strip_grid": strip.grid, "plane_web": web}))?;
                web
            } else {
                let proj = exp_project(&r)?;
                let rep = is_cstar_spiders_web(&proj);
                out.write(&format!("{output}.pbm"), "PBM", &proj.to_pbm())?;
                out.write_json(&format!("{output}.json"), &json!({"direction": "project", "annulus_grid": proj.grid, "report": rep}))?;
                rep.is_web
            };
            out.finish()?;
            check(pass)
        }
        TopoCmd::Separate {
            map,
            logpolar,
            px,
            py,
            horizon,
            point,
            output,
        } => {
            let params = ctx.params(&map)?;
            let [a, b] = logpolar.or(ctx.file.logpolar).unwrap_or([-4.0, 4.0]);
            let w = pick(px, ctx.file.px, DEFAULT_PX);
            let h = py.or(ctx.file.py).unwrap_or(w);
            let grid = GridSpec::log_polar((a, b), w, h)?;
            let horizon = pick(horizon, ctx.file.horizon, DEFAULT_HORIZON);
            let p = match point {
                Some([x, y]) => CPoint::new(x, y),
                None => CPoint::new(
                    *cstar::complex_map::fixed_points_negative_axis(&params)
                        .first()
                        .ok_or(CoreError::NoPointFound)?,
                    0.0,
                ),
            };
            let cell = grid
                .cell_of(p)
                .ok_or_else(|| CoreError::InvalidParameter(format!("point {p} is outside the annulus")))?;
            let opts = RenderOptions {
                threads: ctx.threads,
                ..RenderOptions::default()
            };
            let set = rasterize_i(&params, &grid, horizon, opts)?;
            let sep = separates(&set, cell)?;
            let lab = components(&set, Part::Complement);
            let avoid = (0..lab.count as u32).all(|l| !lab.touches_boundary(l));
            let mut out = ctx.outputs(json!({"lambda": params.lambda(), "grid": grid, "horizon": horizon, "point": [p.re, p.im]}));
            out.write(&format!("{output}.pbm"), "PBM", &set.to_pbm())?;
            out.write_json(
                &format!("{output}.json"),
                &json!({
                    "point": [p.re, p.im], "cell": [cell.0, cell.1], "separates": sep,
                    "complement_components": lab.count, "all_components_avoid_rings": avoid,
                }),
            )?;
            out.finish()?;
            check(sep)
        }
    }
}
