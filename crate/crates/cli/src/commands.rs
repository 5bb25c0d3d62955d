//! One function per subcommand. Each returns the JSON summary after queuing
//! its CSV and body artifacts on the [`Output`].

use clap::{Args, ValueEnum};
use log::{info, warn};
use serde_json::{json, Value};

use santalo_core::bodies::BodyKind;
use santalo_core::duality::{polar, polar_volume, santalo_point, volume_product, ProductReport};
use santalo_core::exact::{affine_regular, exact_volume_product, format_rational, ExactPolygon, QPoint};
use santalo_core::experiments::{
    convexity_profile_with, ellipsoid_test, local_max_probe, symmetrization_flow_with, theorem2_certificate,
    ConvexityCheck, FlowOptions, ProbeFamily, Profile,
};
use santalo_core::io::body_to_json;
use santalo_core::symmetrization::{steiner_snapshot, steiner_symmetral};
use santalo_core::{Polytope, Result};

use crate::args::{point, BodyArgs, DirectionArgs};
use crate::output::{num, Output};

#[derive(Args, Debug)]
pub struct PolarArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    /// Pole as comma-separated coordinates (default: the Santaló point).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub z: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct SymmetrizeArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    #[command(flatten)]
    pub dir: DirectionArgs,
    /// Parameter of the Steiner family: −1 is the body, 0 its symmetral, 1 its reflection.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    #[command(flatten)]
    pub dir: DirectionArgs,
    /// Number of samples of t over [−1, 1]; odd and at least 5.
    #[arg(long, default_value_t = 21)]
    pub grid: usize,
    /// Check midpoint convexity over all grid pairs instead of consecutive triples.
    #[arg(long)]
    pub pairwise: bool,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    #[command(flatten)]
    pub dir: DirectionArgs,
    #[arg(long, default_value_t = 21)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct EllipsoidTestArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    /// Number of chord directions (default 8·dim).
    #[arg(long)]
    pub directions: Option<usize>,
    /// Largest accepted midpoint deviation, relative to the diameter.
    #[arg(long, default_value_t = 5e-3)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Vertex count above which the body is simplified between steps.
    #[arg(long, default_value_t = FlowOptions::default().vertex_cap)]
    pub vertex_cap: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Cuts,
    Moves,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    #[arg(long, value_enum, default_value_t = Family::Cuts)]
    pub family: Family,
    /// Maximal number of volume-product evaluations.
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
}

fn body_summary(p: &Polytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": p.vertices().len(),
        "facets": p.facets().len(),
        "volume": p.volume(),
    })
}

fn product_summary(r: &ProductReport) -> Value {
    json!({
        "volume": r.body_volume,
        "santalo_point": r.santalo.point,
        "polar_volume": r.santalo.polar_volume,
        "product": r.product,
        "ratio_to_ball": r.ratio_to_ball,
        "iterations": r.santalo.iterations,
        "residual": r.santalo.residual,
        "converged": r.santalo.converged,
    })
}

fn json_body(p: &Polytope) -> Vec<u8> {
    format!("{}\n", body_to_json(p)).into_bytes()
}

fn rational_allowed(rational: bool, dim: usize) -> bool {
    if rational && dim != 2 {
        warn!("--rational only applies in dimension 2; using floating point");
    }
    rational && dim == 2
}

pub fn gen(args: &BodyArgs, out: &mut Output) -> Result<Value> {
    let p = args.generate()?;
    out.raw("body.json", json_body(&p));
    Ok(json!({ "command": "gen", "spec": args.spec()?, "body": body_summary(&p), "vertices": p.vertices() }))
}

pub fn product(args: &BodyArgs, rational: bool, out: &mut Output) -> Result<Value> {
    let p = args.generate()?;
    let r = volume_product(&p)?;
    let mut summary = json!({
        "command": "product",
        "body": body_summary(&p),
        "product": r.product,
        "result": product_summary(&r),
    });
    if rational_allowed(rational, p.dim()) {
        // Π is affine invariant, so a rational affine image of a regular
        // polygon carries the exact value of the regular one.
        let (k, hint) = match (args.body, args.m.and_then(affine_regular)) {
            (BodyKind::PolygonRegular, Some(k)) => {
                info!("using a rational affine-regular {}-gon", k.vertices().len());
                (k, None)
            }
            _ => (ExactPolygon::from_polytope(&p)?, Some(r.santalo.point)),
        };
        let e = exact_volume_product(&k, hint.as_ref())?;
        if !e.certified {
            warn!("no rational pole satisfies the Santaló condition exactly; exact value is an upper bound");
        }
        summary["product"] = json!(e.product_f64());
        summary["exact"] = json!({
            "area": format_rational(&e.area),
            "pole": [format_rational(&e.pole.x), format_rational(&e.pole.y)],
            "polar_area": format_rational(&e.polar_area),
            "product": format_rational(&e.product),
            "certified": e.certified,
        });
    }
    out.csv(
        "product.csv",
        &["volume", "polar_volume", "product", "ratio_to_ball"],
        [vec![num(r.body_volume), num(r.santalo.polar_volume), num(summary["product"].as_f64().unwrap_or(r.product)), num(r.ratio_to_ball)]],
    )?;
    Ok(summary)
}

pub fn santalo(args: &BodyArgs, out: &mut Output) -> Result<Value> {
    let p = args.generate()?;
    let s = santalo_point(&p)?;
    let mut row = s.point.coords().iter().map(|&x| num(x)).collect::<Vec<_>>();
    row.push(num(s.polar_volume));
    let header: Vec<&str> = ["x", "y", "z"][..p.dim()].iter().copied().chain(["polar_volume"]).collect();
    out.csv("santalo.csv", &header, [row])?;
    Ok(json!({
        "command": "santalo",
        "body": body_summary(&p),
        "santalo_point": s.point,
        "polar_volume": s.polar_volume,
        "iterations": s.iterations,
        "residual": s.residual,
        "converged": s.converged,
    }))
}

pub fn polar_cmd(args: &PolarArgs, rational: bool, out: &mut Output) -> Result<Value> {
    let p = args.body.generate()?;
    let z = match &args.z {
        Some(c) => point(c, p.dim())?,
        None => santalo_point(&p)?.point,
    };
    if rational_allowed(rational, p.dim()) {
        let k = ExactPolygon::from_polytope(&p)?;
        let pole = QPoint::from_vector(&z)?;
        let kp = k.polar(&pole)?;
        let q = kp.to_polytope()?;
        out.raw("polar.json", json_body(&q));
        let verts: Vec<[String; 2]> = kp
            .vertices()
            .iter()
            .map(|v| [format_rational(&v.x), format_rational(&v.y)])
            .collect();
        return Ok(json!({
            "command": "polar",
            "pole": z,
            "polar_volume": q.volume(),
            "exact": { "polar_area": format_rational(&kp.area()), "vertices": verts },
            "polar": body_summary(&q),
        }));
    }
    let q = polar(&p, &z)?;
    out.raw("polar.json", json_body(&q));
    Ok(json!({
        "command": "polar",
        "pole": z,
        "polar_volume": polar_volume(&p, &z)?,
        "polar": body_summary(&q),
        "vertices": q.vertices(),
    }))
}

pub fn symmetrize(args: &SymmetrizeArgs, out: &mut Output) -> Result<Value> {
    let p = args.body.generate()?;
    let u = args.dir.direction(p.dim())?;
    let q = if args.t == 0.0 {
        steiner_symmetral(&p, &u)?
    } else {
        steiner_snapshot(&p, &u, args.t)?
    };
    out.raw("symmetral.json", json_body(&q));
    let (before, after) = (volume_product(&p)?, volume_product(&q)?);
    Ok(json!({
        "command": "symmetrize",
        "u": u,
        "t": args.t,
        "body": body_summary(&p),
        "result": body_summary(&q),
        "product_before": before.product,
        "product_after": after.product,
    }))
}

fn profile_rows(p: &Profile) -> impl Iterator<Item = Vec<String>> + '_ {
    (0..p.t_grid.len()).map(|i| {
        vec![
            num(p.t_grid[i]),
            num(p.f_values[i]),
            num(p.body_volumes[i]),
            num(p.polar_volumes[i]),
        ]
    })
}

const PROFILE_HEADER: [&str; 4] = ["t", "f", "volume", "polar_volume"];

fn profile_summary(p: &Profile) -> Value {
    json!({
        "grid": p.t_grid.len(),
        "max_midpoint_violation": p.max_midpoint_violation,
        "relative_violation": p.relative_violation(),
        "evenness_defect": p.evenness_defect,
        "relative_evenness_defect": p.relative_evenness_defect(),
        "min_f": p.min_f(),
        "max_f": p.max_f(),
        "f_at_zero": p.f_at(0.0),
        "relative_spread": p.relative_spread(),
        "volume_drift": p.volume_drift(),
    })
}

pub fn profile(args: &ProfileArgs, out: &mut Output) -> Result<Value> {
    let u = args.dir.direction(args.body.dim())?;
    let p = args.body.generate_aligned(&u, args.dir.no_align)?;
    let check = if args.pairwise {
        ConvexityCheck::Pairwise
    } else {
        ConvexityCheck::Triples
    };
    let prof = convexity_profile_with(&p, &u, args.grid, check)?;
    out.csv("profile.csv", &PROFILE_HEADER, profile_rows(&prof))?;
    let mut s = profile_summary(&prof);
    s["command"] = json!("profile");
    s["u"] = json!(u);
    s["check"] = json!(check);
    s["body"] = body_summary(&p);
    Ok(s)
}

pub fn certify(args: &CertifyArgs, out: &mut Output) -> Result<Value> {
    let u = args.dir.direction(args.body.dim())?;
    let p = args.body.generate_aligned(&u, args.dir.no_align)?;
    let c = theorem2_certificate(&p, &u, args.grid)?;
    out.csv("profile.csv", &PROFILE_HEADER, profile_rows(&c.profile))?;
    Ok(json!({
        "command": "certify",
        "u": u,
        "body": body_summary(&p),
        "verdict": c.verdict,
        "f_convex": c.f_convex,
        "f_even": c.f_even,
        "f_constant": c.f_constant,
        "shear_fits": c.shear_fits,
        "shear_spread": c.shear_spread,
        "profile": profile_summary(&c.profile),
    }))
}

pub fn ellipsoid(args: &EllipsoidTestArgs, out: &mut Output) -> Result<Value> {
    let p = args.body.generate()?;
    let n = args.directions.unwrap_or(8 * p.dim());
    let r = ellipsoid_test(&p, n, args.tol)?;
    let axes = ["u_x", "u_y", "u_z"];
    let header: Vec<&str> = axes[..p.dim()].iter().copied().chain(["deviation"]).collect();
    out.csv(
        "directions.csv",
        &header,
        r.deviations.iter().map(|(u, d)| {
            let mut row: Vec<String> = u.as_vector().coords().iter().map(|&x| num(x)).collect();
            row.push(num(*d));
            row
        }),
    )?;
    Ok(json!({
        "command": "ellipsoid-test",
        "body": body_summary(&p),
        "directions": n,
        "tol": args.tol,
        "passed": r.passed,
        "worst_direction": r.worst_direction,
        "worst_deviation": r.worst_deviation,
    }))
}

pub fn flow(args: &FlowArgs, out: &mut Output) -> Result<(Value, bool)> {
    let p = args.body.generate()?;
    let opts = FlowOptions {
        vertex_cap: args.vertex_cap,
    };
    let trace = symmetrization_flow_with(&p, args.steps, args.body.seed, &opts)?;
    out.csv(
        "flow.csv",
        &["step", "product", "ratio_to_ball", "hausdorff_to_ball", "vertices", "gain", "pruning_loss"],
        trace.steps.iter().map(|s| {
            vec![
                s.step.to_string(),
                num(s.product),
                num(s.ratio_to_ball),
                num(s.hausdorff_to_ball),
                s.vertices.to_string(),
                num(s.gain),
                num(s.pruning_loss),
            ]
        }),
    )?;
    let last = trace.last();
    let summary = json!({
        "command": "flow",
        "body": body_summary(&p),
        "steps": trace.steps.len().saturating_sub(1),
        "final_product": last.map(|s| s.product),
        "final_ratio_to_ball": last.map(|s| s.ratio_to_ball),
        "final_hausdorff_to_ball": last.map(|s| s.hausdorff_to_ball),
        "min_relative_gain": trace.min_relative_gain(),
        "failure": trace.failure,
    });
    Ok((summary, trace.failure.is_none()))
}

pub fn probe(args: &ProbeArgs, out: &mut Output) -> Result<Value> {
    let p = args.body.generate()?;
    let family = match args.family {
        Family::Cuts => ProbeFamily::VertexCuts,
        Family::Moves => ProbeFamily::VertexMoves,
    };
    let r = local_max_probe(&p, family, args.budget, args.body.seed)?;
    out.csv(
        "probe.csv",
        &["round", "epsilon", "product"],
        r.best_perturbation
            .iter()
            .enumerate()
            .map(|(i, s)| vec![(i + 1).to_string(), num(s.epsilon), num(s.product)]),
    )?;
    Ok(json!({
        "command": "probe",
        "body": body_summary(&p),
        "family": r.family,
        "base_product": r.base_product,
        "best_product": r.best_product,
        "improvement": r.improvement,
        "evaluations": r.evaluations,
        "perturbations": r.best_perturbation,
    }))
}

