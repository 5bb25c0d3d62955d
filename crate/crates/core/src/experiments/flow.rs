use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::lemma::direction_set;
use crate::bodies::random_euler_angles;
use crate::duality::{ball_volume, volume_product};
use crate::error::{Error, Result};
use crate::polytope::{canonicalize, Polytope};
use crate::subdivision::boundary_cycle;
use crate::symmetrization::steiner_symmetral;
use crate::vector::{Direction, Vector};

/// Knobs of the symmetrization flow.
#[derive(Clone, Debug)]
pub struct FlowOptions {
    /// Each symmetral can double the vertex count; above this cap the body
    /// is simplified before the next step.
    pub vertex_cap: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self { vertex_cap: 256 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowStep {
    pub step: usize,
    /// Symmetrization direction (absent for the starting body).
    pub direction: Option<Direction>,
    /// `Π` of the body after this step (before any simplification).
    pub product: f64,
    pub ratio_to_ball: f64,
    /// Hausdorff distance to the ball of equal volume centred at the centroid.
    pub hausdorff_to_ball: f64,
    pub vertices: usize,
    /// `Π(St_u K) − Π(K)` for the body `K` entering this step.
    pub gain: f64,
    /// `Π` lost by simplifying the symmetral to the vertex cap.
    pub pruning_loss: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowTrace {
    pub steps: Vec<FlowStep>,
    /// Error that stopped the flow early, if any.
    pub failure: Option<String>,
}

impl FlowTrace {
    /// Smallest per-step gain relative to the product before the step.
    pub fn min_relative_gain(&self) -> f64 {
        self.steps
            .windows(2)
            .map(|w| w[1].gain / (w[1].product - w[1].gain))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest difference between consecutive recorded products.
    pub fn min_increment(&self) -> f64 {
        self.steps
            .windows(2)
            .map(|w| w[1].product - w[0].product)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn last(&self) -> Option<&FlowStep> {
        self.steps.last()
    }
}

/// Hausdorff distance from `p` to the ball of radius `r` centred at `c`:
/// the sup-norm distance of support functions, `max(R − r, r − ρ)` with `R`
/// the largest vertex distance and `ρ` the smallest facet distance from `c`.
pub fn hausdorff_to_ball(p: &Polytope, c: &Vector, r: f64) -> f64 {
    let outer = p.vertices().iter().map(|v| v.distance(c)).fold(0.0_f64, f64::max);
    let inner = p.min_slack(c);
    (outer - r).max(r - inner).max(0.0)
}

fn normalize_volume(p: &Polytope, target: f64) -> Polytope {
    let c = p.centroid();
    let s = (target / p.volume()).powf(1.0 / p.dim() as f64);
    p.scale_about(&c, s)
}

/// Drops vertices down to `cap`: in the plane by repeatedly removing the
/// vertex spanning the smallest triangle with its neighbours; in space by
/// keeping the support points of a Fibonacci direction set.
fn simplify(p: &Polytope, cap: usize) -> Result<Polytope> {
    if p.vertices().len() <= cap {
        return Ok(p.clone());
    }
    if p.dim() == 2 {
        let mut cycle = boundary_cycle(p);
        let area = |c: &[Vector], i: usize| {
            let k = c.len();
            let (a, b, d) = (c[(i + k - 1) % k], c[i], c[(i + 1) % k]);
            (b - a).cross2(&(d - a)).abs()
        };
        while cycle.len() > cap {
            let i = (0..cycle.len())
                .min_by(|&i, &j| area(&cycle, i).total_cmp(&area(&cycle, j)))
                .expect("non-empty");
            cycle.remove(i);
        }
        canonicalize(&cycle)
    } else {
        let mut keep: Vec<usize> = direction_set(3, cap)?
            .iter()
            .map(|d| {
                (0..p.vertices().len())
                    .max_by(|&i, &j| p.vertices()[i].dot(d).total_cmp(&p.vertices()[j].dot(d)))
                    .expect("non-empty")
            })
            .collect();
        keep.sort_unstable();
        keep.dedup();
        let pts: Vec<Vector> = keep.iter().map(|&i| p.vertices()[i]).collect();
        canonicalize(&pts)
    }
}

fn random_direction(dim: usize, rng: &mut ChaCha8Rng) -> Result<Direction> {
    match dim {
        2 => Ok(Direction::from_angle(rng.gen_range(0.0..std::f64::consts::PI))),
        3 => {
            let r = crate::bodies::euler_rotation(random_euler_angles(rng));
            Direction::new(Vector::new3(r[(0, 2)], r[(1, 2)], r[(2, 2)]))
        }
        n => Err(Error::UnsupportedDimension(n)),
    }
}

/// Iterated Steiner symmetrization along seeded random directions.
pub fn symmetrization_flow(p: &Polytope, num_steps: usize, seed: u64) -> Result<FlowTrace> {
    symmetrization_flow_with(p, num_steps, seed, &FlowOptions::default())
}

/// As [`symmetrization_flow`]. The body is rescaled to the volume of the
/// unit ball before the first step (symmetrization preserves volume, so it
/// stays there up to simplification, after which it is rescaled again).
/// A failing step ends the trace; the steps recorded so far are returned.
pub fn symmetrization_flow_with(
    p: &Polytope,
    num_steps: usize,
    seed: u64,
    opts: &FlowOptions,
) -> Result<FlowTrace> {
    if num_steps == 0 {
        return Err(Error::BadSpec("flow needs at least one step".into()));
    }
    let n = p.dim();
    let omega = ball_volume(n)?;
    let radius = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut body = normalize_volume(p, omega);
    let start = volume_product(&body)?;
    let mut current = start.product;
    let mut steps = vec![FlowStep {
        step: 0,
        direction: None,
        product: start.product,
        ratio_to_ball: start.ratio_to_ball,
        hausdorff_to_ball: hausdorff_to_ball(&body, &body.centroid(), radius),
        vertices: body.vertices().len(),
        gain: 0.0,
        pruning_loss: 0.0,
    }];
    for step in 1..=num_steps {
        let result = (|| -> Result<(FlowStep, Polytope, f64)> {
            let u = random_direction(n, &mut rng)?;
            let sym = steiner_symmetral(&body, &u)?;
            let report = volume_product(&sym)?;
            let record = FlowStep {
                step,
                direction: Some(u),
                product: report.product,
                ratio_to_ball: report.ratio_to_ball,
                hausdorff_to_ball: hausdorff_to_ball(&sym, &sym.centroid(), radius),
                vertices: sym.vertices().len(),
                gain: report.product - current,
                pruning_loss: 0.0,
            };
            if sym.vertices().len() <= opts.vertex_cap {
                return Ok((record, sym, report.product));
            }
            let simple = normalize_volume(&simplify(&sym, opts.vertex_cap)?, omega);
            let after = volume_product(&simple)?.product;
            Ok((
                FlowStep {
                    pruning_loss: report.product - after,
                    ..record
                },
                simple,
                after,
            ))
        })();
        match result {
            Ok((record, next, product)) => {
                steps.push(record);
                body = next;
                current = product;
            }
            Err(e) => {
                return Ok(FlowTrace {
                    steps,
                    failure: Some(format!("step {step}: {e}")),
                })
            }
        }
    }
    Ok(FlowTrace { steps, failure: None })
}
