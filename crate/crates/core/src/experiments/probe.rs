use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::duality::volume_product;
use crate::error::{Error, Result};
use crate::polytope::{canonicalize, Polytope};
use crate::vector::Vector;

/// Sizes tried per vertex: `ε_k = 0.5 · 2^{−k/2}`, relative to the distance
/// of the vertex from the centroid.
const EPS_GRID: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeFamily {
    /// Cut off one vertex by a plane orthogonal to its centroid ray.
    VertexCuts,
    /// Move one vertex by `ε` in a seeded random direction.
    VertexMoves,
}

/// One accepted perturbation.
#[derive(Clone, Debug, Serialize)]
pub struct Perturbation {
    pub vertex: Vector,
    pub epsilon: f64,
    /// Unit direction of a move (absent for cuts).
    pub direction: Option<Vector>,
    /// `Π` after applying this and all earlier perturbations.
    pub product: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub family: ProbeFamily,
    pub base_product: f64,
    /// Accepted perturbations in order; empty if nothing improved on the base.
    pub best_perturbation: Vec<Perturbation>,
    pub best_product: f64,
    /// `best_product − base_product` (zero when nothing improved).
    pub improvement: f64,
    pub evaluations: usize,
}

fn epsilon(k: usize) -> f64 {
    0.5 * 0.5f64.powf(0.5 * k as f64)
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v = Vector::from_slice(&c);
        let r = v.norm();
        if r > 1e-3 && r <= 1.0 {
            return v * (1.0 / r);
        }
    }
}

fn perturb(p: &Polytope, family: ProbeFamily, v: usize, eps: f64, dir: &Vector) -> Result<Polytope> {
    let x = p.vertices()[v];
    let c = p.centroid();
    let ray = x - c;
    let len = ray.norm();
    match family {
        ProbeFamily::VertexCuts => {
            let d = ray * (1.0 / len);
            p.cut(&d, d.dot(&x) - eps * len)
        }
        ProbeFamily::VertexMoves => {
            let mut pts = p.vertices().to_vec();
            pts[v] = x + *dir * (eps * len);
            canonicalize(&pts)
        }
    }
}

/// Greedy search for a perturbation that raises the volume product.
///
/// Each round evaluates every (vertex, ε) pair of the current body — in
/// parallel, with ties broken by enumeration order — and keeps the best one
/// if it improves `Π`; the next round starts from the perturbed body. The
/// search stops when a round brings no improvement or the next round would
/// exceed `budget` evaluations of `Π`.
pub fn local_max_probe(p: &Polytope, family: ProbeFamily, budget: usize, seed: u64) -> Result<ProbeReport> {
    if budget == 0 {
        return Err(Error::BadSpec("probe budget must be at least 1".into()));
    }
    let base_product = volume_product(p)?.product;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut body = p.clone();
    let mut best_product = base_product;
    let mut accepted = Vec::new();
    let mut evaluations = 0;
    loop {
        let mut candidates: Vec<(usize, f64, Vector)> = Vec::new();
        for v in 0..body.vertices().len() {
            for k in 0..EPS_GRID {
                let dir = match family {
                    ProbeFamily::VertexCuts => Vector::zeros(p.dim()),
                    ProbeFamily::VertexMoves => random_unit(p.dim(), &mut rng),
                };
                candidates.push((v, epsilon(k), dir));
            }
        }
        let room = budget - evaluations;
        if room == 0 {
            break;
        }
        candidates.truncate(room);
        evaluations += candidates.len();
        let results: Vec<Option<(f64, Polytope)>> = candidates
            .par_iter()
            .map(|(v, eps, dir)| {
                let q = perturb(&body, family, *v, *eps, dir).ok()?;
                let pi = volume_product(&q).ok()?.product;
                Some((pi, q))
            })
            .collect();
        let mut round_best: Option<(usize, f64)> = None;
        for (i, r) in results.iter().enumerate() {
            if let Some((pi, _)) = r {
                if *pi > round_best.map_or(best_product, |b| b.1) {
                    round_best = Some((i, *pi));
                }
            }
        }
        let Some((i, pi)) = round_best else { break };
        let (v, eps, dir) = &candidates[i];
        accepted.push(Perturbation {
            vertex: body.vertices()[*v],
            epsilon: *eps,
            direction: (family == ProbeFamily::VertexMoves).then_some(*dir),
            product: pi,
        });
        body = results[i].as_ref().expect("evaluated").1.clone();
        best_product = pi;
    }
    Ok(ProbeReport {
        family,
        base_product,
        best_perturbation: accepted,
        best_product,
        improvement: best_product - base_product,
        evaluations,
    })
}
