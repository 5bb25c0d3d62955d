//! Polar bodies, the Santaló point and the volume product.
//!
//! For a pole `z` interior to `K` the polar `K^z = {y : ⟨y−z, x−z⟩ ≤ 1 ∀x ∈ K}`
//! has one vertex per facet of `K` and one facet per vertex of `K`, with the
//! incidences reversed. Its moments are integrated directly over the cones
//! from `z` to its facets, which is what the Santaló solver iterates on.

use log::debug;
use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::polytope::{assemble, tolerance_for, Moments, Polytope};
use crate::vector::{Vector, MAX_DIM};

/// Facet slack below which a pole counts as being on the boundary.
fn interior_tol(p: &Polytope) -> f64 {
    p.tolerance()
}

fn check_interior(p: &Polytope, z: &Vector) -> Result<()> {
    if z.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: z.dim(),
        });
    }
    let slack = p.min_slack(z);
    if !(slack > interior_tol(p)) {
        return Err(Error::NotInterior { slack });
    }
    Ok(())
}

/// Polar vertices relative to `z`: `n_f / (c_f − ⟨n_f, z⟩)` for each facet.
fn polar_vertices_rel(p: &Polytope, z: &Vector) -> Vec<Vector> {
    p.facets()
        .iter()
        .map(|f| f.normal * (1.0 / f.slack(z)))
        .collect()
}

/// The polar body `K^z`.
///
/// Both descriptions of the polar are produced (vertices from the facets of
/// `p`, facets from the vertices of `p`) and must agree in size.
pub fn polar(p: &Polytope, z: &Vector) -> Result<Polytope> {
    check_interior(p, z)?;
    let verts: Vec<Vector> = polar_vertices_rel(p, z).into_iter().map(|w| *z + w).collect();
    let planes: Vec<(Vector, f64)> = p
        .vertices()
        .iter()
        .map(|v| {
            let d = *v - *z;
            let r = d.norm();
            let n = d * (1.0 / r);
            (n, n.dot(z) + 1.0 / r)
        })
        .collect();
    let tol = tolerance_for(&verts);
    let q = assemble(p.dim(), verts, planes, tol)?;
    if q.vertices().len() != p.facets().len() || q.facets().len() != p.vertices().len() {
        return Err(Error::numerical(format!(
            "polar has {} vertices / {} facets for a body with {} facets / {} vertices",
            q.vertices().len(),
            q.facets().len(),
            p.facets().len(),
            p.vertices().len()
        )));
    }
    Ok(q)
}

/// Moments of `K^z − z` (volume, first and second moments about the pole).
pub fn polar_moments(p: &Polytope, z: &Vector) -> Result<Moments> {
    check_interior(p, z)?;
    let n = p.dim();
    let w = polar_vertices_rel(p, z);
    let origin = Vector::zeros(n);
    let mut m = Moments::zero(n);
    let mut simplex = [origin; MAX_DIM + 1];
    for v in 0..p.vertices().len() {
        let inc = p.vertex_facets(v);
        match n {
            1 => {
                simplex[1] = w[inc[0]];
                m.add_simplex(&simplex[..2]);
            }
            2 => {
                simplex[1] = w[inc[0]];
                simplex[2] = w[inc[1]];
                m.add_simplex(&simplex[..3]);
            }
            _ => {
                simplex[1] = w[inc[0]];
                for k in 1..inc.len() - 1 {
                    simplex[2] = w[inc[k]];
                    simplex[3] = w[inc[k + 1]];
                    m.add_simplex(&simplex[..4]);
                }
            }
        }
    }
    Ok(m)
}

/// `|K^z|`.
pub fn polar_volume(p: &Polytope, z: &Vector) -> Result<f64> {
    Ok(polar_moments(p, z)?.volume)
}

/// Knobs of the Santaló solver.
#[derive(Clone, Debug)]
pub struct SantaloConfig {
    /// Stop once `‖centroid(K^z) − z‖` falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Initial fraction of the Newton step tried by the line search.
    pub damping: f64,
}

impl Default for SantaloConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 500,
            damping: 1.0,
        }
    }
}

/// Outcome of the Santaló point search.
#[derive(Clone, Debug)]
pub struct SantaloResult {
    pub point: Vector,
    pub polar_volume: f64,
    pub iterations: usize,
    /// `‖centroid(K^s) − s‖` at the returned point.
    pub residual: f64,
    pub converged: bool,
}

/// Santaló point with the default configuration.
pub fn santalo_point(p: &Polytope) -> Result<SantaloResult> {
    santalo_point_with(p, &SantaloConfig::default())
}

fn solve_newton(second: &Matrix3<f64>, rhs: &Vector) -> Option<Vector> {
    match rhs.dim() {
        1 => (second[(0, 0)] > 0.0).then(|| Vector::from_slice(&[rhs[0] / second[(0, 0)]])),
        2 => {
            let m = Matrix2::new(second[(0, 0)], second[(0, 1)], second[(1, 0)], second[(1, 1)]);
            let x = m.cholesky()?.solve(&Vector2::new(rhs[0], rhs[1]));
            Some(Vector::new2(x[0], x[1]))
        }
        _ => {
            let x = second
                .cholesky()?
                .solve(&Vector3::new(rhs[0], rhs[1], rhs[2]));
            Some(Vector::new3(x[0], x[1], x[2]))
        }
    }
}

/// Minimizes `z ↦ |K^z|` over the interior of `p`.
///
/// The gradient of `|K^z|` is `(n+1)·∫_{K^z−z} y dy` and its Hessian is
/// `(n+1)(n+2)·∫_{K^z−z} y yᵀ dy`, so each Newton step only needs the first
/// two moments of the polar about the current pole. Steps are halved until
/// the pole stays interior and the polar volume does not increase. When no
/// such step exists a derivative-free coordinate descent takes over.
pub fn santalo_point_with(p: &Polytope, cfg: &SantaloConfig) -> Result<SantaloResult> {
    let n = p.dim();
    let mut z = p.centroid();
    let mut m = polar_moments(p, &z)?;
    let mut best = (z, f64::INFINITY);
    let mut stalls = 0;
    for it in 0..cfg.max_iterations {
        let residual = m.first.norm() / m.volume;
        if residual < best.1 {
            best = (z, residual);
        }
        if residual < cfg.tolerance {
            return Ok(SantaloResult {
                point: z,
                polar_volume: m.volume,
                iterations: it,
                residual,
                converged: true,
            });
        }
        let step = solve_newton(&m.second, &(m.first * (-1.0 / (n as f64 + 2.0))));
        let mut accepted = None;
        if let Some(step) = step {
            let mut lambda = cfg.damping;
            for _ in 0..60 {
                let cand = z + step * lambda;
                if let Ok(mc) = polar_moments(p, &cand) {
                    if mc.volume <= m.volume * (1.0 + 1e-13) {
                        accepted = Some((cand, mc));
                        break;
                    }
                }
                lambda *= 0.5;
            }
        }
        match accepted {
            Some((cand, mc)) => {
                z = cand;
                m = mc;
            }
            None => {
                stalls += 1;
                debug!("newton step stalled at {z}, residual {residual:.3e}; coordinate descent");
                if stalls > 3 {
                    break;
                }
                z = coordinate_descent(p, &z, 50)?;
                m = polar_moments(p, &z)?;
            }
        }
    }
    let m = polar_moments(p, &z)?;
    let residual = m.first.norm() / m.volume;
    if residual < cfg.tolerance {
        return Ok(SantaloResult {
            point: z,
            polar_volume: m.volume,
            iterations: cfg.max_iterations,
            residual,
            converged: true,
        });
    }
    Err(Error::NoConvergence {
        best: best.0,
        residual: best.1,
        iterations: cfg.max_iterations,
    })
}

/// Cyclic golden-section minimization of `|K^z|` along the coordinate axes,
/// bracketing each line search by the facet constraints. Used as the fallback
/// when Newton steps stall.
pub fn coordinate_descent(p: &Polytope, start: &Vector, sweeps: usize) -> Result<Vector> {
    let n = p.dim();
    let margin = 10.0 * interior_tol(p);
    let mut z = *start;
    let mut val = polar_volume(p, &z)?;
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..sweeps {
        let before = val;
        for i in 0..n {
            // Feasible range of z + s e_i.
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for f in p.facets() {
                let a = f.normal[i];
                let slack = f.slack(&z) - margin;
                if a > 1e-15 {
                    hi = hi.min(slack / a);
                } else if a < -1e-15 {
                    lo = lo.max(slack / a);
                }
            }
            if !(lo < hi) {
                continue;
            }
            let f = |s: f64| -> f64 {
                let mut c = z;
                c[i] += s;
                polar_volume(p, &c).unwrap_or(f64::INFINITY)
            };
            let (mut a, mut b) = (lo, hi);
            let mut x1 = b - phi * (b - a);
            let mut x2 = a + phi * (b - a);
            let (mut f1, mut f2) = (f(x1), f(x2));
            for _ in 0..80 {
                if f1 <= f2 {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - phi * (b - a);
                    f1 = f(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + phi * (b - a);
                    f2 = f(x2);
                }
            }
            let s = 0.5 * (a + b);
            let fs = f(s);
            if fs < val {
                z[i] += s;
                val = fs;
            }
        }
        if before - val <= 1e-15 * before {
            break;
        }
    }
    Ok(z)
}

/// `Π(K)` with its ingredients.
#[derive(Clone, Debug)]
pub struct ProductReport {
    pub body_volume: f64,
    pub santalo: SantaloResult,
    pub product: f64,
    /// `Π(K) / ω_n²`.
    pub ratio_to_ball: f64,
}

pub fn volume_product(p: &Polytope) -> Result<ProductReport> {
    volume_product_with(p, &SantaloConfig::default())
}

pub fn volume_product_with(p: &Polytope, cfg: &SantaloConfig) -> Result<ProductReport> {
    let body_volume = p.volume();
    let santalo = santalo_point_with(p, cfg)?;
    let product = body_volume * santalo.polar_volume;
    let ball = ball_volume(p.dim())?;
    Ok(ProductReport {
        body_volume,
        santalo,
        product,
        ratio_to_ball: product / (ball * ball),
    })
}

/// `ω_n = π^{n/2} / Γ(n/2 + 1)`.
pub fn ball_volume(n: usize) -> Result<f64> {
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    // Γ(n/2 + 1) by the half-integer recurrence from Γ(1) = 1, Γ(1/2) = √π.
    let mut gamma = if n.is_multiple_of(2) {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    let mut x = if n.is_multiple_of(2) { 1.0 } else { 0.5 };
    while x < n as f64 / 2.0 + 1.0 - 1e-12 {
        gamma *= x;
        x += 1.0;
    }
    Ok(std::f64::consts::PI.powf(n as f64 / 2.0) / gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{canonicalize, hausdorff_distance};
    use std::f64::consts::PI;

    fn square() -> Polytope {
        canonicalize(&[
            Vector::new2(-1.0, -1.0),
            Vector::new2(1.0, -1.0),
            Vector::new2(1.0, 1.0),
            Vector::new2(-1.0, 1.0),
        ])
        .unwrap()
    }

    fn regular(m: usize, r: f64, phase: f64) -> Polytope {
        let pts: Vec<Vector> = (0..m)
            .map(|k| {
                let t = phase + 2.0 * PI * k as f64 / m as f64;
                Vector::new2(r * t.cos(), r * t.sin())
            })
            .collect();
        canonicalize(&pts).unwrap()
    }

    #[test]
    fn polar_of_square_is_cross_polytope() {
        let q = polar(&square(), &Vector::zeros(2)).unwrap();
        let diamond = canonicalize(&[
            Vector::new2(1.0, 0.0),
            Vector::new2(0.0, 1.0),
            Vector::new2(-1.0, 0.0),
            Vector::new2(0.0, -1.0),
        ])
        .unwrap();
        assert!(hausdorff_distance(&q, &diamond).unwrap() < 1e-15);
        assert!((q.volume() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polar_of_regular_triangle() {
        let tri = regular(3, 1.0, 0.0);
        let q = polar(&tri, &Vector::zeros(2)).unwrap();
        let expected = regular(3, 2.0, PI);
        assert!(hausdorff_distance(&q, &expected).unwrap() < 1e-12);
    }

    #[test]
    fn boundary_pole_is_refused() {
        assert!(matches!(
            polar(&square(), &Vector::new2(1.0, 0.0)),
            Err(Error::NotInterior { .. })
        ));
    }

    #[test]
    fn moments_match_polar_polytope() {
        let p = regular(7, 1.3, 0.2);
        let z = Vector::new2(0.1, -0.2);
        let m = polar_moments(&p, &z).unwrap();
        let q = polar(&p, &z).unwrap();
        assert!((m.volume - q.volume()).abs() < 1e-12);
        assert!((z + m.mean()).distance(&q.centroid()) < 1e-12);
    }

    #[test]
    fn santalo_of_square_and_translate() {
        let s = santalo_point(&square()).unwrap();
        assert!(s.converged && s.point.norm() < 1e-12);
        let moved = square().translate(&Vector::new2(10.0, 0.0));
        let s = santalo_point(&moved).unwrap();
        assert!(s.point.distance(&Vector::new2(10.0, 0.0)) < 1e-9);
    }

    #[test]
    fn fallback_descent_reaches_the_minimum() {
        let tri = canonicalize(&[
            Vector::new2(0.0, 0.0),
            Vector::new2(1.0, 0.0),
            Vector::new2(0.0, 1.0),
        ])
        .unwrap();
        let z = coordinate_descent(&tri, &Vector::new2(0.6, 0.2), 200).unwrap();
        assert!(z.distance(&Vector::new2(1.0 / 3.0, 1.0 / 3.0)) < 1e-4);
    }

    #[test]
    fn volume_products_of_regular_polygons() {
        let r = volume_product(&square()).unwrap();
        assert!((r.product - 8.0).abs() < 1e-12);
        let hex = volume_product(&regular(6, 1.0, 0.0)).unwrap();
        assert!((hex.product - 9.0).abs() < 1e-9);
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(2).unwrap() - PI).abs() < 1e-15);
        assert!((ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((ball_volume(3).unwrap().powi(2) - 17.5460).abs() < 1e-4);
        assert!(matches!(ball_volume(4), Err(Error::UnsupportedDimension(4))));
    }
}
