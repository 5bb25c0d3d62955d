//! Polyhedral subdivisions of a base polytope in `u⊥` carrying one affine
//! function per cell, and their common refinement.

use crate::error::{Error, Result};
use crate::polytope::{canonicalize, Polytope, TOL};
use crate::vector::Vector;

/// `y ↦ ⟨linear, y⟩ + constant` on base coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineFn {
    pub linear: Vector,
    pub constant: f64,
}

impl AffineFn {
    #[inline]
    pub fn eval(&self, y: &Vector) -> f64 {
        self.linear.dot(y) + self.constant
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: f64, other: &AffineFn, beta: f64) -> AffineFn {
        AffineFn {
            linear: self.linear * alpha + other.linear * beta,
            constant: alpha * self.constant + beta * other.constant,
        }
    }

    /// Exact integral over a polytope: `vol · f(centroid)`.
    pub fn integrate(&self, region: &Polytope) -> f64 {
        region.volume() * self.eval(&region.centroid())
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub region: Polytope,
    pub functions: Vec<AffineFn>,
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    pub base_dim: usize,
    pub cells: Vec<Cell>,
}

impl Subdivision {
    pub fn total_volume(&self) -> f64 {
        self.cells.iter().map(|c| c.region.volume()).sum()
    }

    /// Cell containing `y` (first match within `tol`).
    pub fn locate(&self, y: &Vector, tol: f64) -> Option<&Cell> {
        self.cells.iter().find(|c| c.region.contains(y, tol))
    }

    /// Value of the `k`-th function at `y`.
    pub fn eval(&self, k: usize, y: &Vector) -> Option<f64> {
        let tol = TOL * (1.0 + y.max_abs());
        self.locate(y, tol).map(|c| c.functions[k].eval(y))
    }

    fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.base_dim];
        let mut hi = vec![f64::NEG_INFINITY; self.base_dim];
        for c in &self.cells {
            for v in c.region.vertices() {
                for i in 0..self.base_dim {
                    lo[i] = lo[i].min(v[i]);
                    hi[i] = hi[i].max(v[i]);
                }
            }
        }
        (lo, hi)
    }
}

/// Common refinement of two subdivisions of the same base polytope. Every
/// output cell lies in one cell of each input and carries the functions of
/// `s1` followed by those of `s2`.
pub fn overlay(s1: &Subdivision, s2: &Subdivision) -> Result<Subdivision> {
    if s1.base_dim != s2.base_dim {
        return Err(Error::DimensionMismatch {
            expected: s1.base_dim,
            found: s2.base_dim,
        });
    }
    let (v1, v2) = (s1.total_volume(), s2.total_volume());
    let scale = v1.abs().max(v2.abs()).max(1.0);
    if (v1 - v2).abs() > 1e-8 * scale {
        return Err(Error::BaseMismatch(format!("covered measure {v1} vs {v2}")));
    }
    let (lo1, hi1) = s1.bounds();
    let (lo2, hi2) = s2.bounds();
    for i in 0..s1.base_dim {
        let tol = 1e-8 * (1.0 + lo1[i].abs().max(hi1[i].abs()));
        if (lo1[i] - lo2[i]).abs() > tol || (hi1[i] - hi2[i]).abs() > tol {
            return Err(Error::BaseMismatch(format!(
                "extent along axis {i}: [{}, {}] vs [{}, {}]",
                lo1[i], hi1[i], lo2[i], hi2[i]
            )));
        }
    }
    match s1.base_dim {
        1 => Ok(overlay_1d(s1, s2)),
        2 => Ok(overlay_2d(s1, s2)),
        d => Err(Error::UnsupportedDimension(d + 1)),
    }
}

fn interval_of(c: &Cell) -> (f64, f64) {
    let v = c.region.vertices();
    (v[0][0], v[1][0])
}

fn overlay_1d(s1: &Subdivision, s2: &Subdivision) -> Subdivision {
    let mut a: Vec<&Cell> = s1.cells.iter().collect();
    let mut b: Vec<&Cell> = s2.cells.iter().collect();
    a.sort_by(|x, y| interval_of(x).0.total_cmp(&interval_of(y).0));
    b.sort_by(|x, y| interval_of(x).0.total_cmp(&interval_of(y).0));
    let span = a
        .iter()
        .chain(b.iter())
        .flat_map(|c| {
            let (l, h) = interval_of(c);
            [l.abs(), h.abs()]
        })
        .fold(1.0_f64, f64::max);
    let tol = TOL * span;
    let mut cells = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (al, ah) = interval_of(a[i]);
        let (bl, bh) = interval_of(b[j]);
        let lo = al.max(bl);
        let hi = ah.min(bh);
        if hi - lo > tol {
            let mut functions = a[i].functions.clone();
            functions.extend(b[j].functions.iter().copied());
            cells.push(Cell {
                region: Polytope::interval(lo, hi),
                functions,
            });
        }
        if ah <= bh {
            i += 1;
        } else {
            j += 1;
        }
    }
    Subdivision { base_dim: 1, cells }
}

/// Sutherland–Hodgman clip of a convex polygon by the halfplane `⟨n, y⟩ ≤ c`.
fn clip(poly: &[Vector], n: &Vector, c: f64) -> Vec<Vector> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let k = poly.len();
    for i in 0..k {
        let (p, q) = (poly[i], poly[(i + 1) % k]);
        let (sp, sq) = (n.dot(&p) - c, n.dot(&q) - c);
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let t = sp / (sp - sq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

/// Counter-clockwise boundary cycle of a polygon.
pub(crate) fn boundary_cycle(p: &Polytope) -> Vec<Vector> {
    let mut next = vec![usize::MAX; p.vertices().len()];
    for f in p.facets() {
        next[f.vertices[0]] = f.vertices[1];
    }
    let mut cycle = Vec::with_capacity(next.len());
    let mut v = 0;
    for _ in 0..next.len() {
        cycle.push(p.vertices()[v]);
        v = next[v];
    }
    cycle
}

fn polygon_area(poly: &[Vector]) -> f64 {
    let k = poly.len();
    (0..k)
        .map(|i| poly[i].cross2(&poly[(i + 1) % k]))
        .sum::<f64>()
        / 2.0
}

fn overlay_2d(s1: &Subdivision, s2: &Subdivision) -> Subdivision {
    let boxes = |s: &Subdivision| -> Vec<[f64; 4]> {
        s.cells
            .iter()
            .map(|c| {
                let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
                for v in c.region.vertices() {
                    b[0] = b[0].min(v[0]);
                    b[1] = b[1].min(v[1]);
                    b[2] = b[2].max(v[0]);
                    b[3] = b[3].max(v[1]);
                }
                b
            })
            .collect()
    };
    let (b1, b2) = (boxes(s1), boxes(s2));
    let total = s1.total_volume().max(1e-300);
    let scale = b1
        .iter()
        .flat_map(|b| b.iter().map(|x| x.abs()))
        .fold(1.0_f64, f64::max);
    let mut cells = Vec::new();
    for (c1, bx1) in s1.cells.iter().zip(&b1) {
        let poly1 = boundary_cycle(&c1.region);
        for (c2, bx2) in s2.cells.iter().zip(&b2) {
            if bx1[0] > bx2[2] || bx2[0] > bx1[2] || bx1[1] > bx2[3] || bx2[1] > bx1[3] {
                continue;
            }
            let mut poly = poly1.clone();
            for f in c2.region.facets() {
                poly = clip(&poly, &f.normal, f.offset);
                if poly.len() < 3 {
                    break;
                }
            }
            if poly.len() < 3 || polygon_area(&poly) <= 1e-13 * total {
                continue;
            }
            let Ok(region) = canonicalize(&poly) else {
                continue;
            };
            // Slivers thinner than the incidence tolerance are dropped.
            if region.volume() <= TOL * scale * region.diameter() {
                continue;
            }
            let mut functions = c1.functions.clone();
            functions.extend(c2.functions.iter().copied());
            cells.push(Cell { region, functions });
        }
    }
    Subdivision { base_dim: 2, cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn affine1(slope: f64, c: f64) -> AffineFn {
        AffineFn {
            linear: Vector::from_slice(&[slope]),
            constant: c,
        }
    }

    fn split(points: &[f64], tag: f64) -> Subdivision {
        Subdivision {
            base_dim: 1,
            cells: points
                .windows(2)
                .map(|w| Cell {
                    region: Polytope::interval(w[0], w[1]),
                    functions: vec![affine1(tag, w[0])],
                })
                .collect(),
        }
    }

    #[test]
    fn merge_of_breakpoints() {
        let s = overlay(&split(&[0.0, 0.4, 1.0], 1.0), &split(&[0.0, 0.7, 1.0], 2.0)).unwrap();
        let ivs: Vec<(f64, f64)> = s.cells.iter().map(interval_of).collect();
        assert_eq!(ivs, vec![(0.0, 0.4), (0.4, 0.7), (0.7, 1.0)]);
        assert_eq!(s.cells[1].functions.len(), 2);
        assert_eq!(s.cells[1].functions[0].constant, 0.4);
        assert_eq!(s.cells[1].functions[1].constant, 0.0);
    }

    #[test]
    fn self_overlay_keeps_cells() {
        let a = split(&[0.0, 0.25, 0.5, 1.0], 1.0);
        let s = overlay(&a, &a).unwrap();
        assert_eq!(s.cells.len(), 3);
    }

    #[test]
    fn mismatched_bases_are_rejected() {
        let r = overlay(&split(&[0.0, 1.0], 1.0), &split(&[0.0, 1.5], 1.0));
        assert!(matches!(r, Err(Error::BaseMismatch(_))));
    }

    fn grid_split(n: usize, rotate: bool) -> Subdivision {
        let mut cells = Vec::new();
        for i in 0..n {
            let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            let pts = if rotate {
                [
                    Vector::new2(0.0, a),
                    Vector::new2(1.0, a),
                    Vector::new2(1.0, b),
                    Vector::new2(0.0, b),
                ]
            } else {
                [
                    Vector::new2(a, 0.0),
                    Vector::new2(b, 0.0),
                    Vector::new2(b, 1.0),
                    Vector::new2(a, 1.0),
                ]
            };
            cells.push(Cell {
                region: canonicalize(&pts).unwrap(),
                functions: vec![AffineFn {
                    linear: Vector::new2(1.0, 0.0),
                    constant: i as f64,
                }],
            });
        }
        Subdivision { base_dim: 2, cells }
    }

    #[test]
    fn planar_overlay_conserves_area() {
        let s = overlay(&grid_split(3, false), &grid_split(4, true)).unwrap();
        assert_eq!(s.cells.len(), 12);
        assert!((s.total_volume() - 1.0).abs() < 1e-12);
    }
}
