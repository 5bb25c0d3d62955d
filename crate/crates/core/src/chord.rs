//! Chords parallel to a direction: `K = {y + s u : y ∈ P_u K, s ∈ [a(y), b(y)]}`.

use crate::error::{Error, Result};
use crate::polytope::{canonicalize, Polytope};
use crate::subdivision::{overlay, AffineFn, Cell, Subdivision};
use crate::vector::{Direction, Frame, Vector};

/// Facets with `|⟨normal, u⟩|` at or below this are vertical walls.
const VERTICAL_TOL: f64 = 1e-9;

/// A closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }
}

/// The chord `{s : y + s u ∈ P}` over base point `y` (coordinates in `u⊥`).
///
/// This is the pair of one-variable linear programs min/max `s` subject to
/// the facet inequalities, solved by scanning the facets.
pub fn chord(p: &Polytope, y: &Vector, u: &Direction) -> Result<Interval> {
    chord_in_frame(p, y, &Frame::new(*u))
}

pub fn chord_in_frame(p: &Polytope, y: &Vector, frame: &Frame) -> Result<Interval> {
    if y.dim() + 1 != p.dim() || frame.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim() - 1,
            found: y.dim(),
        });
    }
    let tol = p.tolerance();
    let base = frame.lift(y, 0.0);
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut excess: f64 = 0.0;
    for f in p.facets() {
        let nu = f.normal.dot(frame.direction());
        let slack = f.offset - f.normal.dot(&base);
        if nu.abs() <= VERTICAL_TOL {
            excess = excess.max(-slack);
        } else if nu > 0.0 {
            hi = hi.min(slack / nu);
        } else {
            lo = lo.max(slack / nu);
        }
    }
    if excess > tol {
        return Err(Error::OutsideProjection { excess });
    }
    if lo > hi + tol {
        return Err(Error::OutsideProjection { excess: lo - hi });
    }
    if lo > hi {
        let m = 0.5 * (lo + hi);
        return Ok(Interval::new(m, m));
    }
    Ok(Interval::new(lo, hi))
}

/// Orthogonal projection onto `u⊥`, in the frame's base coordinates.
pub fn project(p: &Polytope, u: &Direction) -> Result<Polytope> {
    project_in_frame(p, &Frame::new(*u))
}

pub fn project_in_frame(p: &Polytope, frame: &Frame) -> Result<Polytope> {
    let pts: Vec<Vector> = p.vertices().iter().map(|v| frame.project(v)).collect();
    canonicalize(&pts)
}

/// The lower and upper chord-endpoint functions as subdivisions of `P_u P`.
#[derive(Clone, Debug)]
pub struct ChordStructure {
    pub frame: Frame,
    pub projection: Polytope,
    pub lower: Subdivision,
    pub upper: Subdivision,
}

impl ChordStructure {
    pub fn new(p: &Polytope, u: &Direction) -> Result<Self> {
        if u.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                found: u.dim(),
            });
        }
        let frame = Frame::new(*u);
        let projection = project_in_frame(p, &frame)?;
        let base_dim = p.dim() - 1;
        let mut lower = Subdivision {
            base_dim,
            cells: Vec::new(),
        };
        let mut upper = lower.clone();
        for f in p.facets() {
            let nu = f.normal.dot(frame.direction());
            if nu.abs() <= VERTICAL_TOL {
                continue;
            }
            let pts: Vec<Vector> = f.vertices.iter().map(|&i| frame.project(&p.vertices()[i])).collect();
            let Ok(region) = canonicalize(&pts) else {
                // Projects to a null set: effectively vertical.
                continue;
            };
            // ⟨n_perp, y⟩ + nu s = c  =>  s = (c − ⟨n_perp, y⟩) / nu
            let n_perp = frame.project(&f.normal);
            let func = AffineFn {
                linear: n_perp * (-1.0 / nu),
                constant: f.offset / nu,
            };
            let cell = Cell {
                region,
                functions: vec![func],
            };
            if nu < 0.0 {
                lower.cells.push(cell);
            } else {
                upper.cells.push(cell);
            }
        }
        Ok(Self {
            frame,
            projection,
            lower,
            upper,
        })
    }

    /// Common refinement carrying `[a, b]` on every cell.
    pub fn refined(&self) -> Result<Subdivision> {
        overlay(&self.lower, &self.upper)
    }
}

/// `(lower, upper)` subdivisions carrying `a(y)` and `b(y)`.
pub fn chord_structure(p: &Polytope, u: &Direction) -> Result<(Subdivision, Subdivision)> {
    let cs = ChordStructure::new(p, u)?;
    Ok((cs.lower, cs.upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square() -> Polytope {
        canonicalize(&[
            Vector::new2(-1.0, -1.0),
            Vector::new2(1.0, -1.0),
            Vector::new2(1.0, 1.0),
            Vector::new2(-1.0, 1.0),
        ])
        .unwrap()
    }

    fn triangle() -> Polytope {
        canonicalize(&[
            Vector::new2(0.0, 0.0),
            Vector::new2(1.0, 0.0),
            Vector::new2(0.0, 1.0),
        ])
        .unwrap()
    }

    fn y1(x: f64) -> Vector {
        Vector::from_slice(&[x])
    }

    #[test]
    fn chord_examples() {
        let e2 = Direction::axis(2, 1);
        assert_eq!(chord(&square(), &y1(0.5), &e2).unwrap(), Interval::new(-1.0, 1.0));
        let c = chord(&triangle(), &y1(0.25), &e2).unwrap();
        assert!(c.lo.abs() < 1e-15 && (c.hi - 0.75).abs() < 1e-15);
        assert!(matches!(
            chord(&square(), &y1(1.5), &e2),
            Err(Error::OutsideProjection { .. })
        ));
    }

    #[test]
    fn projections() {
        let mut pts = Vec::new();
        for i in 0..8 {
            let s = |b: i32| if i & b == 0 { -1.0 } else { 1.0 };
            pts.push(Vector::new3(s(1), s(2), s(4)));
        }
        let cube = canonicalize(&pts).unwrap();
        let sq = project(&cube, &Direction::axis(3, 2)).unwrap();
        assert_eq!(sq, square());
        let seg = project(&square(), &Direction::axis(2, 0)).unwrap();
        assert_eq!(seg, Polytope::interval(-1.0, 1.0));
    }

    #[test]
    fn regular_tetrahedron_projects_to_equilateral_triangle() {
        let tet = canonicalize(&[
            Vector::new3(1.0, 1.0, 1.0),
            Vector::new3(1.0, -1.0, -1.0),
            Vector::new3(-1.0, 1.0, -1.0),
            Vector::new3(-1.0, -1.0, 1.0),
        ])
        .unwrap();
        let u = Direction::new(Vector::new3(1.0, 1.0, 1.0)).unwrap();
        let tri = project(&tet, &u).unwrap();
        assert_eq!(tri.vertices().len(), 3);
        let v = tri.vertices();
        let sides = [v[0].distance(&v[1]), v[1].distance(&v[2]), v[2].distance(&v[0])];
        // The face opposite the apex is orthogonal to u, so it projects isometrically.
        for s in sides {
            assert!((s - 8f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn structure_of_square_and_triangle() {
        let e2 = Direction::axis(2, 1);
        let (lo, hi) = chord_structure(&square(), &e2).unwrap();
        assert_eq!(lo.cells.len(), 1);
        assert_eq!(hi.cells.len(), 1);
        assert_eq!(lo.cells[0].functions[0].eval(&y1(0.3)), -1.0);
        assert_eq!(hi.cells[0].functions[0].eval(&y1(0.3)), 1.0);

        let (lo, hi) = chord_structure(&triangle(), &e2).unwrap();
        assert_eq!(lo.cells[0].region, Polytope::interval(0.0, 1.0));
        assert!(lo.cells[0].functions[0].eval(&y1(0.4)).abs() < 1e-15);
        assert!((hi.cells[0].functions[0].eval(&y1(0.4)) - 0.6).abs() < 1e-15);
    }

    fn random_polytope(rng: &mut ChaCha8Rng, dim: usize) -> Polytope {
        let pts: Vec<Vector> = (0..12)
            .map(|_| {
                let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                Vector::from_slice(&c)
            })
            .collect();
        canonicalize(&pts).unwrap()
    }

    #[test]
    fn reconstructed_functions_agree_with_chords() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [2, 3] {
            let p = random_polytope(&mut rng, dim);
            let u = Direction::new(Vector::from_slice(
                &(0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>(),
            ))
            .unwrap();
            let cs = ChordStructure::new(&p, &u).unwrap();
            let refined = cs.refined().unwrap();
            let mut checked = 0;
            while checked < 50 {
                let y = Vector::from_slice(
                    &(0..dim - 1).map(|_| rng.gen_range(-1.5..1.5)).collect::<Vec<_>>(),
                );
                if cs.projection.min_slack(&y) <= 1e-6 {
                    continue;
                }
                let c = chord(&p, &y, &u).unwrap();
                let a = cs.lower.eval(0, &y).unwrap();
                let b = cs.upper.eval(0, &y).unwrap();
                let r = refined.eval(1, &y).unwrap();
                assert!((a - c.lo).abs() < 1e-9, "{a} vs {}", c.lo);
                assert!((b - c.hi).abs() < 1e-9);
                assert!((r - c.hi).abs() < 1e-9);
                checked += 1;
            }
        }
    }

    #[test]
    fn fubini_on_chord_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2, 3] {
            for _ in 0..5 {
                let p = random_polytope(&mut rng, dim);
                let u = Direction::new(Vector::from_slice(
                    &(0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>(),
                ))
                .unwrap();
                let refined = ChordStructure::new(&p, &u).unwrap().refined().unwrap();
                let integral: f64 = refined
                    .cells
                    .iter()
                    .map(|c| c.functions[1].combine(1.0, &c.functions[0], -1.0).integrate(&c.region))
                    .sum();
                assert!((integral - p.volume()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn lower_is_convex_upper_is_concave() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_polytope(&mut rng, 3);
        let u = Direction::new(Vector::new3(0.2, -0.5, 0.9)).unwrap();
        let cs = ChordStructure::new(&p, &u).unwrap();
        let mut pts = Vec::new();
        while pts.len() < 40 {
            let y = Vector::new2(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            if cs.projection.min_slack(&y) > 1e-6 {
                pts.push(y);
            }
        }
        for w in pts.chunks(2) {
            let lam: f64 = rng.gen_range(0.05..0.95);
            let m = w[0] * lam + w[1] * (1.0 - lam);
            let c0 = chord(&p, &w[0], &u).unwrap();
            let c1 = chord(&p, &w[1], &u).unwrap();
            let cm = chord(&p, &m, &u).unwrap();
            assert!(cm.lo <= lam * c0.lo + (1.0 - lam) * c1.lo + 1e-9);
            assert!(cm.hi >= lam * c0.hi + (1.0 - lam) * c1.hi - 1e-9);
        }
    }
}
