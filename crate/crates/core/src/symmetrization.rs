//! Reflections, Steiner symmetrals, shadow systems and the affine-shear
//! rigidity detector.
//!
//! The Steiner family `K_t`, `t ∈ [−1, 1]`, replaces every chord
//! `[a(y), b(y)]` by `[(1−t)/2·a − (1+t)/2·b, (1−t)/2·b − (1+t)/2·a]`. On the
//! common refinement of the lower and upper chord subdivisions both bounds
//! are affine, so every snapshot is an exact polytope whose vertices sit over
//! the refinement's cell vertices.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3};

use crate::chord::{chord_in_frame, project_in_frame, ChordStructure, Interval};
use crate::error::{Error, Result};
use crate::polytope::{assemble, canonicalize, tolerance_for, Polytope};
use crate::subdivision::Subdivision;
use crate::vector::{Direction, Frame, Vector};

/// Mirror image of `p` in the hyperplane `u⊥`.
pub fn reflect(p: &Polytope, u: &Direction) -> Result<Polytope> {
    let n = p.dim();
    let mut m = Matrix3::identity();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] -= 2.0 * u[i] * u[j];
        }
    }
    p.affine_image(&m, &Vector::zeros(n))
}

/// The Steiner shadow system of a body along one direction.
///
/// The refinement is built once; snapshots at different `t` share it.
#[derive(Clone, Debug)]
pub struct SteinerFamily {
    structure: ChordStructure,
    refined: Subdivision,
    dim: usize,
}

impl SteinerFamily {
    pub fn new(p: &Polytope, u: &Direction) -> Result<Self> {
        let structure = ChordStructure::new(p, u)?;
        let refined = structure.refined()?;
        Ok(Self {
            structure,
            refined,
            dim: p.dim(),
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.structure.frame
    }

    pub fn chord_structure(&self) -> &ChordStructure {
        &self.structure
    }

    pub fn refinement(&self) -> &Subdivision {
        &self.refined
    }

    /// `K_t`; `t = −1` is the body, `t = 1` its reflection, `t = 0` the symmetral.
    pub fn snapshot(&self, t: f64) -> Result<Polytope> {
        if !(-1.0..=1.0).contains(&t) {
            return Err(Error::ParamOutOfRange {
                value: t,
                lo: -1.0,
                hi: 1.0,
            });
        }
        let frame = &self.structure.frame;
        let (p, q) = (0.5 * (1.0 - t), -0.5 * (1.0 + t));
        let mut points = Vec::new();
        let mut planes = Vec::new();
        for cell in &self.refined.cells {
            let (a, b) = (&cell.functions[0], &cell.functions[1]);
            let lower = a.combine(p, b, q);
            let upper = b.combine(p, a, q);
            for y in cell.region.vertices() {
                points.push(frame.lift(y, lower.eval(y)));
                points.push(frame.lift(y, upper.eval(y)));
            }
            // s − ⟨g, y⟩ ≤ h  and  −s + ⟨g', y⟩ ≤ −h'
            let nu = frame.lift(&(upper.linear * -1.0), 1.0);
            let r = nu.norm();
            planes.push((nu * (1.0 / r), upper.constant / r));
            let nl = frame.lift(&lower.linear, -1.0);
            let r = nl.norm();
            planes.push((nl * (1.0 / r), -lower.constant / r));
        }
        for f in self.structure.projection.facets() {
            planes.push((frame.lift(&f.normal, 0.0), f.offset));
        }
        let tol = tolerance_for(&points);
        assemble(self.dim, points, planes, tol)
    }
}

/// `St_u(P)`.
pub fn steiner_symmetral(p: &Polytope, u: &Direction) -> Result<Polytope> {
    SteinerFamily::new(p, u)?.snapshot(0.0)
}

/// `K_t` of the Steiner family of `p` along `u`.
pub fn steiner_snapshot(p: &Polytope, u: &Direction, t: f64) -> Result<Polytope> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::ParamOutOfRange {
            value: t,
            lo: -1.0,
            hi: 1.0,
        });
    }
    SteinerFamily::new(p, u)?.snapshot(t)
}

/// A shadow system `K_t = conv{x + t α(x) u : x ∈ A}` over `t ∈ [a, b]`.
#[derive(Clone, Debug)]
pub struct ShadowSystem {
    pub u: Direction,
    pub base_points: Vec<Vector>,
    pub speeds: Vec<f64>,
    pub t_range: Interval,
}

impl ShadowSystem {
    pub fn new(
        u: Direction,
        base_points: Vec<Vector>,
        speeds: Vec<f64>,
        t_range: Interval,
    ) -> Result<Self> {
        if base_points.len() != speeds.len() {
            return Err(Error::BadSpec(format!(
                "{} base points but {} speeds",
                base_points.len(),
                speeds.len()
            )));
        }
        if speeds.iter().any(|s| !s.is_finite()) || base_points.iter().any(|p| !p.is_finite()) {
            return Err(Error::BadSpec("non-finite base point or speed".into()));
        }
        if let Some(p) = base_points.iter().find(|p| p.dim() != u.dim()) {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                found: p.dim(),
            });
        }
        if !(t_range.lo <= t_range.hi) {
            return Err(Error::BadSpec("empty parameter interval".into()));
        }
        Ok(Self {
            u,
            base_points,
            speeds,
            t_range,
        })
    }

    pub fn snapshot(&self, t: f64) -> Result<Polytope> {
        vertex_shadow_snapshot(self, t)
    }
}

/// Hull of the moved base points at time `t`.
pub fn vertex_shadow_snapshot(s: &ShadowSystem, t: f64) -> Result<Polytope> {
    let tol = 1e-12 * (1.0 + t.abs());
    if t < s.t_range.lo - tol || t > s.t_range.hi + tol {
        return Err(Error::ParamOutOfRange {
            value: t,
            lo: s.t_range.lo,
            hi: s.t_range.hi,
        });
    }
    let pts: Vec<Vector> = s
        .base_points
        .iter()
        .zip(&s.speeds)
        .map(|(x, a)| *x + *s.u.as_vector() * (t * a))
        .collect();
    canonicalize(&pts)
}

/// `x ↦ x + Δ(⟨x, v⟩ + c) u`, which fixes every fiber `P_u x`.
#[derive(Clone, Debug)]
pub struct AffineShear {
    pub u: Direction,
    pub delta: f64,
    pub v: Vector,
    pub c: f64,
    /// Largest vertex mismatch `|A(x) − x'|` over matched pairs.
    pub residual: f64,
}

impl AffineShear {
    pub fn apply(&self, x: &Vector) -> Vector {
        *x + *self.u.as_vector() * (self.delta * (x.dot(&self.v) + self.c))
    }
}

#[derive(Clone, Debug)]
pub enum ShearFit {
    Fit(AffineShear),
    NoFit(String),
}

impl ShearFit {
    pub fn shear(&self) -> Option<&AffineShear> {
        match self {
            ShearFit::Fit(s) => Some(s),
            ShearFit::NoFit(_) => None,
        }
    }
}

/// Projection-matching tolerance for vertex correspondence.
const MATCH_TOL: f64 = 1e-7;
/// Largest residual accepted as a fit.
pub const FIT_TOL: f64 = 1e-6;

/// Groups vertices into fibers of `P_u`, each sorted by height.
fn fibers(p: &Polytope, frame: &Frame) -> Vec<(Vector, Vec<usize>)> {
    let mut out: Vec<(Vector, Vec<usize>)> = Vec::new();
    for (i, v) in p.vertices().iter().enumerate() {
        let y = frame.project(v);
        match out.iter_mut().find(|(c, _)| c.distance(&y) <= MATCH_TOL) {
            Some((_, members)) => members.push(i),
            None => out.push((y, vec![i])),
        }
    }
    for (_, members) in out.iter_mut() {
        members.sort_by(|&a, &b| {
            frame
                .height(&p.vertices()[a])
                .total_cmp(&frame.height(&p.vertices()[b]))
        });
    }
    out
}

/// Looks for a fiber-preserving shear mapping `pa` onto `pt`.
pub fn fit_affine_shear(
    pa: &Polytope,
    pt: &Polytope,
    u: &Direction,
    delta: f64,
) -> Result<ShearFit> {
    if delta == 0.0 {
        return Err(Error::ZeroDelta);
    }
    if pa.dim() != pt.dim() || pa.dim() != u.dim() {
        return Ok(ShearFit::NoFit("dimension mismatch".into()));
    }
    if pa.vertices().len() != pt.vertices().len() {
        return Ok(ShearFit::NoFit(format!(
            "vertex counts differ: {} vs {}",
            pa.vertices().len(),
            pt.vertices().len()
        )));
    }
    let frame = Frame::new(*u);
    let fa = fibers(pa, &frame);
    let mut ft = fibers(pt, &frame);
    let mut pairs: Vec<(Vector, Vector)> = Vec::with_capacity(pa.vertices().len());
    for (y, members) in &fa {
        let Some(k) = ft.iter().position(|(c, _)| c.distance(y) <= MATCH_TOL) else {
            return Ok(ShearFit::NoFit(format!("no fiber over {y} in target")));
        };
        let (_, target) = ft.swap_remove(k);
        if target.len() != members.len() {
            return Ok(ShearFit::NoFit(format!("fiber over {y} changes size")));
        }
        for (&i, &j) in members.iter().zip(&target) {
            pairs.push((pa.vertices()[i], pt.vertices()[j]));
        }
    }
    let n = pa.dim();
    let rows = pairs.len();
    let mut a = DMatrix::zeros(rows, n + 1);
    let mut rhs = DVector::zeros(rows);
    for (r, (x, xp)) in pairs.iter().enumerate() {
        for k in 0..n {
            a[(r, k)] = x[k];
        }
        a[(r, n)] = 1.0;
        rhs[r] = (*xp - *x).dot(u) / delta;
    }
    let sol = a
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::numerical(format!("least squares failed: {e}")))?;
    let v = Vector::from_slice(&sol.as_slice()[..n]);
    let shear = AffineShear {
        u: *u,
        delta,
        v,
        c: sol[n],
        residual: 0.0,
    };
    let residual = pairs
        .iter()
        .map(|(x, xp)| shear.apply(x).distance(xp))
        .fold(0.0_f64, f64::max);
    if residual > FIT_TOL {
        return Ok(ShearFit::NoFit(format!("residual {residual:.3e}")));
    }
    Ok(ShearFit::Fit(AffineShear { residual, ..shear }))
}

/// Base points strictly inside the projection, on a regular grid, kept at
/// least 1% of the inradius away from the boundary.
fn chord_sample(base: &Polytope, m: usize) -> Vec<Vector> {
    match base.dim() {
        1 => {
            let (lo, hi) = (base.vertices()[0][0], base.vertices()[1][0]);
            let margin = 0.01 * 0.5 * (hi - lo);
            let (a, b) = (lo + margin, hi - margin);
            (0..m)
                .map(|k| Vector::from_slice(&[a + (b - a) * k as f64 / (m - 1) as f64]))
                .collect()
        }
        _ => {
            let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for v in base.vertices() {
                for i in 0..2 {
                    lo[i] = lo[i].min(v[i]);
                    hi[i] = hi[i].max(v[i]);
                }
            }
            let mut k = (m as f64).sqrt().ceil() as usize + 1;
            loop {
                let mut grid = Vec::with_capacity(k * k);
                for i in 0..k {
                    for j in 0..k {
                        let y = Vector::new2(
                            lo[0] + (hi[0] - lo[0]) * (i as f64 + 0.5) / k as f64,
                            lo[1] + (hi[1] - lo[1]) * (j as f64 + 0.5) / k as f64,
                        );
                        grid.push((base.min_slack(&y), y));
                    }
                }
                let inradius = grid.iter().map(|g| g.0).fold(0.0_f64, f64::max);
                let margin = 0.01 * inradius;
                let inside: Vec<Vector> = grid
                    .into_iter()
                    .filter(|g| g.0 > margin)
                    .map(|g| g.1)
                    .collect();
                if inside.len() >= m {
                    return inside;
                }
                k = k + k / 3 + 1;
            }
        }
    }
}

/// Distance of the chord midpoints parallel to `u` from their best-fit
/// hyperplane: RMS over at least `m` chords, divided by the diameter of `p`.
pub fn midpoint_deviation(p: &Polytope, u: &Direction, m: usize) -> Result<f64> {
    let n = p.dim();
    if m < n + 2 {
        return Err(Error::TooFewChords {
            required: n + 2,
            found: m,
        });
    }
    let frame = Frame::new(*u);
    let base = project_in_frame(p, &frame)?;
    let mids: Vec<Vector> = chord_sample(&base, m)
        .iter()
        .map(|y| Ok(frame.lift(y, chord_in_frame(p, y, &frame)?.midpoint())))
        .collect::<Result<_>>()?;
    let mut c = Vector::zeros(n);
    for x in &mids {
        c += *x;
    }
    c = c * (1.0 / mids.len() as f64);
    let normal = match n {
        2 => {
            let mut cov = Matrix2::zeros();
            for x in &mids {
                let d = *x - c;
                for i in 0..2 {
                    for j in 0..2 {
                        cov[(i, j)] += d[i] * d[j];
                    }
                }
            }
            let eig = cov.symmetric_eigen();
            let k = eig.eigenvalues.imin();
            Vector::new2(eig.eigenvectors[(0, k)], eig.eigenvectors[(1, k)])
        }
        _ => {
            let mut cov = Matrix3::zeros();
            for x in &mids {
                let d = *x - c;
                for i in 0..3 {
                    for j in 0..3 {
                        cov[(i, j)] += d[i] * d[j];
                    }
                }
            }
            let eig = cov.symmetric_eigen();
            let k = eig.eigenvalues.imin();
            Vector::new3(
                eig.eigenvectors[(0, k)],
                eig.eigenvectors[(1, k)],
                eig.eigenvectors[(2, k)],
            )
        }
    };
    let ms: f64 = mids
        .iter()
        .map(|x| (*x - c).dot(&normal).powi(2))
        .sum::<f64>()
        / mids.len() as f64;
    Ok(ms.sqrt() / p.diameter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::hausdorff_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(pts: &[(f64, f64)]) -> Polytope {
        canonicalize(&pts.iter().map(|&(x, y)| Vector::new2(x, y)).collect::<Vec<_>>()).unwrap()
    }

    fn square() -> Polytope {
        poly(&[(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)])
    }

    fn triangle() -> Polytope {
        poly(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
    }

    fn random_body(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Polytope {
        let pts: Vec<Vector> = (0..count)
            .map(|_| {
                Vector::from_slice(&(0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>())
            })
            .collect();
        canonicalize(&pts).unwrap()
    }

    fn random_dir(rng: &mut ChaCha8Rng, dim: usize) -> Direction {
        Direction::new(Vector::from_slice(
            &(0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>(),
        ))
        .unwrap()
    }

    #[test]
    fn reflections() {
        let e1 = Direction::axis(2, 0);
        assert_eq!(reflect(&square(), &e1).unwrap(), square());
        let r = reflect(&triangle(), &e1).unwrap();
        assert_eq!(r, poly(&[(0.0, 0.0), (-1.0, 0.0), (0.0, 1.0)]));
        assert_eq!(reflect(&r, &e1).unwrap(), triangle());
    }

    #[test]
    fn symmetral_examples() {
        let e2 = Direction::axis(2, 1);
        let s = steiner_symmetral(&square(), &e2).unwrap();
        assert!(hausdorff_distance(&s, &square()).unwrap() < 1e-15);
        let s = steiner_symmetral(&triangle(), &e2).unwrap();
        let expected = poly(&[(0.0, -0.5), (0.0, 0.5), (1.0, 0.0)]);
        assert!(hausdorff_distance(&s, &expected).unwrap() < 1e-15);
    }

    #[test]
    fn snapshot_endpoints_and_volume() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [2, 3] {
            for _ in 0..4 {
                let p = random_body(&mut rng, dim, 10);
                let u = random_dir(&mut rng, dim);
                let fam = SteinerFamily::new(&p, &u).unwrap();
                let k_minus = fam.snapshot(-1.0).unwrap();
                assert!(hausdorff_distance(&k_minus, &p).unwrap() < 1e-9);
                let k_plus = fam.snapshot(1.0).unwrap();
                assert!(hausdorff_distance(&k_plus, &reflect(&p, &u).unwrap()).unwrap() < 1e-9);
                let sym = fam.snapshot(0.0).unwrap();
                let mirrored = reflect(&sym, &u).unwrap();
                assert!(hausdorff_distance(&sym, &mirrored).unwrap() < 1e-9);
                for t in [-0.7, -0.2, 0.0, 0.45, 0.9] {
                    let k = fam.snapshot(t).unwrap();
                    assert!((k.volume() - p.volume()).abs() < 1e-8);
                }
            }
        }
        assert!(matches!(
            steiner_snapshot(&square(), &Direction::axis(2, 1), 1.5),
            Err(Error::ParamOutOfRange { .. })
        ));
    }

    #[test]
    fn vertex_shadow_examples() {
        let base: Vec<Vector> = square().vertices().to_vec();
        let still = ShadowSystem::new(
            Direction::axis(2, 1),
            base.clone(),
            vec![0.0; 4],
            Interval::new(-1.0, 1.0),
        )
        .unwrap();
        assert_eq!(still.snapshot(0.7).unwrap(), square());
        assert_eq!(still.snapshot(0.0).unwrap(), square());
        let moving = ShadowSystem::new(
            Direction::axis(2, 1),
            base,
            vec![1.0; 4],
            Interval::new(-1.0, 1.0),
        )
        .unwrap();
        let k = moving.snapshot(0.3).unwrap();
        let expected = square().translate(&Vector::new2(0.0, 0.3));
        assert!(hausdorff_distance(&k, &expected).unwrap() < 1e-15);
        assert!(matches!(
            moving.snapshot(1.2),
            Err(Error::ParamOutOfRange { .. })
        ));
    }

    #[test]
    fn shear_fits() {
        let e2 = Direction::axis(2, 1);
        let unit = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let id = fit_affine_shear(&unit, &unit, &e2, 0.4).unwrap();
        let id = id.shear().unwrap();
        assert!(id.v.norm() < 1e-12 && id.c.abs() < 1e-12 && id.residual < 1e-12);

        let sheared = poly(&[(0.0, 0.0), (1.0, 0.3), (1.0, 1.3), (0.0, 1.0)]);
        let fit = fit_affine_shear(&unit, &sheared, &e2, 1.0).unwrap();
        let s = fit.shear().unwrap();
        assert!(s.v.distance(&Vector::new2(0.3, 0.0)) < 1e-12);
        assert!(s.c.abs() < 1e-12);

        let th = 10f64.to_radians();
        let rot = unit
            .affine_image(
                &Matrix3::new(th.cos(), -th.sin(), 0.0, th.sin(), th.cos(), 0.0, 0.0, 0.0, 1.0),
                &Vector::zeros(2),
            )
            .unwrap();
        assert!(matches!(
            fit_affine_shear(&unit, &rot, &e2, 1.0).unwrap(),
            ShearFit::NoFit(_)
        ));
        assert!(matches!(
            fit_affine_shear(&unit, &unit, &e2, 0.0),
            Err(Error::ZeroDelta)
        ));
    }

    #[test]
    fn midpoint_deviation_examples() {
        let e2 = Direction::axis(2, 1);
        assert!(midpoint_deviation(&square(), &e2, 50).unwrap() < 1e-9);
        let unit = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let oblique = Direction::new(Vector::new2(1.0, 2.0)).unwrap();
        assert!(midpoint_deviation(&unit, &oblique, 50).unwrap() > 0.01);
        assert!(matches!(
            midpoint_deviation(&unit, &e2, 3),
            Err(Error::TooFewChords { .. })
        ));
    }
}
