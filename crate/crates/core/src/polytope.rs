//! Full-dimensional convex polytopes carried in vertex and facet form at once.
//!
//! Every constructor funnels through [`assemble`], which reconciles a set of
//! candidate points with a set of supporting planes: a candidate is a vertex
//! iff the normals of its tight planes span the space, and a plane is a facet
//! iff its tight vertices span a hyperplane. Vertices are stored in
//! lexicographic order; facet vertex lists are cyclic (counter-clockwise seen
//! from outside) in dimension 3.

use std::collections::HashMap;

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::hull;
use crate::vector::{Vector, MAX_DIM};

/// Global incidence tolerance, scaled by the coordinate magnitude of the input.
pub const TOL: f64 = 1e-9;

/// Smallest |sin| between tight normals that still counts as independent.
const RANK_TOL: f64 = 1e-10;

/// Absolute incidence tolerance for a point set.
pub fn tolerance_for(points: &[Vector]) -> f64 {
    let scale = points.iter().fold(1.0_f64, |m, p| m.max(p.max_abs()));
    TOL * scale
}

/// An outward facet `⟨normal, x⟩ ≤ offset` with its incident vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vector,
    pub offset: f64,
    pub vertices: Vec<usize>,
}

impl Facet {
    #[inline]
    pub fn slack(&self, x: &Vector) -> f64 {
        self.offset - self.normal.dot(x)
    }
}

/// A full-dimensional convex polytope of dimension 1, 2 or 3.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Facet>,
    /// Facets incident to each vertex, in cyclic order around the vertex.
    vertex_facets: Vec<Vec<usize>>,
}

/// Equal vertex lists and equal facet incidences; normals are derived data
/// and may differ in the last bits depending on how they were computed.
impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        let key = |p: &Polytope| {
            let mut k: Vec<Vec<usize>> = p
                .facets
                .iter()
                .map(|f| {
                    let mut v = f.vertices.clone();
                    v.sort_unstable();
                    v
                })
                .collect();
            k.sort();
            k
        };
        self.dim == other.dim && self.vertices == other.vertices && key(self) == key(other)
    }
}

/// Integrals of 1, x and x xᵀ over a body, taken relative to some origin.
#[derive(Clone, Copy, Debug)]
pub struct Moments {
    pub volume: f64,
    pub first: Vector,
    pub second: Matrix3<f64>,
}

impl Moments {
    pub fn zero(dim: usize) -> Self {
        Self {
            volume: 0.0,
            first: Vector::zeros(dim),
            second: Matrix3::zeros(),
        }
    }

    /// Adds the simplex with the given vertices (relative to the origin).
    pub fn add_simplex(&mut self, verts: &[Vector]) {
        let n = self.first.dim();
        debug_assert_eq!(verts.len(), n + 1);
        let vol = simplex_volume(verts);
        if vol == 0.0 {
            return;
        }
        let mut sum = Vector::zeros(n);
        for w in verts {
            sum += *w;
        }
        self.volume += vol;
        self.first += sum * (vol / (n as f64 + 1.0));
        let k = vol / ((n as f64 + 1.0) * (n as f64 + 2.0));
        for i in 0..n {
            for j in 0..n {
                let mut acc = sum[i] * sum[j];
                for w in verts {
                    acc += w[i] * w[j];
                }
                self.second[(i, j)] += k * acc;
            }
        }
    }

    /// First moment divided by volume.
    pub fn mean(&self) -> Vector {
        self.first * (1.0 / self.volume)
    }
}

/// Unsigned volume of a simplex given by `n + 1` vertices.
pub fn simplex_volume(v: &[Vector]) -> f64 {
    match v.len() {
        2 => (v[1][0] - v[0][0]).abs(),
        3 => (v[1] - v[0]).cross2(&(v[2] - v[0])).abs() / 2.0,
        4 => (v[1] - v[0]).cross(&(v[2] - v[0])).dot(&(v[3] - v[0])).abs() / 6.0,
        k => panic!("simplex with {k} vertices"),
    }
}

/// Convex hull of `points` with redundant points removed and facets enumerated.
///
/// Idempotent: the vertices of the result are copied bit-for-bit from the
/// input, so canonicalizing them again reproduces the same polytope.
pub fn canonicalize(points: &[Vector]) -> Result<Polytope> {
    let first = points
        .first()
        .ok_or_else(|| Error::degenerate("empty point set"))?;
    let dim = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    if !(1..=MAX_DIM).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::degenerate("non-finite coordinate"));
    }
    if points.len() < dim + 1 {
        return Err(Error::degenerate(format!(
            "{} points cannot span dimension {dim}",
            points.len()
        )));
    }
    let tol = tolerance_for(points);
    let pts = dedupe_points(points.to_vec(), tol);
    match dim {
        1 => {
            let (lo, hi) = (pts[0][0], pts[pts.len() - 1][0]);
            if hi - lo <= tol {
                return Err(Error::degenerate("segment has zero length"));
            }
            Ok(Polytope::interval(lo, hi))
        }
        2 => {
            let cycle = hull::hull2(&pts, tol)?;
            let verts: Vec<Vector> = cycle.iter().map(|&i| pts[i]).collect();
            Ok(Polytope::from_ccw_cycle(&verts))
        }
        _ => {
            let tris = hull::hull3(&pts, tol)?;
            let mut used: Vec<usize> = tris.iter().flat_map(|t| t.iter().copied()).collect();
            used.sort_unstable();
            used.dedup();
            let planes: Vec<(Vector, f64)> = tris
                .iter()
                .filter_map(|t| {
                    let (a, b, c) = (pts[t[0]], pts[t[1]], pts[t[2]]);
                    let n = (b - a).cross(&(c - a)).normalized()?;
                    Some((n, n.dot(&a)))
                })
                .collect();
            let cand: Vec<Vector> = used.iter().map(|&i| pts[i]).collect();
            let p = assemble(3, cand, planes, tol)?;
            for x in &pts {
                let worst = p.max_violation(x);
                if worst > 100.0 * tol {
                    return Err(Error::numerical(format!(
                        "hull misses input point {x} by {worst:.3e}"
                    )));
                }
            }
            Ok(p)
        }
    }
}

fn dedupe_points(mut pts: Vec<Vector>, tol: f64) -> Vec<Vector> {
    pts.sort_by(|a, b| a.lex_cmp(b));
    let mut out: Vec<Vector> = Vec::with_capacity(pts.len());
    for p in pts {
        let dup = out
            .iter()
            .rev()
            .take_while(|q| p[0] - q[0] <= tol)
            .any(|q| q.distance(&p) <= tol);
        if !dup {
            out.push(p);
        }
    }
    out
}

fn dedupe_planes(mut planes: Vec<(Vector, f64)>, tol: f64) -> Vec<(Vector, f64)> {
    planes.sort_by(|a, b| a.0.lex_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut out: Vec<(Vector, f64)> = Vec::with_capacity(planes.len());
    for (n, c) in planes {
        let dup = out
            .iter()
            .rev()
            .take_while(|(m, _)| n[0] - m[0] <= 1e-9)
            .any(|(m, d)| m.distance(&n) <= 1e-9 && (c - d).abs() <= tol);
        if !dup {
            out.push((n, c));
        }
    }
    out
}

fn spans_space(normals: &[Vector], dim: usize) -> bool {
    match dim {
        1 => !normals.is_empty(),
        2 => normals
            .iter()
            .enumerate()
            .any(|(i, a)| normals[i + 1..].iter().any(|b| a.cross2(b).abs() > RANK_TOL)),
        _ => {
            let k = normals.len();
            for i in 0..k {
                for j in i + 1..k {
                    let c = normals[i].cross(&normals[j]);
                    if c.norm() <= RANK_TOL {
                        continue;
                    }
                    if normals[j + 1..].iter().any(|n| c.dot(n).abs() > RANK_TOL) {
                        return true;
                    }
                }
            }
            false
        }
    }
}

/// Affine dimension of a point set is at least `target`.
fn affinely_spans(points: &[Vector], target: usize, tol: f64) -> bool {
    if points.len() < target + 1 {
        return false;
    }
    let o = points[0];
    match target {
        0 => true,
        1 => points.iter().any(|p| p.distance(&o) > tol),
        _ => {
            let Some(a) = points.iter().find(|p| p.distance(&o) > tol) else {
                return false;
            };
            let d = *a - o;
            points.iter().any(|p| {
                let e = *p - o;
                if d.dim() == 3 {
                    d.cross(&e).norm() > tol * d.norm()
                } else {
                    d.cross2(&e).abs() > tol * d.norm()
                }
            })
        }
    }
}

/// Builds a polytope from candidate points and candidate supporting planes.
///
/// Every candidate must satisfy every plane within `tol`; planes must have
/// unit normals. Candidates that are not vertices and planes that are not
/// facets are discarded.
pub fn assemble(
    dim: usize,
    candidates: Vec<Vector>,
    planes: Vec<(Vector, f64)>,
    tol: f64,
) -> Result<Polytope> {
    let pts = dedupe_points(candidates, tol);
    let planes = dedupe_planes(planes, tol);
    let mut tight_planes: Vec<Vec<usize>> = Vec::with_capacity(pts.len());
    for p in &pts {
        let mut tight = Vec::new();
        for (k, (n, c)) in planes.iter().enumerate() {
            let d = n.dot(p) - c;
            if d > 1e3 * tol {
                return Err(Error::numerical(format!(
                    "candidate {p} violates a supporting plane by {d:.3e}"
                )));
            }
            if d.abs() <= tol {
                tight.push(k);
            }
        }
        tight_planes.push(tight);
    }
    let mut vertices: Vec<Vector> = Vec::new();
    let mut vertex_planes: Vec<Vec<usize>> = Vec::new();
    for (p, tight) in pts.iter().zip(tight_planes) {
        let normals: Vec<Vector> = tight.iter().map(|&k| planes[k].0).collect();
        if spans_space(&normals, dim) {
            vertices.push(*p);
            vertex_planes.push(tight);
        }
    }
    let mut plane_vertices: Vec<Vec<usize>> = vec![Vec::new(); planes.len()];
    for (vi, tight) in vertex_planes.iter().enumerate() {
        for &k in tight {
            plane_vertices[k].push(vi);
        }
    }
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    let mut facets: Vec<Facet> = Vec::new();
    for (k, verts) in plane_vertices.into_iter().enumerate() {
        let coords: Vec<Vector> = verts.iter().map(|&i| vertices[i]).collect();
        if !affinely_spans(&coords, dim - 1, tol) {
            continue;
        }
        if seen.insert(verts.clone(), ()).is_some() {
            continue;
        }
        facets.push(Facet {
            normal: planes[k].0,
            offset: planes[k].1,
            vertices: verts,
        });
    }
    Polytope::finish(dim, vertices, facets, tol)
}

impl Polytope {
    /// The segment `[lo, hi]` as a 1-dimensional polytope.
    pub fn interval(lo: f64, hi: f64) -> Self {
        assert!(lo < hi, "interval [{lo}, {hi}] is empty");
        Self {
            dim: 1,
            vertices: vec![Vector::from_slice(&[lo]), Vector::from_slice(&[hi])],
            facets: vec![
                Facet {
                    normal: Vector::from_slice(&[-1.0]),
                    offset: -lo,
                    vertices: vec![0],
                },
                Facet {
                    normal: Vector::from_slice(&[1.0]),
                    offset: hi,
                    vertices: vec![1],
                },
            ],
            vertex_facets: vec![vec![0], vec![1]],
        }
    }

    /// Polygon from vertices already in strictly convex counter-clockwise order.
    pub(crate) fn from_ccw_cycle(cycle: &[Vector]) -> Self {
        let m = cycle.len();
        let mut facets = Vec::with_capacity(m);
        for i in 0..m {
            let (a, b) = (cycle[i], cycle[(i + 1) % m]);
            let d = b - a;
            let normal = Vector::new2(d[1], -d[0])
                .normalized()
                .expect("distinct hull vertices");
            let offset = 0.5 * (normal.dot(&a) + normal.dot(&b));
            facets.push(Facet {
                normal,
                offset,
                vertices: vec![i, (i + 1) % m],
            });
        }
        let tol = tolerance_for(cycle);
        Self::finish(2, cycle.to_vec(), facets, tol).expect("valid convex cycle")
    }

    /// Orders incidences, sorts vertices lexicographically and facets by normal.
    fn finish(dim: usize, vertices: Vec<Vector>, mut facets: Vec<Facet>, tol: f64) -> Result<Self> {
        if vertices.len() < dim + 1 || facets.len() < dim + 1 {
            return Err(Error::degenerate(format!(
                "{} vertices and {} facets do not bound a {dim}-polytope",
                vertices.len(),
                facets.len()
            )));
        }
        for f in facets.iter_mut() {
            order_facet(dim, &vertices, f);
        }
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by(|&a, &b| vertices[a].lex_cmp(&vertices[b]));
        let mut remap = vec![0; vertices.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let vertices: Vec<Vector> = order.iter().map(|&i| vertices[i]).collect();
        for f in facets.iter_mut() {
            for v in f.vertices.iter_mut() {
                *v = remap[*v];
            }
            if dim == 3 {
                // Rotate the cycle to start at its smallest index.
                let start = (0..f.vertices.len())
                    .min_by_key(|&i| f.vertices[i])
                    .unwrap_or(0);
                f.vertices.rotate_left(start);
            }
        }
        facets.sort_by(|a, b| a.normal.lex_cmp(&b.normal).then(a.offset.total_cmp(&b.offset)));

        let mut vertex_facets: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        for (fi, f) in facets.iter().enumerate() {
            for &v in &f.vertices {
                vertex_facets[v].push(fi);
            }
        }
        for (vi, inc) in vertex_facets.iter_mut().enumerate() {
            if inc.len() < dim {
                return Err(Error::numerical(format!(
                    "vertex {} lies on only {} facets",
                    vertices[vi],
                    inc.len()
                )));
            }
            if dim == 3 {
                order_around(&facets, inc);
            }
        }
        let p = Self {
            dim,
            vertices,
            facets,
            vertex_facets,
        };
        for v in &p.vertices {
            let worst = p.max_violation(v);
            if worst > 100.0 * tol {
                return Err(Error::numerical(format!(
                    "vertex {v} violates a facet by {worst:.3e}"
                )));
            }
        }
        Ok(p)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    #[inline]
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Facets incident to vertex `v`, cyclically ordered in dimension 3.
    pub fn vertex_facets(&self, v: usize) -> &[usize] {
        &self.vertex_facets[v]
    }

    pub fn tolerance(&self) -> f64 {
        tolerance_for(&self.vertices)
    }

    /// Largest amount by which `x` lies beyond a facet plane (negative inside).
    pub fn max_violation(&self, x: &Vector) -> f64 {
        self.facets
            .iter()
            .map(|f| -f.slack(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest facet slack at `x`; positive iff `x` is interior.
    pub fn min_slack(&self, x: &Vector) -> f64 {
        -self.max_violation(x)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.max_violation(x) <= tol
    }

    pub fn vertex_centroid(&self) -> Vector {
        let mut c = Vector::zeros(self.dim);
        for v in &self.vertices {
            c += *v;
        }
        c * (1.0 / self.vertices.len() as f64)
    }

    /// Calls `f` with each simplex of the fan triangulation from `apex`.
    pub fn for_each_simplex(&self, apex: &Vector, mut f: impl FnMut(&[Vector])) {
        match self.dim {
            1 => {
                for v in &self.vertices {
                    f(&[*apex, *v]);
                }
            }
            2 => {
                for fa in &self.facets {
                    f(&[
                        *apex,
                        self.vertices[fa.vertices[0]],
                        self.vertices[fa.vertices[1]],
                    ]);
                }
            }
            _ => {
                for fa in &self.facets {
                    let vs = &fa.vertices;
                    let v0 = self.vertices[vs[0]];
                    for k in 1..vs.len() - 1 {
                        f(&[
                            *apex,
                            v0,
                            self.vertices[vs[k]],
                            self.vertices[vs[k + 1]],
                        ]);
                    }
                }
            }
        }
    }

    /// Moments relative to `origin`.
    pub fn moments_about(&self, origin: &Vector) -> Moments {
        let apex = self.vertex_centroid();
        let mut m = Moments::zero(self.dim);
        let mut rel = [Vector::zeros(self.dim); MAX_DIM + 1];
        self.for_each_simplex(&apex, |s| {
            for (r, v) in rel.iter_mut().zip(s) {
                *r = *v - *origin;
            }
            m.add_simplex(&rel[..s.len()]);
        });
        m
    }

    /// Lebesgue measure via the fan triangulation from the vertex centroid.
    pub fn volume(&self) -> f64 {
        let apex = self.vertex_centroid();
        let mut vol = 0.0;
        self.for_each_simplex(&apex, |s| vol += simplex_volume(s));
        vol
    }

    /// Volume-weighted centroid.
    pub fn centroid(&self) -> Vector {
        let apex = self.vertex_centroid();
        let m = self.moments_about(&apex);
        apex + m.mean()
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.distance(b));
            }
        }
        d
    }

    /// Unordered vertex pairs joined by an edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = Vec::new();
        match self.dim {
            1 => e.push((0, 1)),
            2 => {
                for f in &self.facets {
                    let (a, b) = (f.vertices[0], f.vertices[1]);
                    e.push((a.min(b), a.max(b)));
                }
            }
            _ => {
                for f in &self.facets {
                    let k = f.vertices.len();
                    for i in 0..k {
                        let (a, b) = (f.vertices[i], f.vertices[(i + 1) % k]);
                        e.push((a.min(b), a.max(b)));
                    }
                }
            }
        }
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Image under `x ↦ A x + b` for invertible `A` (upper-left `dim × dim` block).
    pub fn affine_image(&self, a: &Matrix3<f64>, b: &Vector) -> Result<Polytope> {
        let n = self.dim;
        let block = a.fixed_view::<3, 3>(0, 0).into_owned();
        let mut lin = Matrix3::identity();
        for i in 0..n {
            for j in 0..n {
                lin[(i, j)] = block[(i, j)];
            }
        }
        let det = lin.determinant();
        if det.abs() < 1e-14 {
            return Err(Error::degenerate("affine map is singular"));
        }
        let inv_t = lin
            .try_inverse()
            .ok_or_else(|| Error::degenerate("affine map is singular"))?
            .transpose();
        let apply = |m: &Matrix3<f64>, v: &Vector| -> Vector {
            let mut out = Vector::zeros(n);
            for i in 0..n {
                out[i] = (0..n).map(|j| m[(i, j)] * v[j]).sum();
            }
            out
        };
        let vertices: Vec<Vector> = self.vertices.iter().map(|v| apply(&lin, v) + *b).collect();
        let facets: Vec<Facet> = self
            .facets
            .iter()
            .map(|f| {
                let normal = apply(&inv_t, &f.normal)
                    .normalized()
                    .expect("invertible map keeps normals non-zero");
                let offset = f
                    .vertices
                    .iter()
                    .map(|&v| normal.dot(&vertices[v]))
                    .sum::<f64>()
                    / f.vertices.len() as f64;
                Facet {
                    normal,
                    offset,
                    vertices: f.vertices.clone(),
                }
            })
            .collect();
        let tol = tolerance_for(&vertices);
        Self::finish(n, vertices, facets, tol)
    }

    pub fn translate(&self, w: &Vector) -> Polytope {
        let mut p = self.clone();
        for v in p.vertices.iter_mut() {
            *v += *w;
        }
        for f in p.facets.iter_mut() {
            f.offset += f.normal.dot(w);
        }
        p
    }

    /// Homothety `x ↦ center + s (x − center)` with `s > 0`.
    pub fn scale_about(&self, center: &Vector, s: f64) -> Polytope {
        assert!(s > 0.0, "scale factor must be positive");
        let mut p = self.clone();
        for v in p.vertices.iter_mut() {
            *v = *center + (*v - *center) * s;
        }
        for f in p.facets.iter_mut() {
            f.offset = f.normal.dot(center) + s * (f.offset - f.normal.dot(center));
        }
        p
    }

    /// Intersection with the halfspace `⟨normal, x⟩ ≤ offset`.
    pub fn cut(&self, normal: &Vector, offset: f64) -> Result<Polytope> {
        let normal = normal
            .normalized()
            .ok_or_else(|| Error::degenerate("zero cut normal"))?;
        let tol = self.tolerance();
        let side: Vec<f64> = self.vertices.iter().map(|v| normal.dot(v) - offset).collect();
        let mut cand: Vec<Vector> = self
            .vertices
            .iter()
            .zip(&side)
            .filter(|(_, &s)| s <= tol)
            .map(|(v, _)| *v)
            .collect();
        for (a, b) in self.edges() {
            let (sa, sb) = (side[a], side[b]);
            if (sa < -tol && sb > tol) || (sa > tol && sb < -tol) {
                let t = sa / (sa - sb);
                cand.push(self.vertices[a] + (self.vertices[b] - self.vertices[a]) * t);
            }
        }
        let mut planes: Vec<(Vector, f64)> =
            self.facets.iter().map(|f| (f.normal, f.offset)).collect();
        planes.push((normal, offset));
        assemble(self.dim, cand, planes, tol)
    }

    /// Euclidean distance from `x` to the polytope (zero inside).
    pub fn distance_to(&self, x: &Vector) -> f64 {
        if self.max_violation(x) <= 0.0 {
            return 0.0;
        }
        match self.dim {
            1 => (self.vertices[0][0] - x[0])
                .max(x[0] - self.vertices[1][0])
                .max(0.0),
            2 => self
                .facets
                .iter()
                .map(|f| {
                    segment_distance(
                        x,
                        &self.vertices[f.vertices[0]],
                        &self.vertices[f.vertices[1]],
                    )
                })
                .fold(f64::INFINITY, f64::min),
            _ => self
                .facets
                .iter()
                .map(|f| self.facet_distance(f, x))
                .fold(f64::INFINITY, f64::min),
        }
    }

    fn facet_distance(&self, f: &Facet, x: &Vector) -> f64 {
        let k = f.vertices.len();
        let h = f.normal.dot(x) - f.offset;
        let proj = *x - f.normal * h;
        let inside = (0..k).all(|i| {
            let a = self.vertices[f.vertices[i]];
            let b = self.vertices[f.vertices[(i + 1) % k]];
            (b - a).cross(&(proj - a)).dot(&f.normal) >= 0.0
        });
        if inside {
            return h.abs();
        }
        (0..k)
            .map(|i| {
                segment_distance(
                    x,
                    &self.vertices[f.vertices[i]],
                    &self.vertices[f.vertices[(i + 1) % k]],
                )
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(x: &Vector, a: &Vector, b: &Vector) -> f64 {
    let d = *b - *a;
    let len2 = d.norm_squared();
    let t = if len2 > 0.0 {
        ((*x - *a).dot(&d) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    x.distance(&(*a + d * t))
}

/// Orients a 2D edge along the boundary or sorts a 3D facet cycle by angle.
fn order_facet(dim: usize, vertices: &[Vector], f: &mut Facet) {
    match dim {
        2 => {
            let (a, b) = (vertices[f.vertices[0]], vertices[f.vertices[1]]);
            let d = b - a;
            if d[1] * f.normal[0] - d[0] * f.normal[1] < 0.0 {
                f.vertices.swap(0, 1);
            }
        }
        3 => {
            let pts: Vec<Vector> = f.vertices.iter().map(|&i| vertices[i]).collect();
            let mut c = Vector::zeros(3);
            for p in &pts {
                c += *p;
            }
            c = c * (1.0 / pts.len() as f64);
            let n = f.normal;
            let far = pts
                .iter()
                .max_by(|a, b| a.distance(&c).total_cmp(&b.distance(&c)))
                .copied()
                .unwrap_or(c);
            let mut b1 = far - c;
            b1 -= n * b1.dot(&n);
            let b1 = b1.normalized().unwrap_or_else(|| any_orthogonal(&n));
            let b2 = n.cross(&b1);
            let mut keyed: Vec<(f64, usize)> = f
                .vertices
                .iter()
                .map(|&i| {
                    let d = vertices[i] - c;
                    (d.dot(&b2).atan2(d.dot(&b1)), i)
                })
                .collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
            f.vertices = keyed.into_iter().map(|(_, i)| i).collect();
            if f.vertices.len() > 3 {
                // Newell-style refit keeps many-vertex facets accurate.
                let k = f.vertices.len();
                let mut acc = Vector::zeros(3);
                for i in 0..k {
                    let a = vertices[f.vertices[i]] - c;
                    let b = vertices[f.vertices[(i + 1) % k]] - c;
                    acc += a.cross(&b);
                }
                if let Some(m) = acc.normalized() {
                    if m.dot(&n) > 0.0 {
                        f.normal = m;
                        f.offset = f
                            .vertices
                            .iter()
                            .map(|&i| m.dot(&vertices[i]))
                            .fold(f64::NEG_INFINITY, f64::max);
                    }
                }
            }
        }
        _ => {}
    }
}

fn any_orthogonal(n: &Vector) -> Vector {
    let e = if n[0].abs() < 0.9 {
        Vector::axis(3, 0)
    } else {
        Vector::axis(3, 1)
    };
    n.cross(&e).normalized().expect("non-parallel axis")
}

/// Sorts the facets around a vertex by the angle of their normals about the
/// mean normal, which lies inside the normal cone.
fn order_around(facets: &[Facet], inc: &mut [usize]) {
    let mut axis = Vector::zeros(3);
    for &f in inc.iter() {
        axis += facets[f].normal;
    }
    let axis = axis.normalized().unwrap_or(facets[inc[0]].normal);
    let mut b1 = facets[inc[0]].normal;
    b1 -= axis * b1.dot(&axis);
    let b1 = b1.normalized().unwrap_or_else(|| any_orthogonal(&axis));
    let b2 = axis.cross(&b1);
    inc.sort_by(|&a, &b| {
        let ka = facets[a].normal.dot(&b2).atan2(facets[a].normal.dot(&b1));
        let kb = facets[b].normal.dot(&b2).atan2(facets[b].normal.dot(&b1));
        ka.total_cmp(&kb)
    });
}

/// Hausdorff distance between two polytopes of the same dimension.
///
/// For convex polytopes the farthest point of one body from the other is a
/// vertex, so the vertex maxima are exact.
pub fn hausdorff_distance(p: &Polytope, q: &Polytope) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let one = |a: &Polytope, b: &Polytope| {
        a.vertices()
            .iter()
            .map(|v| b.distance_to(v))
            .fold(0.0_f64, f64::max)
    };
    Ok(one(p, q).max(one(q, p)))
}
