//! Deterministic body generators.
//!
//! Every body is a pure function of its [`BodySpec`]: kind, dimension,
//! kind-specific parameters and seed. Smooth bodies are approximated by
//! inscribed polytopes (an `m`-gon in the plane, a subdivided icosahedron in
//! space).

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{canonicalize, Polytope};
use crate::vector::Vector;

/// Vertex count of planar smooth-body approximations.
pub const DEFAULT_POLYGON_VERTICES: usize = 256;
/// Subdivision level of spatial smooth-body approximations (1280 facets).
/// Level 2 (320 facets) leaves the volume product of the ball 1.5% short.
pub const DEFAULT_ICOSPHERE_LEVEL: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BodyKind {
    PolygonRegular,
    PolygonRandom,
    Ellipse,
    Ellipsoid,
    Cube,
    Simplex,
    Crosspolytope,
    BallApprox,
    FromFile,
}

impl BodyKind {
    pub const ALL: [BodyKind; 9] = [
        BodyKind::PolygonRegular,
        BodyKind::PolygonRandom,
        BodyKind::Ellipse,
        BodyKind::Ellipsoid,
        BodyKind::Cube,
        BodyKind::Simplex,
        BodyKind::Crosspolytope,
        BodyKind::BallApprox,
        BodyKind::FromFile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BodyKind::PolygonRegular => "polygon-regular",
            BodyKind::PolygonRandom => "polygon-random",
            BodyKind::Ellipse => "ellipse",
            BodyKind::Ellipsoid => "ellipsoid",
            BodyKind::Cube => "cube",
            BodyKind::Simplex => "simplex",
            BodyKind::Crosspolytope => "crosspolytope",
            BodyKind::BallApprox => "ball-approx",
            BodyKind::FromFile => "from-file",
        }
    }
}

impl fmt::Display for BodyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BodyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BodyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::BadSpec(format!("unknown body kind `{s}`")))
    }
}

/// Generator input. Fields not used by a kind are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodySpec {
    pub kind: BodyKind,
    pub dim: usize,
    /// Vertex count for planar polygons and ellipses.
    pub m: Option<usize>,
    /// Semi-axes (`a`, `b`, and `c` in dimension 3).
    pub axes: Vec<f64>,
    /// Rotation: one angle in the plane, three (z-y-x) angles in space.
    pub rotation: Vec<f64>,
    /// Subdivision level for icosahedral approximations.
    pub level: Option<usize>,
    /// Make the approximation mirror-symmetric along this direction: the
    /// polygon is the affine image of a regular one that is symmetric about
    /// the conjugate hyperplane of `align`.
    pub align: Option<Vec<f64>>,
    pub path: Option<PathBuf>,
    pub seed: u64,
}

impl BodySpec {
    pub fn new(kind: BodyKind, dim: usize) -> Self {
        Self {
            kind,
            dim,
            m: None,
            axes: Vec::new(),
            rotation: Vec::new(),
            level: None,
            align: None,
            path: None,
            seed: 0,
        }
    }

    pub fn regular_polygon(m: usize) -> Self {
        Self {
            m: Some(m),
            ..Self::new(BodyKind::PolygonRegular, 2)
        }
    }

    pub fn random_polytope(dim: usize, m: usize, seed: u64) -> Self {
        Self {
            m: Some(m),
            seed,
            ..Self::new(BodyKind::PolygonRandom, dim)
        }
    }

    pub fn ellipse(a: f64, b: f64, rot: f64) -> Self {
        Self {
            axes: vec![a, b],
            rotation: vec![rot],
            ..Self::new(BodyKind::Ellipse, 2)
        }
    }

    /// The ellipse `{x : xᵀ Q x ≤ 1}` for `Q = [[q11, q12], [q12, q22]]`.
    pub fn ellipse_from_quadratic(q11: f64, q12: f64, q22: f64) -> Result<Self> {
        let q = nalgebra::Matrix2::new(q11, q12, q12, q22);
        let eig = q.symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::BadSpec("quadratic form is not positive definite".into()));
        }
        let v = eig.eigenvectors.column(0);
        let rot = v[1].atan2(v[0]);
        Ok(Self::ellipse(
            1.0 / eig.eigenvalues[0].sqrt(),
            1.0 / eig.eigenvalues[1].sqrt(),
            rot,
        ))
    }

    pub fn ellipsoid(axes: [f64; 3], angles: [f64; 3]) -> Self {
        Self {
            axes: axes.to_vec(),
            rotation: angles.to_vec(),
            ..Self::new(BodyKind::Ellipsoid, 3)
        }
    }

    pub fn cube(dim: usize) -> Self {
        Self::new(BodyKind::Cube, dim)
    }

    pub fn simplex(dim: usize) -> Self {
        Self::new(BodyKind::Simplex, dim)
    }

    pub fn crosspolytope(dim: usize) -> Self {
        Self::new(BodyKind::Crosspolytope, dim)
    }

    pub fn ball(dim: usize) -> Self {
        Self::new(BodyKind::BallApprox, dim)
    }

    pub fn from_file(path: impl Into<PathBuf>) -> Self {
        Self {
            path: Some(path.into()),
            ..Self::new(BodyKind::FromFile, 0)
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_level(mut self, level: usize) -> Self {
        self.level = Some(level);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_align(mut self, u: &Vector) -> Self {
        self.align = Some(u.coords().to_vec());
        self
    }
}

/// Builds the body described by `spec`.
pub fn generate_body(spec: &BodySpec) -> Result<Polytope> {
    let dim = spec.dim;
    let need_dim = |ok: &[usize]| -> Result<()> {
        if ok.contains(&dim) {
            Ok(())
        } else {
            Err(Error::BadSpec(format!("{} does not support dimension {dim}", spec.kind)))
        }
    };
    match spec.kind {
        BodyKind::PolygonRegular => {
            need_dim(&[2])?;
            let m = polygon_count(spec, None)?;
            canonicalize(&regular_polygon_points(m, 0.0))
        }
        BodyKind::PolygonRandom => {
            need_dim(&[2, 3])?;
            random_polytope(spec)
        }
        BodyKind::Ellipse => {
            need_dim(&[2])?;
            let (a, b) = match spec.axes.as_slice() {
                [a, b] => (*a, *b),
                [] => (1.0, 1.0),
                _ => return Err(Error::BadSpec("ellipse needs two semi-axes".into())),
            };
            let rot = single_angle(spec)?;
            let m = polygon_count(spec, Some(DEFAULT_POLYGON_VERTICES))?;
            ellipse(a, b, rot, m, align_vector(spec)?)
        }
        BodyKind::Ellipsoid => {
            need_dim(&[3])?;
            let axes: [f64; 3] = match spec.axes.as_slice() {
                [a, b, c] => [*a, *b, *c],
                [] => [1.0, 1.0, 1.0],
                _ => return Err(Error::BadSpec("ellipsoid needs three semi-axes".into())),
            };
            let angles: [f64; 3] = match spec.rotation.as_slice() {
                [x, y, z] => [*x, *y, *z],
                [] => [0.0; 3],
                _ => return Err(Error::BadSpec("ellipsoid rotation needs three angles".into())),
            };
            let level = spec.level.unwrap_or(DEFAULT_ICOSPHERE_LEVEL);
            ellipsoid(axes, euler_rotation(angles), level, align_vector(spec)?)
        }
        BodyKind::Cube => {
            need_dim(&[2, 3])?;
            let pts = (0..1usize << dim)
                .map(|mask| {
                    let c: Vec<f64> = (0..dim).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
                    Vector::from_slice(&c)
                })
                .collect::<Vec<_>>();
            canonicalize(&pts)
        }
        BodyKind::Simplex => {
            need_dim(&[2, 3])?;
            let mut pts = vec![Vector::zeros(dim)];
            pts.extend((0..dim).map(|i| Vector::axis(dim, i)));
            canonicalize(&pts)
        }
        BodyKind::Crosspolytope => {
            need_dim(&[2, 3])?;
            let pts: Vec<Vector> = (0..dim)
                .flat_map(|i| [Vector::axis(dim, i), -Vector::axis(dim, i)])
                .collect();
            canonicalize(&pts)
        }
        BodyKind::BallApprox => {
            need_dim(&[2, 3])?;
            if dim == 2 {
                let m = polygon_count(spec, Some(DEFAULT_POLYGON_VERTICES))?;
                canonicalize(&regular_polygon_points(m, 0.0))
            } else {
                canonicalize(&icosphere(spec.level.unwrap_or(DEFAULT_ICOSPHERE_LEVEL))?)
            }
        }
        BodyKind::FromFile => {
            let path = spec
                .path
                .as_ref()
                .ok_or_else(|| Error::BadSpec("from-file needs a path".into()))?;
            crate::io::read_body(path)
        }
    }
}

fn polygon_count(spec: &BodySpec, default: Option<usize>) -> Result<usize> {
    let m = spec
        .m
        .or(default)
        .ok_or_else(|| Error::BadSpec(format!("{} needs a vertex count m", spec.kind)))?;
    if m < 3 {
        return Err(Error::BadSpec(format!("vertex count must be at least 3, got {m}")));
    }
    Ok(m)
}

fn single_angle(spec: &BodySpec) -> Result<f64> {
    match spec.rotation.as_slice() {
        [] => Ok(0.0),
        [r] => Ok(*r),
        _ => Err(Error::BadSpec("planar rotation is a single angle".into())),
    }
}

fn align_vector(spec: &BodySpec) -> Result<Option<Vector>> {
    match &spec.align {
        None => Ok(None),
        Some(c) if c.len() == spec.dim => Ok(Some(Vector::from_slice(c))),
        Some(c) => Err(Error::BadSpec(format!(
            "align direction has {} coordinates, body has dimension {}",
            c.len(),
            spec.dim
        ))),
    }
}

fn check_axes(axes: &[f64]) -> Result<()> {
    if axes.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::BadSpec(format!("semi-axes must be positive, got {axes:?}")));
    }
    Ok(())
}

/// Vertices of the regular `m`-gon of circumradius 1 with a vertex at angle `phase`.
pub fn regular_polygon_points(m: usize, phase: f64) -> Vec<Vector> {
    (0..m)
        .map(|k| {
            let th = phase + 2.0 * PI * k as f64 / m as f64;
            Vector::new2(th.cos(), th.sin())
        })
        .collect()
}

fn ellipse(a: f64, b: f64, rot: f64, m: usize, align: Option<Vector>) -> Result<Polytope> {
    check_axes(&[a, b])?;
    let (c, s) = (rot.cos(), rot.sin());
    // x = R diag(a, b) w
    let map = |w: &Vector| Vector::new2(c * a * w[0] - s * b * w[1], s * a * w[0] + c * b * w[1]);
    let phase = match align {
        None => 0.0,
        Some(u) => {
            // ū ∝ T⁻¹ u; the regular polygon is symmetric about ū⊥ when a
            // vertex sits on that line.
            let r = Vector::new2(c * u[0] + s * u[1], -s * u[0] + c * u[1]);
            let ubar = Vector::new2(r[0] / a, r[1] / b);
            if ubar.norm() == 0.0 {
                return Err(Error::BadSpec("align direction is zero".into()));
            }
            ubar[1].atan2(ubar[0]) + PI / 2.0
        }
    };
    let pts: Vec<Vector> = regular_polygon_points(m, phase).iter().map(map).collect();
    canonicalize(&pts)
}

fn ellipsoid(axes: [f64; 3], rot: Matrix3<f64>, level: usize, align: Option<Vector>) -> Result<Polytope> {
    check_axes(&axes)?;
    let lin = rot * Matrix3::from_diagonal(&nalgebra::Vector3::new(axes[0], axes[1], axes[2]));
    let mut sphere = icosphere(level)?;
    if let Some(u) = align {
        // The icosphere is symmetric about the coordinate plane e₁⊥; a
        // Householder reflection carries it onto ū⊥ with ū ∝ T⁻¹ u.
        let inv = lin
            .try_inverse()
            .ok_or_else(|| Error::BadSpec("singular ellipsoid".into()))?;
        let ub = inv * nalgebra::Vector3::new(u[0], u[1], u[2]);
        let ub = ub
            .try_normalize(0.0)
            .ok_or_else(|| Error::BadSpec("align direction is zero".into()))?;
        let w = ub - nalgebra::Vector3::x();
        if let Some(w) = w.try_normalize(1e-12) {
            let h = Matrix3::identity() - 2.0 * w * w.transpose();
            for p in sphere.iter_mut() {
                let q = h * nalgebra::Vector3::new(p[0], p[1], p[2]);
                *p = Vector::new3(q[0], q[1], q[2]);
            }
        }
    }
    let pts: Vec<Vector> = sphere
        .iter()
        .map(|p| {
            let q = lin * nalgebra::Vector3::new(p[0], p[1], p[2]);
            Vector::new3(q[0], q[1], q[2])
        })
        .collect();
    canonicalize(&pts)
}

/// Rotation `R_z(γ) R_y(β) R_x(α)` for angles `[α, β, γ]`.
pub fn euler_rotation(angles: [f64; 3]) -> Matrix3<f64> {
    let [a, b, g] = angles;
    let rx = Matrix3::new(1.0, 0.0, 0.0, 0.0, a.cos(), -a.sin(), 0.0, a.sin(), a.cos());
    let ry = Matrix3::new(b.cos(), 0.0, b.sin(), 0.0, 1.0, 0.0, -b.sin(), 0.0, b.cos());
    let rz = Matrix3::new(g.cos(), -g.sin(), 0.0, g.sin(), g.cos(), 0.0, 0.0, 0.0, 1.0);
    rz * ry * rx
}

/// Uniformly distributed rotation angles (as accepted by [`euler_rotation`]),
/// drawn through a uniform unit quaternion.
pub fn random_euler_angles(rng: &mut impl Rng) -> [f64; 3] {
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let (s1, s2) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (x, y, z, w) = (
        s1 * (2.0 * PI * u2).sin(),
        s1 * (2.0 * PI * u2).cos(),
        s2 * (2.0 * PI * u3).sin(),
        s2 * (2.0 * PI * u3).cos(),
    );
    // z-y-x angles of the quaternion (w, x, y, z).
    let alpha = (2.0 * (w * x + y * z)).atan2(1.0 - 2.0 * (x * x + y * y));
    let beta = (2.0 * (w * y - z * x)).clamp(-1.0, 1.0).asin();
    let gamma = (2.0 * (w * z + x * y)).atan2(1.0 - 2.0 * (y * y + z * z));
    [alpha, beta, gamma]
}

/// Unit-sphere points of the icosahedron subdivided `level` times
/// (`20·4^level` triangles). The point set is symmetric under the three
/// coordinate reflections.
pub fn icosphere(level: usize) -> Result<Vec<Vector>> {
    if level > 5 {
        return Err(Error::BadSpec(format!("icosphere level {level} is too fine")));
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vector> = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vector::new3(x, y, z).normalized().expect("non-zero"))
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    for _ in 0..level {
        let mut cache = std::collections::HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<Vector>| -> usize {
            *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) * 0.5).normalized().expect("non-antipodal"));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    Ok(verts)
}

fn random_polytope(spec: &BodySpec) -> Result<Polytope> {
    let dim = spec.dim;
    let m = spec.m.unwrap_or(if dim == 2 { 7 } else { 12 });
    if m < dim + 1 {
        return Err(Error::BadSpec(format!("need at least {} points, got {m}", dim + 1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    // Points on a random ellipse (ellipsoid) with radially perturbed
    // boundary; redraw in the unlikely event the hull is degenerate.
    for _ in 0..16 {
        let axes: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.5..2.0)).collect();
        let pts: Vec<Vector> = if dim == 2 {
            let rot: f64 = rng.gen_range(0.0..PI);
            let (c, s) = (rot.cos(), rot.sin());
            (0..m)
                .map(|_| {
                    let th: f64 = rng.gen_range(0.0..2.0 * PI);
                    let r = 1.0 + rng.gen_range(-0.2..0.2);
                    let (x, y) = (r * axes[0] * th.cos(), r * axes[1] * th.sin());
                    Vector::new2(c * x - s * y, s * x + c * y)
                })
                .collect()
        } else {
            let rot = euler_rotation(random_euler_angles(&mut rng));
            (0..m)
                .map(|_| {
                    let z: f64 = rng.gen_range(-1.0..1.0);
                    let th: f64 = rng.gen_range(0.0..2.0 * PI);
                    let rho = (1.0 - z * z).sqrt();
                    let r = 1.0 + rng.gen_range(-0.2..0.2);
                    let p = nalgebra::Vector3::new(
                        r * axes[0] * rho * th.cos(),
                        r * axes[1] * rho * th.sin(),
                        r * axes[2] * z,
                    );
                    let q = rot * p;
                    Vector::new3(q[0], q[1], q[2])
                })
                .collect()
        };
        match canonicalize(&pts) {
            Ok(p) if p.vertices().len() > dim => return Ok(p),
            Ok(_) | Err(Error::DegenerateInput(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BadSpec("could not draw a full-dimensional random body".into()))
}
