//! Exact rational arithmetic for planar bodies.
//!
//! Every binary floating-point number is a rational, so conversion is lossless
//! and the hull, area, centroid and polar computed here carry no rounding at
//! all. The Santaló point itself is in general irrational; the exact volume
//! product is therefore evaluated at a rational candidate pole that is
//! *certified* by checking the optimality condition `centroid(K^z) = z`
//! exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::vector::Vector;

/// A point of the rational plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl QPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Self { x, y }
    }

    /// Point with small integer numerators and denominators, for tests and tables.
    pub fn ratio(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self::new(q(xn, xd), q(yn, yd))
    }

    /// Lossless conversion of a finite planar vector.
    pub fn from_vector(v: &Vector) -> Result<Self> {
        if v.dim() != 2 {
            return Err(Error::UnsupportedDimension(v.dim()));
        }
        Ok(Self::new(from_f64(v[0])?, from_f64(v[1])?))
    }

    /// Nearest floating-point vector.
    pub fn to_vector(&self) -> Vector {
        Vector::new2(to_f64(&self.x), to_f64(&self.y))
    }

    fn sub(&self, o: &QPoint) -> QPoint {
        QPoint::new(&self.x - &o.x, &self.y - &o.y)
    }

    fn cmp_lex(&self, o: &QPoint) -> Ordering {
        self.x.cmp(&o.x).then_with(|| self.y.cmp(&o.y))
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::degenerate(format!("non-finite coordinate {x}")))
}

/// Nearest double to a rational.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents).
pub fn rationalize(x: f64, max_den: i64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::degenerate(format!("non-finite value {x}")));
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        return from_f64(x);
    }
    Ok(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}

fn cross(o: &QPoint, a: &QPoint, b: &QPoint) -> BigRational {
    let (u, v) = (a.sub(o), b.sub(o));
    &u.x * &v.y - &u.y * &v.x
}

/// A convex polygon with exact vertices in counter-clockwise order.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPolygon {
    vertices: Vec<QPoint>,
}

impl ExactPolygon {
    /// Convex hull by the monotone chain with exact orientation tests;
    /// collinear boundary points are dropped.
    pub fn hull(points: &[QPoint]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.cmp_lex(b));
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::degenerate("fewer than 3 distinct points"));
        }
        let chain = |iter: &mut dyn Iterator<Item = &QPoint>| {
            let mut out: Vec<QPoint> = Vec::new();
            for p in iter {
                while out.len() >= 2 && !cross(&out[out.len() - 2], &out[out.len() - 1], p).is_positive() {
                    out.pop();
                }
                out.push(p.clone());
            }
            out.pop();
            out
        };
        let mut lower = chain(&mut pts.iter());
        let upper = chain(&mut pts.iter().rev());
        lower.extend(upper);
        if lower.len() < 3 {
            return Err(Error::degenerate("points are collinear"));
        }
        Ok(Self { vertices: lower })
    }

    /// Exact hull of the vertices of a floating-point polygon.
    pub fn from_polytope(p: &Polytope) -> Result<Self> {
        if p.dim() != 2 {
            return Err(Error::UnsupportedDimension(p.dim()));
        }
        let pts = p
            .vertices()
            .iter()
            .map(QPoint::from_vector)
            .collect::<Result<Vec<_>>>()?;
        Self::hull(&pts)
    }

    pub fn vertices(&self) -> &[QPoint] {
        &self.vertices
    }

    fn edges(&self) -> impl Iterator<Item = (&QPoint, &QPoint)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// Shoelace area.
    pub fn area(&self) -> BigRational {
        let two = self
            .edges()
            .fold(BigRational::zero(), |acc, (a, b)| acc + (&a.x * &b.y - &b.x * &a.y));
        two / q(2, 1)
    }

    /// Area centroid.
    pub fn centroid(&self) -> QPoint {
        let (mut cx, mut cy) = (BigRational::zero(), BigRational::zero());
        for (a, b) in self.edges() {
            let w = &a.x * &b.y - &b.x * &a.y;
            cx += (&a.x + &b.x) * &w;
            cy += (&a.y + &b.y) * &w;
        }
        let six_area = self.area() * q(6, 1);
        QPoint::new(cx / &six_area, cy / six_area)
    }

    /// True if `z` lies strictly inside.
    pub fn strictly_contains(&self, z: &QPoint) -> bool {
        self.edges().all(|(a, b)| cross(a, b, z).is_positive())
    }

    /// Polar body about `z`: the edge `a → b` with outward normal
    /// `n = (b_y − a_y, a_x − b_x)` and offset `c = ⟨n, a⟩` becomes the vertex
    /// `z + n / (c − ⟨n, z⟩)`.
    pub fn polar(&self, z: &QPoint) -> Result<Self> {
        if !self.strictly_contains(z) {
            return Err(Error::NotInterior { slack: 0.0 });
        }
        let verts: Vec<QPoint> = self
            .edges()
            .map(|(a, b)| {
                let n = QPoint::new(&b.y - &a.y, &a.x - &b.x);
                let slack = &n.x * (&a.x - &z.x) + &n.y * (&a.y - &z.y);
                QPoint::new(&z.x + &n.x / &slack, &z.y + &n.y / &slack)
            })
            .collect();
        // Consecutive edges have distinct normals, so the polar vertices are
        // already a counter-clockwise convex cycle; the hull only rotates it.
        Self::hull(&verts)
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        let pts: Vec<Vector> = self.vertices.iter().map(QPoint::to_vector).collect();
        crate::polytope::canonicalize(&pts)
    }
}

/// Exact volume product at a certified pole.
#[derive(Clone, Debug)]
pub struct ExactProduct {
    pub area: BigRational,
    pub pole: QPoint,
    pub polar_area: BigRational,
    pub product: BigRational,
    /// Set when `centroid(K^pole) = pole` holds exactly, i.e. the pole is the
    /// Santaló point and `product` is exactly Π(K).
    pub certified: bool,
}

impl ExactProduct {
    pub fn product_f64(&self) -> f64 {
        to_f64(&self.product)
    }
}

/// Exact product `|K|·|K^z|` at the first candidate pole satisfying the exact
/// Santaló condition. Candidates: the centroid, the vertex average, and small-
/// denominator roundings of `float_hint` (typically the floating-point
/// Santaló point). Without a certified candidate the value at the last
/// candidate is returned with `certified = false`.
pub fn exact_volume_product(k: &ExactPolygon, float_hint: Option<&Vector>) -> Result<ExactProduct> {
    let area = k.area();
    let mut candidates = vec![k.centroid()];
    let n = BigRational::from_integer(BigInt::from(k.vertices.len()));
    let (sx, sy) = k.vertices.iter().fold((BigRational::zero(), BigRational::zero()), |(x, y), v| {
        (x + &v.x, y + &v.y)
    });
    candidates.push(QPoint::new(sx / &n, sy / &n));
    if let Some(h) = float_hint {
        for den in [1_i64, 2, 3, 4, 6, 8, 12, 24, 60, 120, 360, 1000, 10_000, 1_000_000] {
            candidates.push(QPoint::new(rationalize(h[0], den)?, rationalize(h[1], den)?));
        }
    }
    let mut last: Option<ExactProduct> = None;
    for z in candidates {
        if !k.strictly_contains(&z) {
            continue;
        }
        let polar = k.polar(&z)?;
        let polar_area = polar.area();
        let certified = polar.centroid() == z;
        let report = ExactProduct {
            product: &area * &polar_area,
            area: area.clone(),
            pole: z,
            polar_area,
            certified,
        };
        if certified {
            return Ok(report);
        }
        last = Some(report);
    }
    last.ok_or_else(|| Error::numerical("no candidate pole is interior"))
}

/// Rational affine-regular polygons: affine images of the regular m-gon with
/// rational vertices, available for m ∈ {3, 4, 6}. The volume product is
/// affine invariant, so these carry the exact regular-polygon values.
pub fn affine_regular(m: usize) -> Option<ExactPolygon> {
    let pts: Vec<QPoint> = match m {
        3 => vec![QPoint::ratio(0, 1, 0, 1), QPoint::ratio(1, 1, 0, 1), QPoint::ratio(0, 1, 1, 1)],
        4 => vec![
            QPoint::ratio(-1, 1, -1, 1),
            QPoint::ratio(1, 1, -1, 1),
            QPoint::ratio(1, 1, 1, 1),
            QPoint::ratio(-1, 1, 1, 1),
        ],
        6 => vec![
            QPoint::ratio(1, 1, 0, 1),
            QPoint::ratio(1, 1, 1, 1),
            QPoint::ratio(0, 1, 1, 1),
            QPoint::ratio(-1, 1, 0, 1),
            QPoint::ratio(-1, 1, -1, 1),
            QPoint::ratio(0, 1, -1, 1),
        ],
        _ => return None,
    };
    ExactPolygon::hull(&pts).ok()
}

/// `BigRational` as a reduced `"p/q"` string.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_area_polar_and_product() {
        let sq = affine_regular(4).unwrap();
        assert_eq!(sq.area(), q(4, 1));
        let polar = sq.polar(&QPoint::ratio(0, 1, 0, 1)).unwrap();
        assert_eq!(polar.vertices().len(), 4);
        assert_eq!(polar.area(), q(2, 1));
        let r = exact_volume_product(&sq, None).unwrap();
        assert!(r.certified);
        assert_eq!(r.product, q(8, 1));
    }

    #[test]
    fn triangle_and_hexagon_products_are_exact() {
        let tri = exact_volume_product(&affine_regular(3).unwrap(), None).unwrap();
        assert!(tri.certified);
        assert_eq!(tri.pole, QPoint::ratio(1, 3, 1, 3));
        assert_eq!(tri.product, q(27, 4));
        let hex = exact_volume_product(&affine_regular(6).unwrap(), None).unwrap();
        assert!(hex.certified);
        assert_eq!(hex.product, q(9, 1));
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = vec![
            QPoint::ratio(0, 1, 0, 1),
            QPoint::ratio(2, 1, 0, 1),
            QPoint::ratio(1, 1, 0, 1),
            QPoint::ratio(1, 1, 1, 3),
            QPoint::ratio(0, 1, 2, 1),
        ];
        let h = ExactPolygon::hull(&pts).unwrap();
        assert_eq!(h.vertices().len(), 3);
        let line = vec![QPoint::ratio(0, 1, 0, 1), QPoint::ratio(1, 1, 1, 1), QPoint::ratio(2, 1, 2, 1)];
        assert!(ExactPolygon::hull(&line).is_err());
    }

    #[test]
    fn float_conversion_is_lossless() {
        for x in [0.1, -3.75, 1e-300, 12345.678] {
            assert_eq!(to_f64(&from_f64(x).unwrap()), x);
        }
        assert_eq!(rationalize(1.0 / 3.0, 100).unwrap(), q(1, 3));
        assert_eq!(rationalize(-0.75, 100).unwrap(), q(-3, 4));
    }

    #[test]
    fn bipolar_is_identity() {
        let pts = vec![
            QPoint::ratio(0, 1, 0, 1),
            QPoint::ratio(3, 1, 1, 2),
            QPoint::ratio(2, 1, 2, 1),
            QPoint::ratio(-1, 2, 3, 2),
        ];
        let k = ExactPolygon::hull(&pts).unwrap();
        let z = QPoint::ratio(1, 1, 3, 4);
        assert_eq!(k.polar(&z).unwrap().polar(&z).unwrap(), k);
    }

    #[test]
    fn uncertified_pole_is_reported() {
        let pts = vec![
            QPoint::ratio(0, 1, 0, 1),
            QPoint::ratio(3, 1, 0, 1),
            QPoint::ratio(2, 1, 1, 1),
            QPoint::ratio(0, 1, 2, 1),
        ];
        let k = ExactPolygon::hull(&pts).unwrap();
        let r = exact_volume_product(&k, None).unwrap();
        assert!(!r.certified);
    }
}
