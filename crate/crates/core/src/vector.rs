//! Small fixed-capacity vectors for dimensions 1 to 3, unit directions, and
//! the orthonormal frame `u⊥ ⊕ span(u)` used by every chord computation.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Largest ambient dimension handled by the crate.
pub const MAX_DIM: usize = 3;

/// A point or displacement with 1 to 3 coordinates.
///
/// Unused trailing slots are kept at zero so that derived equality is exact.
#[derive(Clone, Copy, PartialEq)]
pub struct Vector {
    dim: usize,
    c: [f64; MAX_DIM],
}

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "vector dimension {dim}");
        Self {
            dim,
            c: [0.0; MAX_DIM],
        }
    }

    pub fn from_slice(coords: &[f64]) -> Self {
        let mut v = Self::zeros(coords.len());
        v.c[..coords.len()].copy_from_slice(coords);
        v
    }

    pub fn new2(x: f64, y: f64) -> Self {
        Self::from_slice(&[x, y])
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Self::from_slice(&[x, y, z])
    }

    /// The `i`-th standard basis vector.
    pub fn axis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.c[i] = 1.0;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim]
    }

    #[inline]
    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.c[0] * other.c[0] + self.c[1] * other.c[1] + self.c[2] * other.c[2]
    }

    #[inline]
    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords().iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (*self - *other).norm()
    }

    /// Unit vector in the same direction, or `None` for (near) zero input.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        (n > 1e-300 && n.is_finite()).then(|| *self * (1.0 / n))
    }

    /// Cross product; both operands must be 3-dimensional.
    pub fn cross(&self, other: &Vector) -> Vector {
        debug_assert!(self.dim == 3 && other.dim == 3);
        let (a, b) = (&self.c, &other.c);
        Vector::new3(
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
    }

    /// z-component of the planar cross product.
    #[inline]
    pub fn cross2(&self, other: &Vector) -> f64 {
        self.c[0] * other.c[1] - self.c[1] * other.c[0]
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|x| x.is_finite())
    }

    /// Lexicographic comparison on coordinates (total order via `total_cmp`).
    pub fn lex_cmp(&self, other: &Vector) -> std::cmp::Ordering {
        for i in 0..self.dim.min(other.dim) {
            match self.c[i].total_cmp(&other.c[i]) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        self.dim.cmp(&other.dim)
    }
}

impl serde::Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords())
    }
}

impl serde::Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        debug_assert!(i < self.dim);
        &self.c[i]
    }
}

impl IndexMut<usize> for Vector {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        debug_assert!(i < self.dim);
        &mut self.c[i]
    }
}

impl Add for Vector {
    type Output = Vector;
    #[inline]
    fn add(mut self, rhs: Vector) -> Vector {
        self += rhs;
        self
    }
}

impl AddAssign for Vector {
    #[inline]
    fn add_assign(&mut self, rhs: Vector) {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..MAX_DIM {
            self.c[i] += rhs.c[i];
        }
    }
}

impl Sub for Vector {
    type Output = Vector;
    #[inline]
    fn sub(mut self, rhs: Vector) -> Vector {
        self -= rhs;
        self
    }
}

impl SubAssign for Vector {
    #[inline]
    fn sub_assign(&mut self, rhs: Vector) {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..MAX_DIM {
            self.c[i] -= rhs.c[i];
        }
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    #[inline]
    fn mul(mut self, s: f64) -> Vector {
        for x in self.c.iter_mut() {
            *x *= s;
        }
        self
    }
}

impl Neg for Vector {
    type Output = Vector;
    #[inline]
    fn neg(self) -> Vector {
        self * -1.0
    }
}

/// A unit vector `u ∈ S^{n-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction(Vector);

impl Direction {
    /// Normalizes `v`; fails for the zero vector.
    pub fn new(v: Vector) -> Result<Self> {
        v.normalized()
            .map(Self)
            .ok_or_else(|| Error::degenerate("zero vector cannot define a direction"))
    }

    /// Planar direction `(cos θ, sin θ)`.
    pub fn from_angle(theta: f64) -> Self {
        Self(Vector::new2(theta.cos(), theta.sin()))
    }

    pub fn axis(dim: usize, i: usize) -> Self {
        Self(Vector::axis(dim, i))
    }

    #[inline]
    pub fn as_vector(&self) -> &Vector {
        &self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

impl std::ops::Deref for Direction {
    type Target = Vector;
    fn deref(&self) -> &Vector {
        &self.0
    }
}

/// Orthonormal coordinates adapted to a direction: `x = Σ y_i e_i + s u`.
///
/// The basis of `u⊥` comes from Gram–Schmidt over the standard axes with the
/// axis most parallel to `u` dropped, so the same `u` always yields the same
/// projected coordinates.
#[derive(Clone, Debug)]
pub struct Frame {
    u: Direction,
    basis: Vec<Vector>,
}

impl Frame {
    pub fn new(u: Direction) -> Self {
        let n = u.dim();
        let drop = (0..n)
            .max_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
            .unwrap_or(0);
        let mut basis: Vec<Vector> = Vec::with_capacity(n.saturating_sub(1));
        for i in (0..n).filter(|&i| i != drop) {
            let mut e = Vector::axis(n, i);
            e -= *u.as_vector() * e.dot(&u);
            for b in &basis {
                e -= *b * e.dot(b);
            }
            basis.push(e.normalized().expect("axis independent of u"));
        }
        Self { u, basis }
    }

    #[inline]
    pub fn direction(&self) -> &Direction {
        &self.u
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// Coordinates of `P_u x` in the basis of `u⊥`.
    pub fn project(&self, x: &Vector) -> Vector {
        let mut y = Vector::zeros(self.basis.len().max(1));
        for (i, b) in self.basis.iter().enumerate() {
            y[i] = x.dot(b);
        }
        y
    }

    /// Signed height `⟨x, u⟩`.
    #[inline]
    pub fn height(&self, x: &Vector) -> f64 {
        x.dot(&self.u)
    }

    /// Ambient point `Σ y_i e_i + s u`.
    pub fn lift(&self, y: &Vector, s: f64) -> Vector {
        let mut x = *self.u.as_vector() * s;
        for (i, b) in self.basis.iter().enumerate() {
            x += *b * y[i];
        }
        x
    }

    /// Ambient vector with base components `g` and height component `h`.
    pub fn lift_linear(&self, g: &Vector, h: f64) -> Vector {
        self.lift(g, h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_drops_most_parallel_axis() {
        let f = Frame::new(Direction::axis(3, 2));
        assert_eq!(f.basis()[0], Vector::axis(3, 0));
        assert_eq!(f.basis()[1], Vector::axis(3, 1));

        let f = Frame::new(Direction::axis(2, 1));
        assert_eq!(f.basis()[0], Vector::axis(2, 0));
    }

    #[test]
    fn frame_is_orthonormal_and_lift_inverts_project() {
        let u = Direction::new(Vector::new3(0.3, -0.8, 0.5)).unwrap();
        let f = Frame::new(u);
        for b in f.basis() {
            assert!((b.norm() - 1.0).abs() < 1e-14);
            assert!(b.dot(&u).abs() < 1e-14);
        }
        assert!(f.basis()[0].dot(&f.basis()[1]).abs() < 1e-14);
        let x = Vector::new3(1.5, -2.0, 0.25);
        let back = f.lift(&f.project(&x), f.height(&x));
        assert!(back.distance(&x) < 1e-14);
    }

    #[test]
    fn direction_is_unit() {
        let d = Direction::new(Vector::new2(3.0, 4.0)).unwrap();
        assert!((d.norm() - 1.0).abs() < 1e-12);
        assert!(Direction::new(Vector::zeros(2)).is_err());
    }
}
