//! Convex hull kernels behind [`crate::polytope::canonicalize`].
//!
//! Both kernels expect points sorted lexicographically and free of
//! near-duplicates; insertion follows that order so results are deterministic.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Planar hull as a counter-clockwise index cycle starting at the lexicographic
/// minimum. Points within `tol` of a hull edge are dropped.
pub(crate) fn hull2(points: &[Vector], tol: f64) -> Result<Vec<usize>> {
    if points.len() < 3 {
        return Err(Error::degenerate(format!(
            "planar hull needs 3 points, got {}",
            points.len()
        )));
    }
    // Pop `a` while it is not strictly right of the chord o -> p by more than tol.
    let keep = |o: &Vector, a: &Vector, p: &Vector| -> bool {
        let op = *p - *o;
        let len = op.norm();
        op.cross2(&(*a - *o)) < -tol * len
    };
    let mut lower: Vec<usize> = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        while lower.len() >= 2
            && !keep(&points[lower[lower.len() - 2]], &points[lower[lower.len() - 1]], p)
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate().rev() {
        while upper.len() >= 2
            && !keep(&points[upper[upper.len() - 2]], &points[upper[upper.len() - 1]], p)
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::degenerate("points are collinear"));
    }
    Ok(lower)
}

#[derive(Clone, Debug)]
struct Tri {
    v: [usize; 3],
    normal: Vector,
    offset: f64,
    alive: bool,
}

fn make_tri(points: &[Vector], v: [usize; 3]) -> Tri {
    let (a, b, c) = (points[v[0]], points[v[1]], points[v[2]]);
    let n = (b - a).cross(&(c - a));
    let normal = n.normalized().unwrap_or(n);
    Tri {
        v,
        normal,
        offset: normal.dot(&a),
        alive: true,
    }
}

/// Spatial hull by beneath-beyond insertion. Returns outward-oriented
/// triangles (counter-clockwise seen from outside) as index triples.
pub(crate) fn hull3(points: &[Vector], tol: f64) -> Result<Vec<[usize; 3]>> {
    let n = points.len();
    if n < 4 {
        return Err(Error::degenerate(format!(
            "spatial hull needs 4 points, got {n}"
        )));
    }
    let p0 = 0;
    let p1 = (1..n)
        .find(|&i| points[i].distance(&points[p0]) > tol)
        .ok_or_else(|| Error::degenerate("all points coincide"))?;
    let d01 = points[p1] - points[p0];
    let p2 = (1..n)
        .find(|&i| {
            let d = points[i] - points[p0];
            d01.cross(&d).norm() > tol * d01.norm()
        })
        .ok_or_else(|| Error::degenerate("points are collinear"))?;
    let plane = d01
        .cross(&(points[p2] - points[p0]))
        .normalized()
        .ok_or_else(|| Error::degenerate("points are collinear"))?;
    let p3 = (1..n)
        .find(|&i| plane.dot(&(points[i] - points[p0])).abs() > tol)
        .ok_or_else(|| Error::degenerate("points are coplanar"))?;

    let seed = [p0, p1, p2, p3];
    let inner = (points[p0] + points[p1] + points[p2] + points[p3]) * 0.25;
    let mut tris: Vec<Tri> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let add = |tris: &mut Vec<Tri>, edges: &mut HashMap<(usize, usize), usize>, v: [usize; 3]| {
        let t = make_tri(points, v);
        let id = tris.len();
        edges.insert((v[0], v[1]), id);
        edges.insert((v[1], v[2]), id);
        edges.insert((v[2], v[0]), id);
        tris.push(t);
    };
    for skip in 0..4 {
        let f: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| seed[k]).collect();
        let mut v = [f[0], f[1], f[2]];
        let t = make_tri(points, v);
        if t.normal.dot(&inner) > t.offset {
            v.swap(1, 2);
        }
        add(&mut tris, &mut edges, v);
    }

    let mut visible: Vec<bool> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if seed.contains(&i) {
            continue;
        }
        visible.clear();
        visible.extend(
            tris.iter()
                .map(|t| t.alive && t.normal.dot(p) - t.offset > tol),
        );
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for (ti, t) in tris.iter().enumerate() {
            if !visible[ti] {
                continue;
            }
            for k in 0..3 {
                let (a, b) = (t.v[k], t.v[(k + 1) % 3]);
                match edges.get(&(b, a)) {
                    Some(&nb) if visible[nb] => {}
                    Some(_) => horizon.push((a, b)),
                    None => {
                        return Err(Error::numerical("hull lost edge adjacency"));
                    }
                }
            }
        }
        for ti in 0..tris.len() {
            if visible[ti] {
                tris[ti].alive = false;
                let v = tris[ti].v;
                for k in 0..3 {
                    let key = (v[k], v[(k + 1) % 3]);
                    if edges.get(&key) == Some(&ti) {
                        edges.remove(&key);
                    }
                }
            }
        }
        for (a, b) in horizon {
            add(&mut tris, &mut edges, [a, b, i]);
        }
    }
    Ok(tris.into_iter().filter(|t| t.alive).map(|t| t.v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut pts: Vec<Vector>) -> Vec<Vector> {
        pts.sort_by(|a, b| a.lex_cmp(b));
        pts
    }

    #[test]
    fn square_with_center_and_edge_midpoint() {
        let pts = sorted(vec![
            Vector::new2(-1.0, -1.0),
            Vector::new2(1.0, -1.0),
            Vector::new2(1.0, 1.0),
            Vector::new2(-1.0, 1.0),
            Vector::new2(0.0, 0.0),
            Vector::new2(0.0, 1.0),
        ]);
        let h = hull2(&pts, 1e-9).unwrap();
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn cube_hull_has_twelve_triangles() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(Vector::new3(
                if i & 1 == 0 { -1.0 } else { 1.0 },
                if i & 2 == 0 { -1.0 } else { 1.0 },
                if i & 4 == 0 { -1.0 } else { 1.0 },
            ));
        }
        pts.push(Vector::new3(0.0, 0.0, 0.0));
        let pts = sorted(pts);
        let tris = hull3(&pts, 1e-9).unwrap();
        assert_eq!(tris.len(), 12);
    }

    #[test]
    fn collinear_and_coplanar_inputs_are_rejected() {
        let line = sorted((0..5).map(|i| Vector::new2(i as f64, 2.0 * i as f64)).collect());
        assert!(hull2(&line, 1e-9).is_err());
        let flat = sorted(vec![
            Vector::new3(0.0, 0.0, 0.0),
            Vector::new3(1.0, 0.0, 0.0),
            Vector::new3(0.0, 1.0, 0.0),
            Vector::new3(1.0, 1.0, 0.0),
        ]);
        assert!(hull3(&flat, 1e-9).is_err());
    }
}
