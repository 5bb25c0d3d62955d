use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::symmetrization::midpoint_deviation;
use crate::vector::{Direction, Vector};

/// Chords sampled per direction.
const CHORDS_2D: usize = 64;
const CHORDS_3D: usize = 144;

/// Deterministic, well-spread directions: equally spaced angles over a half
/// turn in the plane (`u` and `−u` give the same chords), a Fibonacci
/// (golden-angle) sphere in space.
pub fn direction_set(dim: usize, count: usize) -> Result<Vec<Direction>> {
    match dim {
        2 => Ok((0..count)
            .map(|k| Direction::from_angle(PI * (k as f64 + 0.5) / count as f64))
            .collect()),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let th = golden * k as f64;
                    Direction::new(Vector::new3(r * th.cos(), r * th.sin(), z))
                })
                .collect()
        }
        n => Err(Error::UnsupportedDimension(n)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipsoidTest {
    pub passed: bool,
    pub worst_direction: Direction,
    pub worst_deviation: f64,
    pub deviations: Vec<(Direction, f64)>,
}

/// Chord-midpoint test over `num_directions` directions: passes iff the
/// midpoints of parallel chords are coplanar within `tol` for every direction.
pub fn ellipsoid_test(p: &Polytope, num_directions: usize, tol: f64) -> Result<EllipsoidTest> {
    let n = p.dim();
    if num_directions < 2 * n {
        return Err(Error::BadSpec(format!(
            "need at least {} directions, got {num_directions}",
            2 * n
        )));
    }
    let chords = if n == 2 { CHORDS_2D } else { CHORDS_3D };
    let deviations: Vec<(Direction, f64)> = direction_set(n, num_directions)?
        .into_par_iter()
        .map(|u| Ok((u, midpoint_deviation(p, &u, chords)?)))
        .collect::<Result<_>>()?;
    let (worst_direction, worst_deviation) = deviations
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one direction");
    Ok(EllipsoidTest {
        passed: worst_deviation < tol,
        worst_direction,
        worst_deviation,
        deviations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{generate_body, BodySpec};

    #[test]
    fn directions_are_unit_and_distinct() {
        for dim in [2, 3] {
            let d = direction_set(dim, 10).unwrap();
            assert_eq!(d.len(), 10);
            for (i, a) in d.iter().enumerate() {
                assert!((a.norm() - 1.0).abs() < 1e-12);
                for b in &d[i + 1..] {
                    assert!(a.distance(b) > 1e-3);
                }
            }
        }
    }

    #[test]
    fn ellipse_passes_and_square_fails() {
        let e = generate_body(&BodySpec::ellipse_from_quadratic(2.0, 0.5, 1.0).unwrap()).unwrap();
        assert!(ellipsoid_test(&e, 8, 5e-3).unwrap().passed);
        let sq = generate_body(&BodySpec::cube(2)).unwrap();
        let r = ellipsoid_test(&sq, 8, 5e-3).unwrap();
        assert!(!r.passed);
        assert!(r.worst_deviation > 0.01);
        assert!(ellipsoid_test(&sq, 3, 5e-3).is_err());
    }
}
