use rayon::prelude::*;
use serde::Serialize;

use crate::duality::santalo_point;
use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::symmetrization::{ShadowSystem, SteinerFamily};
use crate::vector::{Direction, Vector};

/// How midpoint convexity of `f` is checked on the grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvexityCheck {
    /// Consecutive triples `(t_{k−1}, t_k, t_{k+1})`: O(grid).
    #[default]
    Triples,
    /// Every pair `(t_i, t_j)` whose midpoint is a grid point: O(grid²).
    Pairwise,
}

/// `f(t) = (|K|·|K_t*|)⁻¹` sampled over a shadow system.
#[derive(Clone, Debug, Serialize)]
pub struct Profile {
    pub t_grid: Vec<f64>,
    pub f_values: Vec<f64>,
    /// `|K_t|` per grid point.
    pub body_volumes: Vec<f64>,
    /// `|K_t*|` per grid point.
    pub polar_volumes: Vec<f64>,
    pub santalo_points: Vec<Vector>,
    /// Largest `f(midpoint) − mean of f at the ends`, clamped at zero.
    pub max_midpoint_violation: f64,
    /// `max |f(t) − f(−t)|`.
    pub evenness_defect: f64,
}

impl Profile {
    fn new(
        t_grid: Vec<f64>,
        reference_volume: f64,
        samples: Vec<(f64, f64, Vector)>,
        check: ConvexityCheck,
    ) -> Self {
        let f_values: Vec<f64> = samples.iter().map(|s| 1.0 / (reference_volume * s.1)).collect();
        let n = f_values.len();
        let mut violation: f64 = 0.0;
        match check {
            ConvexityCheck::Triples => {
                for k in 1..n - 1 {
                    violation = violation.max(f_values[k] - 0.5 * (f_values[k - 1] + f_values[k + 1]));
                }
            }
            ConvexityCheck::Pairwise => {
                for i in 0..n {
                    for j in (i + 2..n).step_by(2) {
                        let mid = (i + j) / 2;
                        violation = violation.max(f_values[mid] - 0.5 * (f_values[i] + f_values[j]));
                    }
                }
            }
        }
        let evenness_defect = (0..n)
            .map(|k| (f_values[k] - f_values[n - 1 - k]).abs())
            .fold(0.0_f64, f64::max);
        Self {
            t_grid,
            body_volumes: samples.iter().map(|s| s.0).collect(),
            polar_volumes: samples.iter().map(|s| s.1).collect(),
            santalo_points: samples.into_iter().map(|s| s.2).collect(),
            f_values,
            max_midpoint_violation: violation,
            evenness_defect,
        }
    }

    pub fn max_f(&self) -> f64 {
        self.f_values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_f(&self) -> f64 {
        self.f_values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Midpoint violation divided by `max f`.
    pub fn relative_violation(&self) -> f64 {
        self.max_midpoint_violation / self.max_f()
    }

    /// Evenness defect divided by `max f`.
    pub fn relative_evenness_defect(&self) -> f64 {
        self.evenness_defect / self.max_f()
    }

    /// `(max f − min f) / max f`.
    pub fn relative_spread(&self) -> f64 {
        (self.max_f() - self.min_f()) / self.max_f()
    }

    /// Index of the grid point closest to `t`.
    pub fn index_of(&self, t: f64) -> usize {
        (0..self.t_grid.len())
            .min_by(|&i, &j| (self.t_grid[i] - t).abs().total_cmp(&(self.t_grid[j] - t).abs()))
            .unwrap_or(0)
    }

    /// `f(t)` at the grid point closest to `t`.
    pub fn f_at(&self, t: f64) -> f64 {
        self.f_values[self.index_of(t)]
    }

    /// How far `f(0)` sits above the grid minimum, relative to `max f`.
    pub fn relative_excess_at_zero(&self) -> f64 {
        (self.f_at(0.0) - self.min_f()) / self.max_f()
    }

    /// Largest `| |K_t| − |K_{−1}| |` along the grid.
    pub fn volume_drift(&self) -> f64 {
        let v0 = self.body_volumes[0];
        self.body_volumes
            .iter()
            .map(|v| (v - v0).abs())
            .fold(0.0_f64, f64::max)
    }
}

/// Uniform grid of `size` points over `[lo, hi]`, symmetric about the midpoint.
pub fn t_grid(lo: f64, hi: f64, size: usize) -> Vec<f64> {
    let h = (size - 1) as f64;
    (0..size)
        .map(|k| {
            // Evaluate from the nearer end so the grid is exactly symmetric.
            let j = size - 1 - k;
            if k <= j {
                lo + (hi - lo) * k as f64 / h
            } else {
                hi - (hi - lo) * j as f64 / h
            }
        })
        .collect()
}

fn check_grid(grid_size: usize) -> Result<()> {
    if grid_size < 5 || grid_size.is_multiple_of(2) {
        return Err(Error::BadSpec(format!(
            "grid size must be odd and at least 5, got {grid_size}"
        )));
    }
    Ok(())
}

fn sample(snapshot: impl Fn(f64) -> Result<Polytope> + Sync, grid: &[f64]) -> Result<Vec<(f64, f64, Vector)>> {
    grid.par_iter()
        .map(|&t| {
            let body = snapshot(t).map_err(|e| e.at_parameter(t))?;
            let s = santalo_point(&body).map_err(|e| e.at_parameter(t))?;
            Ok((body.volume(), s.polar_volume, s.point))
        })
        .collect()
}

/// Profile of the Steiner system of `p` along `u` over `[−1, 1]`.
pub fn convexity_profile(p: &Polytope, u: &Direction, grid_size: usize) -> Result<Profile> {
    convexity_profile_with(p, u, grid_size, ConvexityCheck::Triples)
}

pub fn convexity_profile_with(
    p: &Polytope,
    u: &Direction,
    grid_size: usize,
    check: ConvexityCheck,
) -> Result<Profile> {
    check_grid(grid_size)?;
    let family = SteinerFamily::new(p, u)?;
    let grid = t_grid(-1.0, 1.0, grid_size);
    let samples = sample(|t| family.snapshot(t), &grid)?;
    Ok(Profile::new(grid, p.volume(), samples, check))
}

/// Profile of a vertex-speed shadow system over its parameter interval,
/// with `f(t) = (|K_a|·|K_t*|)⁻¹` for the fixed reference volume `|K_a|`.
/// The volumes `|K_t|` are reported but not constrained.
pub fn generic_convexity_check(s: &ShadowSystem, grid_size: usize) -> Result<Profile> {
    generic_convexity_check_with(s, grid_size, ConvexityCheck::Triples)
}

pub fn generic_convexity_check_with(
    s: &ShadowSystem,
    grid_size: usize,
    check: ConvexityCheck,
) -> Result<Profile> {
    check_grid(grid_size)?;
    let grid = t_grid(s.t_range.lo, s.t_range.hi, grid_size);
    let samples = sample(|t| s.snapshot(t), &grid)?;
    let reference = samples[0].0;
    Ok(Profile::new(grid, reference, samples, check))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{generate_body, BodySpec};
    use crate::chord::Interval;

    #[test]
    fn symmetric_square_has_flat_profile() {
        let sq = generate_body(&BodySpec::cube(2)).unwrap();
        let prof = convexity_profile(&sq, &Direction::axis(2, 1), 11).unwrap();
        assert_eq!(prof.f_values.len(), 11);
        assert!(prof.max_midpoint_violation < 1e-8);
        assert!(prof.evenness_defect < 1e-8);
        assert!((prof.f_at(0.0) - 1.0 / 8.0).abs() < 1e-10);
    }

    #[test]
    fn grid_is_symmetric_and_contains_zero() {
        let g = t_grid(-1.0, 1.0, 21);
        assert_eq!(g[10], 0.0);
        for k in 0..21 {
            assert_eq!(g[k], -g[20 - k]);
        }
        assert!(check_grid(4).is_err());
        assert!(check_grid(6).is_err());
        assert!(check_grid(5).is_ok());
    }

    #[test]
    fn pentagon_profile_is_convex_with_minimum_at_zero() {
        let p = generate_body(&BodySpec::random_polytope(2, 5, 11)).unwrap();
        let prof = convexity_profile_with(&p, &Direction::axis(2, 1), 21, ConvexityCheck::Pairwise).unwrap();
        assert!(prof.relative_violation() <= 1e-6);
        assert!(prof.relative_excess_at_zero() <= 1e-6);
        assert!(prof.volume_drift() < 1e-8);
    }

    #[test]
    fn translation_system_is_flat() {
        let sq = generate_body(&BodySpec::cube(2)).unwrap();
        let s = ShadowSystem::new(
            Direction::axis(2, 1),
            sq.vertices().to_vec(),
            vec![1.0; 4],
            Interval::new(-1.0, 1.0),
        )
        .unwrap();
        let prof = generic_convexity_check(&s, 9).unwrap();
        assert!(prof.relative_spread() < 1e-6);
    }
}
