//! Shared flags: body selection, slicing direction, output location.

use std::path::PathBuf;

use clap::Args;
use santalo_core::bodies::{generate_body, BodyKind, BodySpec};
use santalo_core::{Direction, Error, Polytope, Result, Vector};

#[derive(Args, Clone, Debug)]
pub struct BodyArgs {
    /// Body kind: polygon-regular, polygon-random, ellipse, ellipsoid, cube,
    /// simplex, crosspolytope, ball-approx, from-file.
    #[arg(long, value_parser = parse_kind)]
    pub body: BodyKind,
    /// Ambient dimension (2 or 3); inferred for planar-only and spatial-only kinds.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Vertex count for polygons, ellipses and the planar ball.
    #[arg(long)]
    pub m: Option<usize>,
    /// First semi-axis of an ellipse or ellipsoid.
    #[arg(long)]
    pub a: Option<f64>,
    /// Second semi-axis.
    #[arg(long)]
    pub b: Option<f64>,
    /// Third semi-axis (ellipsoids).
    #[arg(long)]
    pub c: Option<f64>,
    /// Rotation angle of an ellipse, in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub rot: Option<f64>,
    /// z-y-x rotation angles of an ellipsoid, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub angles: Option<Vec<f64>>,
    /// Icosphere subdivision level for spatial smooth bodies.
    #[arg(long)]
    pub level: Option<usize>,
    /// Body file for `--body from-file`.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Seed for random bodies and randomized experiments.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug)]
pub struct DirectionArgs {
    /// Direction u as an angle in the plane (radians).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "u")]
    pub u_angle: Option<f64>,
    /// Direction u as comma-separated coordinates (normalized on input).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub u: Option<Vec<f64>>,
    /// Keep generic smooth-body approximations instead of aligning them to u.
    #[arg(long)]
    pub no_align: bool,
}

fn parse_kind(s: &str) -> std::result::Result<BodyKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl BodyArgs {
    pub fn dim(&self) -> usize {
        match self.body {
            BodyKind::PolygonRegular | BodyKind::Ellipse => 2,
            BodyKind::Ellipsoid => 3,
            _ => self.dim.unwrap_or(2),
        }
    }

    pub fn spec(&self) -> Result<BodySpec> {
        let dim = self.dim();
        if let Some(d) = self.dim {
            if d != dim {
                return Err(Error::BadSpec(format!("{} does not support dimension {d}", self.body)));
            }
        }
        let mut spec = BodySpec::new(self.body, dim).with_seed(self.seed);
        spec.m = self.m;
        spec.level = self.level;
        match self.body {
            BodyKind::PolygonRandom => spec.m = Some(self.m.unwrap_or(if dim == 2 { 8 } else { 12 })),
            BodyKind::Ellipse => {
                spec.axes = vec![self.a.unwrap_or(1.0), self.b.unwrap_or(1.0)];
                spec.rotation = vec![self.rot.unwrap_or(0.0)];
            }
            BodyKind::Ellipsoid => {
                spec.axes = vec![self.a.unwrap_or(1.0), self.b.unwrap_or(1.0), self.c.unwrap_or(1.0)];
                spec.rotation = self.angles.clone().unwrap_or_else(|| vec![0.0; 3]);
            }
            BodyKind::FromFile => {
                let path = self
                    .file
                    .clone()
                    .ok_or_else(|| Error::BadSpec("--body from-file needs --file".into()))?;
                spec = BodySpec::from_file(path);
            }
            _ => {}
        }
        Ok(spec)
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self.body, BodyKind::Ellipse | BodyKind::Ellipsoid)
    }

    pub fn generate(&self) -> Result<Polytope> {
        generate_body(&self.spec()?)
    }

    /// The body, with smooth approximations made mirror-symmetric along `u`
    /// unless `no_align` is set.
    pub fn generate_aligned(&self, u: &Direction, no_align: bool) -> Result<Polytope> {
        if self.is_smooth() && !no_align {
            generate_body(&self.spec()?.with_align(u.as_vector()))
        } else {
            self.generate()
        }
    }
}

impl DirectionArgs {
    /// The chosen direction; defaults to the last coordinate axis.
    pub fn direction(&self, dim: usize) -> Result<Direction> {
        match (&self.u_angle, &self.u) {
            (Some(theta), _) => {
                if dim != 2 {
                    return Err(Error::BadSpec("--u-angle is only meaningful in the plane; use --u".into()));
                }
                Ok(Direction::from_angle(*theta))
            }
            (None, Some(c)) => {
                if c.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: c.len(),
                    });
                }
                Direction::new(Vector::from_slice(c))
            }
            (None, None) => Ok(Direction::axis(dim, dim - 1)),
        }
    }
}

/// Parses a point given as comma-separated coordinates.
pub fn point(coords: &[f64], dim: usize) -> Result<Vector> {
    if coords.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: coords.len(),
        });
    }
    Ok(Vector::from_slice(coords))
}
