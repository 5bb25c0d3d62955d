//! Computational convex geometry for the volume product.
//!
//! Polytopes in dimensions 2 and 3 are the universal body representation.
//! On top of them the crate builds polar bodies and Santaló points
//! ([`duality`]), Steiner symmetrals and shadow systems ([`symmetrization`]),
//! and the numerical experiments that probe convexity of
//! `t ↦ |K_t*|⁻¹`, the equality case of the Blaschke–Santaló inequality and
//! the chord-midpoint characterization of ellipsoids ([`experiments`]).

// `!(x > y)` is used deliberately so that NaN falls on the rejecting side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bodies;
pub mod chord;
pub mod duality;
pub mod error;
pub mod exact;
pub mod experiments;
mod hull;
pub mod io;
pub mod polytope;
pub mod subdivision;
pub mod symmetrization;
pub mod vector;

pub use chord::{chord, chord_structure, project, ChordStructure, Interval};
pub use duality::{ball_volume, polar, santalo_point, volume_product, ProductReport, SantaloResult};
pub use error::{Error, Result};
pub use polytope::{canonicalize, hausdorff_distance, Facet, Polytope, TOL};
pub use subdivision::{overlay, AffineFn, Cell, Subdivision};
pub use vector::{Direction, Frame, Vector};
