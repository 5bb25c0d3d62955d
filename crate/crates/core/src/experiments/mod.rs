//! Numerical experiments around the volume product.
//!
//! * [`convexity_profile`] / [`generic_convexity_check`]: convexity of
//!   `f(t) = (|K|·|K_t*|)⁻¹` along Steiner and vertex-speed shadow systems.
//! * [`theorem2_certificate`]: replays the argument that a local maximizer
//!   of the volume product must be an ellipsoid — `f` is convex, even and
//!   minimal at `0`; if it is constant, every `K_t` must be a shear of `K`.
//! * [`ellipsoid_test`]: the chord-midpoint characterization of ellipsoids.
//! * [`symmetrization_flow`]: iterated Steiner symmetrization.
//! * [`local_max_probe`]: polytopes are never local maximizers.

mod certificate;
mod flow;
mod lemma;
mod probe;
mod profile;

pub use certificate::{theorem2_certificate, Certificate, ShearCheck, Verdict};
pub use flow::{symmetrization_flow, symmetrization_flow_with, FlowOptions, FlowStep, FlowTrace};
pub use lemma::{direction_set, ellipsoid_test, EllipsoidTest};
pub use probe::{local_max_probe, Perturbation, ProbeFamily, ProbeReport};
pub use profile::{
    convexity_profile, convexity_profile_with, generic_convexity_check, generic_convexity_check_with,
    t_grid, ConvexityCheck, Profile,
};

/// Relative tolerance for comparisons of `f` values.
pub const REL_TOL: f64 = 1e-6;
