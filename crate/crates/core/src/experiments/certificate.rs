use serde::Serialize;

use super::profile::{convexity_profile, Profile};
use super::REL_TOL;
use crate::error::Result;
use crate::polytope::Polytope;
use crate::symmetrization::{fit_affine_shear, ShearFit, SteinerFamily};
use crate::vector::{Direction, Vector};

/// Parameters at which `K_t` is compared with `K_{−1}` by a shear fit.
const FIT_PARAMETERS: [f64; 4] = [-0.5, 0.0, 0.5, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConsistentWithEllipsoid,
    NotLocalMaximizer,
    Inconclusive,
}

/// One shear fit `K_{−1} → K_t`.
#[derive(Clone, Debug, Serialize)]
pub struct ShearCheck {
    pub t: f64,
    pub fitted: bool,
    pub v: Option<Vector>,
    pub c: Option<f64>,
    pub residual: Option<f64>,
    /// Why the fit failed, if it did.
    pub reason: Option<String>,
}

impl ShearCheck {
    fn from_fit(t: f64, fit: &ShearFit) -> Self {
        match fit {
            ShearFit::Fit(s) => Self {
                t,
                fitted: true,
                v: Some(s.v),
                c: Some(s.c),
                residual: Some(s.residual),
                reason: None,
            },
            ShearFit::NoFit(why) => Self {
                t,
                fitted: false,
                v: None,
                c: None,
                residual: None,
                reason: Some(why.clone()),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub profile: Profile,
    pub f_convex: bool,
    pub f_even: bool,
    pub f_constant: bool,
    /// Shear fits, attempted only when `f` is constant.
    pub shear_fits: Vec<ShearCheck>,
    /// Largest difference of the fitted `(v, c)` between parameters.
    pub shear_spread: Option<f64>,
    pub verdict: Verdict,
}

impl Certificate {
    /// The representative shear fit (the one at `t = 1`), if any was attempted.
    pub fn shear_fit(&self) -> Option<&ShearCheck> {
        self.shear_fits.last()
    }
}

/// Runs the profile of the Steiner system of `p` along `u` and classifies it.
///
/// * `f` constant and every `K_t` a shear of `K_{−1}` with a common `(v, c)`:
///   [`Verdict::ConsistentWithEllipsoid`].
/// * `f(0) < f(−1)` beyond tolerance: the symmetral has a larger volume
///   product, so `p` is [`Verdict::NotLocalMaximizer`].
/// * otherwise [`Verdict::Inconclusive`].
pub fn theorem2_certificate(p: &Polytope, u: &Direction, grid_size: usize) -> Result<Certificate> {
    let profile = convexity_profile(p, u, grid_size)?;
    let f_convex = profile.relative_violation() <= REL_TOL;
    let f_even = profile.relative_evenness_defect() <= REL_TOL;
    let f_constant = profile.relative_spread() <= REL_TOL && f_convex && f_even;

    let mut shear_fits = Vec::new();
    let mut shear_spread = None;
    if f_constant {
        let family = SteinerFamily::new(p, u)?;
        let start = family.snapshot(-1.0)?;
        for t in FIT_PARAMETERS {
            let kt = family.snapshot(t)?;
            let fit = fit_affine_shear(&start, &kt, u, t + 1.0)?;
            shear_fits.push(ShearCheck::from_fit(t, &fit));
        }
        if shear_fits.iter().all(|s| s.fitted) {
            let mut spread: f64 = 0.0;
            for a in &shear_fits {
                for b in &shear_fits {
                    let (va, vb) = (a.v.expect("fitted"), b.v.expect("fitted"));
                    spread = spread
                        .max(va.distance(&vb))
                        .max((a.c.expect("fitted") - b.c.expect("fitted")).abs());
                }
            }
            shear_spread = Some(spread);
        }
    }

    let f0 = profile.f_at(0.0);
    let f_start = profile.f_values[0];
    let verdict = if f_constant && shear_spread.is_some_and(|s| s <= REL_TOL) {
        Verdict::ConsistentWithEllipsoid
    } else if f0 < f_start - REL_TOL * f_start {
        Verdict::NotLocalMaximizer
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        profile,
        f_convex,
        f_even,
        f_constant,
        shear_fits,
        shear_spread,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{generate_body, BodySpec};

    #[test]
    fn aligned_ellipse_is_consistent() {
        let u = Direction::from_angle(0.9);
        let e = generate_body(&BodySpec::ellipse(2.0, 1.0, 0.3).with_align(&u)).unwrap();
        let cert = theorem2_certificate(&e, &u, 9).unwrap();
        assert!(cert.f_constant);
        assert_eq!(cert.verdict, Verdict::ConsistentWithEllipsoid, "{cert:?}");
        assert!(cert.shear_spread.unwrap() < 1e-6);
    }

    #[test]
    fn oblique_square_is_not_a_maximizer() {
        let sq = crate::polytope::canonicalize(&[
            Vector::new2(0.0, 0.0),
            Vector::new2(1.0, 0.0),
            Vector::new2(1.0, 1.0),
            Vector::new2(0.0, 1.0),
        ])
        .unwrap();
        let u = Direction::new(Vector::new2(1.0, 2.0)).unwrap();
        let cert = theorem2_certificate(&sq, &u, 9).unwrap();
        assert_eq!(cert.verdict, Verdict::NotLocalMaximizer);
        assert!(cert.shear_fits.is_empty());
    }
}
