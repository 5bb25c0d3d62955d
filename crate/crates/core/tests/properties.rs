//! Randomized invariants of the geometry, duality and symmetrization layers.

use proptest::prelude::*;

use santalo_core::bodies::{generate_body, BodySpec};
use santalo_core::duality::{polar, polar_volume, santalo_point, volume_product};
use santalo_core::polytope::{canonicalize, hausdorff_distance, Polytope};
use santalo_core::symmetrization::{reflect, steiner_snapshot, steiner_symmetral};
use santalo_core::vector::{Direction, Vector};

fn body(dim: usize, m: usize, seed: u64) -> Polytope {
    generate_body(&BodySpec::random_polytope(dim, m, seed)).unwrap()
}

fn direction(dim: usize, a: f64, b: f64) -> Direction {
    if dim == 2 {
        Direction::from_angle(a)
    } else {
        Direction::new(Vector::new3(a.cos() * b.sin(), a.sin() * b.sin(), b.cos())).unwrap()
    }
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn canonicalize_is_idempotent(dim in 2usize..=3, m in 4usize..30, seed in any::<u64>()) {
        let p = body(dim, m, seed);
        let q = canonicalize(p.vertices()).unwrap();
        prop_assert_eq!(p.vertices(), q.vertices());
        prop_assert_eq!(&p, &q);
    }

    #[test]
    fn volume_and_centroid_ignore_input_order(dim in 2usize..=3, m in 4usize..20, seed in any::<u64>(), rot in 0usize..50) {
        let p = body(dim, m, seed);
        let mut pts = p.vertices().to_vec();
        pts.reverse();
        let k = rot % pts.len();
        pts.rotate_left(k);
        let q = canonicalize(&pts).unwrap();
        prop_assert!((p.volume() - q.volume()).abs() <= 1e-12 * p.volume());
        prop_assert!(p.centroid().distance(&q.centroid()) <= 1e-12);
    }

    #[test]
    fn centroid_is_translation_equivariant(m in 3usize..20, seed in any::<u64>(), wx in -5.0..5.0f64, wy in -5.0..5.0f64) {
        let p = body(2, m, seed);
        let w = Vector::new2(wx, wy);
        let moved = p.translate(&w);
        prop_assert!((moved.centroid() - (p.centroid() + w)).norm() < 1e-12);
    }

    #[test]
    fn bipolar_returns_the_body(dim in 2usize..=3, m in 4usize..16, seed in any::<u64>(), s in 0.0..0.9f64) {
        let p = body(dim, m, seed);
        // A pole between the centroid and a vertex, kept well inside.
        let z = p.centroid() + (p.vertices()[0] - p.centroid()) * (0.5 * s);
        let pp = polar(&polar(&p, &z).unwrap(), &z).unwrap();
        prop_assert!(hausdorff_distance(&p, &pp).unwrap() < 1e-8);
    }

    #[test]
    fn polar_volume_is_midpoint_convex_in_the_pole(m in 3usize..16, seed in any::<u64>(), s1 in 0.0..0.8f64, s2 in 0.0..0.8f64) {
        let p = body(2, m, seed);
        let c = p.centroid();
        let z1 = c + (p.vertices()[0] - c) * s1;
        let z2 = c + (p.vertices()[1] - c) * s2;
        let mid = (z1 + z2) * 0.5;
        let (v1, v2, vm) = (polar_volume(&p, &z1).unwrap(), polar_volume(&p, &z2).unwrap(), polar_volume(&p, &mid).unwrap());
        prop_assert!(vm <= v1.max(v2) * (1.0 + 1e-12));
        prop_assert!(vm <= 0.5 * (v1 + v2) * (1.0 + 1e-12));
    }

    #[test]
    fn polar_reverses_inclusion(m in 3usize..16, seed in any::<u64>(), depth in 0.05..0.5f64) {
        let p = body(2, m, seed);
        let c = p.centroid();
        let f = &p.facets()[0];
        // Q ⊂ P: cut P by a plane parallel to one of its facets.
        let q = p.cut(&f.normal, f.offset - depth * f.slack(&c)).unwrap();
        let (pp, qq) = (polar(&p, &c).unwrap(), polar(&q, &c).unwrap());
        for v in pp.vertices() {
            prop_assert!(qq.max_violation(v) <= 1e-9);
        }
    }

    #[test]
    fn volume_product_is_affine_invariant(m in 3usize..14, seed in any::<u64>(),
        a in 0.3..3.0f64, b in -1.0..1.0f64, c in -1.0..1.0f64, d in 0.3..3.0f64, tx in -3.0..3.0f64) {
        prop_assume!((a * d - b * c).abs() > 0.1);
        let p = body(2, m, seed);
        let mut lin = nalgebra::Matrix3::identity();
        lin[(0, 0)] = a; lin[(0, 1)] = b; lin[(1, 0)] = c; lin[(1, 1)] = d;
        let q = p.affine_image(&lin, &Vector::new2(tx, -tx)).unwrap();
        let (pp, pq) = (volume_product(&p).unwrap().product, volume_product(&q).unwrap().product);
        prop_assert!((pp - pq).abs() <= 1e-6 * pp);
    }

    #[test]
    fn santalo_point_is_interior_and_below_ball_bound(dim in 2usize..=3, m in 4usize..20, seed in any::<u64>()) {
        let p = body(dim, m, seed);
        let s = santalo_point(&p).unwrap();
        prop_assert!(s.converged && s.residual < 1e-8);
        prop_assert!(p.min_slack(&s.point) > 0.0);
        let r = volume_product(&p).unwrap();
        prop_assert_eq!(r.product, r.body_volume * r.santalo.polar_volume);
        prop_assert!(r.ratio_to_ball <= 1.0 + 1e-6);
    }

    #[test]
    fn reflection_is_an_involution(dim in 2usize..=3, m in 4usize..16, seed in any::<u64>(), a in 0.0..6.3f64, b in 0.1..3.0f64) {
        let p = body(dim, m, seed);
        let u = direction(dim, a, b);
        let back = reflect(&reflect(&p, &u).unwrap(), &u).unwrap();
        prop_assert!(hausdorff_distance(&p, &back).unwrap() < 1e-12);
    }

    #[test]
    fn steiner_family_preserves_volume_and_symmetry(dim in 2usize..=3, m in 4usize..14, seed in any::<u64>(),
        a in 0.0..6.3f64, b in 0.1..3.0f64, t in -1.0..1.0f64) {
        let p = body(dim, m, seed);
        let u = direction(dim, a, b);
        let st = steiner_symmetral(&p, &u).unwrap();
        prop_assert!((st.volume() - p.volume()).abs() <= 1e-9 * p.volume().max(1.0));
        prop_assert!(hausdorff_distance(&reflect(&st, &u).unwrap(), &st).unwrap() <= 1e-9);
        let kt = steiner_snapshot(&p, &u, t).unwrap();
        prop_assert!((kt.volume() - p.volume()).abs() <= 1e-8);
        let start = steiner_snapshot(&p, &u, -1.0).unwrap();
        prop_assert!(hausdorff_distance(&start, &p).unwrap() < 1e-9);
        let end = steiner_snapshot(&p, &u, 1.0).unwrap();
        prop_assert!(hausdorff_distance(&end, &reflect(&p, &u).unwrap()).unwrap() < 1e-9);
    }

    #[test]
    fn symmetral_does_not_decrease_the_product(m in 3usize..14, seed in any::<u64>(), a in 0.0..3.2f64) {
        let p = body(2, m, seed);
        let u = Direction::from_angle(a);
        let before = volume_product(&p).unwrap().product;
        let after = volume_product(&steiner_symmetral(&p, &u).unwrap()).unwrap().product;
        prop_assert!(after >= before * (1.0 - 1e-6));
    }
}
