use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;

use spacelike::metric_grid::{MetricField, PeriodicGrid, Sym2};
use spacelike::minkowski::{boost_rotation, cone_level, lorentz_dot, MinkVector};
use spacelike::moduli::{hyp_distance, mu_of_w, project_to_ball, torus_modulus, UHPoint};
use spacelike::rigidity::{convex_hull3, line_meets_level};

fn uh() -> impl Strategy<Value = UHPoint> {
    (-3.0..3.0f64, 0.05..5.0f64).prop_map(|(x, y)| UHPoint::new(x, y).unwrap())
}

fn future() -> impl Strategy<Value = MinkVector> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.1..3.0f64).prop_map(|(x, y, s)| MinkVector::new(x, y, (x * x + y * y + s * s).sqrt()))
}

fn level(p: MinkVector) -> f64 {
    cone_level(p).expect("future timelike")
}

/// Real roots of `(a² − 1)x² + 2arx + r² − α² = 0`, the line `z = ax + r`
/// against `z² − x² = α²`.
fn quadratic_roots(a: f64, r: f64, alpha: f64) -> usize {
    let (qa, qb, qc) = (a * a - 1.0, 2.0 * a * r, r * r - alpha * alpha);
    if qa.abs() < 1e-12 {
        return usize::from(qb.abs() > 1e-12);
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc > 0.0 {
        2
    } else if disc == 0.0 {
        1
    } else {
        0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn beltrami_coefficient_is_in_the_disc(w in uh()) {
        prop_assert!(mu_of_w(w).norm() < 1.0);
    }

    #[test]
    fn hyperbolic_distance_is_a_metric(a in uh(), b in uh(), c in uh()) {
        let (ab, ba) = (hyp_distance(a, b), hyp_distance(b, a));
        prop_assert!(hyp_distance(a, a).abs() < 1e-12);
        prop_assert!((ab - ba).abs() <= 1e-12 * (1.0 + ab));
        prop_assert!(ab <= hyp_distance(a, c) + hyp_distance(c, b) + 1e-9);
    }

    #[test]
    fn hyperbolic_distance_is_mobius_invariant(a in uh(), b in uh(), t in 0.0..TAU, s in -1.0..1.0f64) {
        // w ↦ (cos t w + sin t) / (−sin t w + cos t) followed by a dilation and shift
        let m = |w: UHPoint| {
            let z = w.to_complex();
            let r = (z * t.cos() + t.sin()) / (-z * t.sin() + t.cos());
            UHPoint::from_complex(r * s.exp() + Complex64::new(s, 0.0)).unwrap()
        };
        let d = hyp_distance(a, b);
        prop_assert!((hyp_distance(m(a), m(b)) - d).abs() <= 1e-7 * (1.0 + d));
    }

    #[test]
    fn ball_projection_lands_inside(c in uh(), w in uh(), rho in 0.01..1.0f64) {
        let p = project_to_ball(w.to_complex(), c, rho);
        prop_assert!(hyp_distance(p, c) <= rho * (1.0 + 1e-9));
        if hyp_distance(w, c) <= rho {
            prop_assert!(hyp_distance(p, w) <= 1e-9);
        }
    }

    #[test]
    fn level_is_reverse_concave(a in future(), b in future(), t in 0.0..1.0f64) {
        let mix = a * t + b * (1.0 - t);
        prop_assert!(level(mix) >= t * level(a) + (1.0 - t) * level(b) - 1e-12);
        prop_assert!(level(a + b) >= level(a) + level(b) - 1e-12);
    }

    #[test]
    fn midpoint_law(a in future(), b in future()) {
        let m = (a + b) * 0.5;
        let lhs = lorentz_dot(m, m);
        let rhs = 0.5 * lorentz_dot(a, a) + 0.5 * lorentz_dot(b, b) - 0.25 * lorentz_dot(a - b, a - b);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lorentz_dot(a, a).abs() + lorentz_dot(b, b).abs()));
    }

    #[test]
    fn isometries_preserve_the_level(p in future(), angle in 0.0..TAU, rapidity in -2.0..2.0f64) {
        let q = boost_rotation(angle, rapidity).apply(p);
        prop_assert!((level(q) - level(p)).abs() <= 1e-10 * q.euclid_norm());
    }

    #[test]
    fn discriminant_rule_matches_the_quadratic(a in -3.0..3.0f64, r in -4.0..4.0f64, alpha in 1.01..8.0f64) {
        let margin = a * a - (1.0 - r * r / (alpha * alpha));
        prop_assume!(margin.abs() > 1e-6 && (a * a - 1.0).abs() > 1e-6);
        prop_assert_eq!(line_meets_level(a, r, alpha), quadratic_roots(a, r, alpha) == 2);
    }

    #[test]
    fn hull_contains_its_points(raw in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), 5..40)) {
        let pts: Vec<MinkVector> = raw.iter().map(|&(x, y, z)| MinkVector::new(x, y, z)).collect();
        let hull = convex_hull3(&pts).unwrap();
        prop_assert!(hull.max_outside_distance(&pts) <= 1e-12);
        prop_assert!(hull.hull_vertices.len() >= 4 && hull.hull_vertices.len() <= pts.len());
        // Euler: closed triangulated sphere
        prop_assert_eq!(hull.hull_faces.len(), 2 * hull.hull_vertices.len() - 4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn modulus_ignores_scale(e in 0.5..3.0f64, f in -0.4..0.4f64, g in 0.5..3.0f64, scale in 0.01..100.0f64) {
        let grid = PeriodicGrid::new(16).unwrap();
        let metric = MetricField::from_fn(grid, |x, y| {
            Sym2::new(e * (1.0 + 0.3 * (TAU * y).cos()), f * (1.0 + 0.5 * (TAU * x).sin()), g)
        });
        let w = torus_modulus(&metric).unwrap();
        let ws = torus_modulus(&metric.scale(scale)).unwrap();
        prop_assert!(hyp_distance(w, ws) <= 1e-10);
    }

    #[test]
    fn rectangles_have_imaginary_moduli(e in 0.2..5.0f64, g in 0.2..5.0f64) {
        let grid = PeriodicGrid::new(8).unwrap();
        let w = torus_modulus(&MetricField::constant(grid, Sym2::new(e, 0.0, g))).unwrap();
        prop_assert!(w.re().abs() < 1e-9);
        prop_assert!((w.im() - (g / e).sqrt()).abs() < 1e-9 * (g / e).sqrt());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn facet_bound_is_equivariant(kx in -0.3..0.3f64, ky in -0.3..0.3f64, generator in 0usize..4, inverse: bool) {
        use spacelike::rigidity::{facet_level_alpha, make_genus2_group, Letter, OrbitHull, DEFAULT_RADIUS};
        let group = make_genus2_group().unwrap();
        let p = MinkVector::from_klein(kx, ky, 1.0);
        let q = group.letter(Letter { generator, inverse }).apply(p);
        let at_p = facet_level_alpha(&OrbitHull::from_orbit(&group, p, 4, Some(DEFAULT_RADIUS)).unwrap()).unwrap();
        // the neighbours of g·p are g h g⁻¹ (g·p): two letters longer than those of p
        let at_q = facet_level_alpha(&OrbitHull::from_orbit(&group, q, 6, Some(DEFAULT_RADIUS)).unwrap()).unwrap();
        prop_assert!((at_p - at_q).abs() <= 1e-8 * at_p, "{} vs {}", at_p, at_q);
    }
}
