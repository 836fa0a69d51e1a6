//! Property checks on a 32x32 profile. Fast enough to run on every change.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

use proptest::prelude::*;
use specpart::bessel::{bessel_j, bessel_zero, BesselOrder};
use specpart::curved::{build_partition, default_bracket, sine_rule, SineRule};
use specpart::grid::{rasterize_shape, GridSpec};
use specpart::relaxed::{energy, gradient, p_norm, project_point, sharp_energies, sharpen, PartitionState};
use specpart::ShapeKind;

const N: usize = 32;
const C: f64 = 1e3;

fn shape_strategy() -> impl Strategy<Value = ShapeKind> {
    prop_oneof![Just(ShapeKind::Square), Just(ShapeKind::Disk), Just(ShapeKind::Triangle)]
}

/// Voronoi cells blended with the uniform state, so every density is
/// strictly inside (0, 1) and small perturbations stay admissible.
fn blended(shape: ShapeKind, k: usize, seed: u64, w: f64) -> PartitionState {
    let spec = GridSpec::new(shape, N).unwrap();
    let vor = PartitionState::voronoi(spec, k, seed).unwrap();
    let uni = PartitionState::uniform(spec, k);
    let fields = vor.fields.iter().zip(&uni.fields).map(|(a, b)| a.iter().zip(b).map(|(x, y)| w * x + (1.0 - w) * y).collect()).collect();
    PartitionState::new(spec, fields).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn relaxed_energy_is_monotone_in_p(shape in shape_strategy(), k in 2usize..5, seed in 0u64..1000) {
        let state = PartitionState::voronoi(GridSpec::new(shape, N).unwrap(), k, seed).unwrap();
        let values: Vec<f64> = [1.0, 2.0, 8.0].iter().map(|&p| energy(&state, p, C).unwrap()).collect();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-10)));
    }

    #[test]
    fn sharp_p_norms_are_sandwiched(shape in shape_strategy(), k in 2usize..6, seed in 0u64..1000) {
        let state = PartitionState::voronoi(GridSpec::new(shape, N).unwrap(), k, seed).unwrap();
        let lambdas = sharp_energies(&sharpen(&state).unwrap(), 1e-8).unwrap();
        let max = lambdas.iter().cloned().fold(0.0, f64::max);
        let mean = lambdas.iter().sum::<f64>() / k as f64;
        let mut prev = mean;
        for p in [1.0, 2.0, 4.0, 16.0, 64.0] {
            let e = p_norm(&lambdas, p);
            prop_assert!(e >= prev * (1.0 - 1e-12) && e <= max * (1.0 + 1e-12));
            prop_assert!(e >= max * (k as f64).powf(-1.0 / p) * (1.0 - 1e-12));
            prev = e;
        }
    }

    #[test]
    fn gradient_matches_finite_differences(shape in shape_strategy(), k in 2usize..4, seed in 0u64..1000, p in prop_oneof![Just(1.0), Just(4.0)]) {
        let state = blended(shape, k, seed, 0.6);
        let inside = rasterize_shape(&state.spec);
        let g = gradient(&state, p, C).unwrap();
        // Tangent direction: zero sum over cells at every node.
        let mut rng_state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng_state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut dir = vec![vec![0.0; state.spec.len()]; k];
        for node in inside.indices() {
            let r: Vec<f64> = (0..k).map(|_| next()).collect();
            let mean = r.iter().sum::<f64>() / k as f64;
            for i in 0..k {
                dir[i][node] = r[i] - mean;
            }
        }
        let h2 = state.spec.h().powi(2);
        let predicted: f64 = g.iter().zip(&dir).map(|(gi, di)| gi.iter().zip(di).map(|(a, b)| a * b).sum::<f64>()).sum::<f64>() * h2;
        let eps = 1e-3;
        let shifted = |s: f64| {
            let fields = state.fields.iter().zip(&dir).map(|(f, d)| f.iter().zip(d).map(|(x, y)| x + s * y).collect()).collect();
            energy(&PartitionState::new(state.spec, fields).unwrap(), p, C).unwrap()
        };
        let fd = (shifted(eps) - shifted(-eps)) / (2.0 * eps);
        prop_assert!((fd - predicted).abs() <= 1e-4 * predicted.abs().max(1e-2), "fd {fd} vs analytic {predicted}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sine_rule_identity(theta in 0.05f64..3.1, ell in 0.01f64..2.0) {
        prop_assume!((theta - FRAC_PI_3).abs() > 1e-3);
        match sine_rule(theta, ell).unwrap() {
            SineRule::Arc { radius, ac, arc_angle, outward } => {
                let base = (ell / (theta / 2.0 - FRAC_PI_6).sin()).abs();
                prop_assert!((radius / (theta / 2.0).sin() - base).abs() <= 1e-9 * base);
                prop_assert!((ac / FRAC_PI_6.sin() - base).abs() <= 1e-9 * base);
                prop_assert!((arc_angle - (theta - FRAC_PI_3)).abs() < 1e-15);
                prop_assert_eq!(outward, theta > FRAC_PI_3);
            }
            SineRule::Straight => prop_assert!(false, "θ away from π/3 gave a straight edge"),
        }
    }

    #[test]
    fn curved_partitions_meet_at_equal_angles(case in 0usize..5, t in 0.0f64..1.0) {
        let (shape, k) = [(ShapeKind::Disk, 6), (ShapeKind::Disk, 8), (ShapeKind::Disk, 9), (ShapeKind::Square, 3), (ShapeKind::Square, 5)][case];
        let (lo, hi) = default_bracket(shape, k).unwrap();
        let geometry = build_partition(shape, k, lo + t * (hi - lo)).unwrap();
        prop_assert_eq!(geometry.k(), k);
        prop_assert!(!geometry.triple_points.is_empty());
        for tp in &geometry.triple_points {
            prop_assert!(tp.angle_defect() < 1e-9, "defect {} at {:?}", tp.angle_defect(), tp.point);
        }
        for cell in &geometry.cells {
            prop_assert!(cell.closure_gap() < 1e-9);
            prop_assert!(cell.area() > 0.0);
        }
    }

    #[test]
    fn bessel_zeros_interlace(m in 0u32..8, n in 1u32..6) {
        let a = bessel_zero(BesselOrder::integer(m), n).unwrap();
        let b = bessel_zero(BesselOrder::integer(m + 1), n).unwrap();
        let c = bessel_zero(BesselOrder::integer(m), n + 1).unwrap();
        prop_assert!(a < b && b < c, "j_{m},{n} = {a}, j_{},{n} = {b}, j_{m},{} = {c}", m + 1, n + 1);
        prop_assert!(bessel_j(BesselOrder::integer(m), a).unwrap().abs() < 1e-10);
    }

    #[test]
    fn half_order_zeros_interlace(k in 1u32..12) {
        let a = bessel_zero(BesselOrder::half(k), 1).unwrap();
        let b = bessel_zero(BesselOrder::half(k + 1), 1).unwrap();
        let c = bessel_zero(BesselOrder::half(k), 2).unwrap();
        prop_assert!(a < b && b < c);
    }

    #[test]
    fn projection_lands_on_simplex(v in prop::collection::vec(-3.0f64..3.0, 1..8)) {
        let mut x = v.clone();
        project_point(&mut x);
        prop_assert!(x.iter().all(|&t| t >= 0.0));
        prop_assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mut again = x.clone();
        project_point(&mut again);
        for (a, b) in x.iter().zip(&again) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_is_nearest(v in prop::collection::vec(-3.0f64..3.0, 2..6), w in prop::collection::vec(0.0f64..1.0, 6)) {
        let mut x = v.clone();
        project_point(&mut x);
        // Any other simplex point is at least as far from v.
        let total: f64 = w[..v.len()].iter().sum::<f64>().max(1e-12);
        let y: Vec<f64> = w[..v.len()].iter().map(|t| t / total).collect();
        let d = |a: &[f64]| a.iter().zip(&v).map(|(s, t)| (s - t).powi(2)).sum::<f64>();
        prop_assert!(d(&x) <= d(&y) + 1e-12);
    }
}

#[test]
fn half_order_zeros_match_closed_forms() {
    let j = |k: u32| bessel_zero(BesselOrder::half(k), 1).unwrap();
    assert!((j(1) - PI).abs() < 1e-10);
    assert!((j(2) - bessel_zero(BesselOrder::integer(1), 1).unwrap()).abs() < 1e-12);
    assert!(j(3) < j(4) && j(4) < j(5));
}
