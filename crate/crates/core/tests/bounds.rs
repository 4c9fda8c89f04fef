use std::f64::consts::{PI, TAU};

use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wrpg_core::biped::BipedSpec;
use wrpg_core::bounds::*;
use wrpg_core::explorespace::ExploreBounds;
use wrpg_core::geom2d::{disk_union_area, Point2, Rect};
use wrpg_core::lab::{bound_inputs_for, straight_route};
use wrpg_core::rpg::SampleRegion;
use wrpg_core::world::{build_stepping_stones, Aabb, Environment, SteppingStonesParams};

fn stones_inputs() -> BoundInputs<f64> {
    let s = build_stepping_stones(&SteppingStonesParams::default()).unwrap();
    bound_inputs_for(&s, 2.0 * s.max_step(), 150.0, 0, 0).unwrap()
}

#[test]
fn beta_m_matches_monte_carlo_frequency() {
    // Uniform (x, y, yaw) over a 2 m² square × [0, 2π) against a cylinder of
    // radius 0.1 and yaw span π/2.
    let beta = beta_m(0.1, PI / 2.0, 2.0).unwrap();
    assert_relative_eq!(beta, PI / 800.0, max_relative = 1e-14);
    let side = 2.0f64.sqrt();
    let c = Point2::new(0.5 * side, 0.5 * side);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 2_000_000u64;
    let hits = (0..n)
        .filter(|_| {
            let p = Point2::new(rng.gen_range(0.0..side), rng.gen_range(0.0..side));
            let yaw = rng.gen_range(0.0..TAU);
            p.dist(c) <= 0.1 && yaw < PI / 2.0
        })
        .count();
    let freq = hits as f64 / n as f64;
    let sigma = (beta * (1.0 - beta) / n as f64).sqrt();
    assert!((freq - beta).abs() < 4.0 * sigma, "frequency {freq} vs {beta}");
}

#[test]
fn beta_m_precondition_is_the_cylinder_volume() {
    let r: f64 = 0.2;
    assert_eq!(beta_m(r, TAU, PI * r * r).unwrap(), 1.0);
    assert!(beta_m(r, TAU, 0.99 * PI * r * r).is_err());
    assert!(beta_m(0.0, 1.0, 1.0).is_err());
    assert!(beta_m(0.1, 1.0, -1.0).is_err());
}

#[test]
fn mode_failure_examples() {
    assert_eq!(mode_failure_bound(3, 0.01, 0), 1.0);
    assert_eq!(mode_failure_bound(3, 0.01, 100), 1.0);
    let exact = 3.0 * (0..1000).fold(1.0f64, |a, _| a * 0.99);
    assert_relative_eq!(mode_failure_bound(3, 0.01, 1000), exact, max_relative = 1e-10);
    assert_relative_eq!(exact, 1.295e-4, max_relative = 1e-3);
}

#[test]
fn epsilon_examples() {
    assert_eq!(epsilon_for(0.4, 1.0), 0.2);
    assert_eq!(epsilon_for(1.0, 1.0), 0.25);
    assert_eq!(epsilon_for(0.5, 1.0), 0.25);
}

#[test]
fn exploration_failure_examples() {
    assert_eq!(exploration_failure_bound(10.0, 0.2, 50.0, 0).unwrap(), 1.0);
    let x = PI.powi(3) * 0.2f64.powi(6) / 6.0 / 50.0;
    assert_relative_eq!(x, 6.6146e-6, max_relative = 1e-4);
    let v = exploration_failure_bound(10.0, 0.2, 50.0, 1_000_000).unwrap();
    let oracle = 50.0 * (1_000_000.0 * (-x).ln_1p()).exp();
    assert_relative_eq!(v, oracle, max_relative = 1e-9);
    assert!((v - 0.067).abs() < 0.002, "{v}");
    assert!(exploration_failure_bound(1.0, 1.0, 1e-3, 10).is_err());
}

#[test]
fn exploration_bound_decreases_with_epsilon() {
    let eps: Vec<f64> = (1..=10).map(|k| 0.05 * k as f64).collect();
    for n in [10_000u64, 100_000, 1_000_000] {
        let vals: Vec<f64> = eps
            .iter()
            .map(|&e| exploration_failure_bound(10.0, e, 50.0, n).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{vals:?}");
    }
}

#[test]
fn combined_examples() {
    assert_relative_eq!(combined_bound(0.3, 0.4), 0.7);
    assert_eq!(combined_bound(0.8, 0.8), 1.0);
    assert_eq!(combined_bound(0.0, 0.37), 0.37);
}

#[test]
fn exponential_form_dominates_tight_form_on_grid() {
    let base = stones_inputs();
    let ns = [0u64, 1_000, 10_000, 100_000, 1_000_000];
    for &n_p in &ns {
        for &n_sigma in &ns {
            let i = BoundInputs { n_p, n_sigma, ..base };
            let (alpha, beta) = combined_exponential_form(&i).unwrap();
            let tight = i.combined().unwrap();
            assert!(alpha * (-beta).exp() >= tight * (1.0 - 1e-12), "({n_p}, {n_sigma})");
        }
    }
    let (a0, b0) = combined_exponential_form(&base).unwrap();
    assert_eq!(b0, 0.0);
    assert!(a0 >= 1.0);
    let one = BoundInputs { n_p: 5_000, n_sigma: 700, ..base };
    let two = BoundInputs { n_p: 10_000, n_sigma: 1_400, ..base };
    let (_, b1) = combined_exponential_form(&one).unwrap();
    let (_, b2) = combined_exponential_form(&two).unwrap();
    assert_relative_eq!(b2, 2.0 * b1, max_relative = 1e-12);
}

#[test]
fn area_f_upper_bound_examples() {
    assert_relative_eq!(area_f_upper_bound(10.0, 0.125, 0.5), 20.0 * PI, max_relative = 1e-12);
    assert!(area_f_upper_bound(10.0, 0.25e-6, 1e-6) < 2e-4);
}

#[test]
fn area_f_upper_bound_exceeds_union_area_of_routes() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let rho = rng.gen_range(0.1..1.0);
        let n = rng.gen_range(2..6);
        let pts: Vec<Point2<f64>> = (0..n)
            .map(|_| Point2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
            .collect();
        let l: f64 = pts.windows(2).map(|w| w[0].dist(w[1])).sum();
        // Disks every ε = ρ/4 of arclength.
        let eps = rho / 4.0;
        let mut centers = vec![pts[0]];
        for w in pts.windows(2) {
            let k = (w[0].dist(w[1]) / eps).ceil().max(1.0) as usize;
            centers.extend((1..=k).map(|j| w[0].lerp(w[1], j as f64 / k as f64)));
        }
        let area = disk_union_area(&centers, rho, None);
        assert!(area <= area_f_upper_bound(l, eps, rho) + PI * rho * rho, "{area}");
    }
}

#[test]
fn mode_convergence_grows_with_rho() {
    let rhos = [0.55, 1.1, 2.2, 2.75, 4.4];
    for n in [100u64, 1_000, 10_000] {
        let v: Vec<f64> = rhos
            .iter()
            .map(|&rho| mode_convergence_bound(4, 0.1, TAU, 3.0, rho, n))
            .collect();
        assert!(v.windows(2).all(|w| w[1] >= w[0]), "{v:?}");
    }
    let at_two = mode_convergence_bound(4, 0.1, TAU, 3.0, 2.0 * 0.55, 2_000);
    let at_five = mode_convergence_bound(4, 0.1, TAU, 3.0, 5.0 * 0.55, 2_000);
    assert!(at_five > at_two);
    assert!(mode_convergence_bound(4, 0.1, TAU, 3.0, 1.1, 10_000_000) < 1e-12);
}

#[test]
fn bound_inputs_for_stepping_stones() {
    let s = build_stepping_stones(&SteppingStonesParams::default()).unwrap();
    let rho = 2.0 * s.max_step();
    let i = bound_inputs_for(&s, rho, 150.0, 0, 0).unwrap();
    assert_eq!(i.m, s.truth_cylinders.len());
    assert!(i.r > 0.0 && i.eps == epsilon_for(i.r, rho));
    let route = straight_route(&s);
    assert_relative_eq!(i.l, route.length);
    let region = SampleRegion::around_route(&route, rho, Some(s.env.ground));
    assert_relative_eq!(i.area_f, region.total_area);
    assert!(i.h_m <= rho);
}

#[test]
fn vol_cn_on_open_floor_is_the_height_gate_ratio() {
    let spec = BipedSpec::default();
    let ground = Rect::new(Point2::new(-2.0, -2.0), Point2::new(2.0, 2.0));
    let env = Environment::open(ground, 2.0);
    // xy draws are interior with probability 1; z passes on [0.5·crouch, stand].
    let ratio = (spec.stand_height - 0.5 * spec.crouch_height) / 2.0;
    let bounds = env.explore_bounds;
    let n = 200_000;
    let est = estimate_vol_cn(&env, &spec, &bounds, n, &mut ChaCha8Rng::seed_from_u64(3));
    let expect = ratio * bounds.volume();
    assert!(est.ci95.0 <= expect && expect <= est.ci95.1, "{est:?} vs {expect}");
    let again = estimate_vol_cn(&env, &spec, &bounds, n, &mut ChaCha8Rng::seed_from_u64(3));
    assert_eq!(est, again);
}

#[test]
fn vol_cn_of_blocked_space_is_zero() {
    let spec = BipedSpec::default();
    let ground = Rect::new(Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0));
    let mut env = Environment::open(ground, 2.0);
    env.obstacles.push(Aabb::new([-3.0, -3.0, 0.0], [3.0, 3.0, 3.0]));
    let bounds = ExploreBounds::new([-1.0, -1.0, 0.0], [1.0, 1.0, 2.0]);
    let est = estimate_vol_cn(&env, &spec, &bounds, 5_000, &mut ChaCha8Rng::seed_from_u64(0));
    assert_eq!(est.accepted, 0);
    assert_eq!(est.volume, 0.0);
}

#[test]
fn f32_and_f64_agree() {
    let a = exploration_failure_bound(10.0f32, 0.2, 50.0, 1_000_000).unwrap();
    let b = exploration_failure_bound(10.0f64, 0.2, 50.0, 1_000_000).unwrap();
    assert_relative_eq!(a as f64, b, max_relative = 1e-3);
}

fn pow_by_squaring(mut base: f64, mut n: u64) -> f64 {
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

proptest! {
    #[test]
    fn bounds_are_probabilities_and_nonincreasing_in_n(
        m in 1usize..10,
        beta in 1e-6f64..1.0,
        n in 0u64..1_000_000,
        dn in 1u64..1_000_000,
        l in 0.1f64..50.0,
        eps in 0.01f64..0.5,
        vol_scale in 1.0f64..1e4,
    ) {
        let a = mode_failure_bound(m, beta, n);
        let b = mode_failure_bound(m, beta, n + dn);
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(b <= a);
        let vol = ball6_volume(eps) * vol_scale;
        let x = exploration_failure_bound(l, eps, vol, n).unwrap();
        let y = exploration_failure_bound(l, eps, vol, n + dn).unwrap();
        prop_assert!((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y));
        prop_assert!(y <= x);
    }

    #[test]
    fn small_x_powers_match_log_space(x in 1e-9f64..1e-5, n in 100_000u64..100_000_000) {
        let v = mode_failure_bound(1, x, n);
        prop_assert!((v - pow_by_squaring(1.0 - x, n)).abs() <= 1e-6 * v);
    }
}
