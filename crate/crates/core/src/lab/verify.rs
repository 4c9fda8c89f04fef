use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::LabError;
use crate::biped::{cn_clearance, Side};
use crate::bounds::{
    area_f_upper_bound, beta_m, combined_bound, combined_exponential_form, epsilon_for, exploration_failure_bound,
    mode_convergence_bound, mode_failure_bound, BoundInputs,
};
use crate::explorespace::{interpolate, Route, DEFAULT_W_ROT};
use crate::rpg::{sample_modes, SampleRegion};
use crate::world::Scenario;

/// The straight route between the start and goal projections.
pub fn straight_route(s: &Scenario) -> Route {
    Route::new(vec![s.query.start_pose(&s.robot), s.query.goal_pose(&s.robot)], DEFAULT_W_ROT)
}

/// Smallest clearance to the boundary of C_N along a route, checked every
/// centimetre of arclength.
fn route_clearance(s: &Scenario, route: &Route) -> f64 {
    let mut c = f64::INFINITY;
    for w in route.vertices.windows(2) {
        let n = (crate::explorespace::distance(&w[0], &w[1], DEFAULT_W_ROT) / 0.01).ceil().max(1.0) as usize;
        for k in 0..=n {
            let p = interpolate(&w[0], &w[1], k as f64 / n as f64);
            c = c.min(cn_clearance(&s.env, &s.robot, &p));
        }
    }
    c
}

/// Bound inputs for a scenario with ground-truth cylinders, taking the
/// straight start-goal route as the reference path.
pub fn bound_inputs_for(s: &Scenario, rho: f64, vol_cn: f64, n_p: u64, n_sigma: u64) -> Result<BoundInputs<f64>, LabError> {
    if s.truth_cylinders.is_empty() {
        return Err(LabError::MissingTruth);
    }
    let route = straight_route(s);
    let region = SampleRegion::around_route(&route, rho, Some(s.env.ground));
    let r = route_clearance(s, &route);
    let r_m = s.truth_cylinders.iter().map(|c| c.radius).fold(f64::INFINITY, f64::min);
    let dtheta_m = s.truth_cylinders.iter().map(|c| c.yaw_span()).fold(f64::INFINITY, f64::min);
    let h_m = s
        .truth_cylinders
        .iter()
        .map(|c| route.planar_distance(c.center) + c.radius)
        .fold(0.0, f64::max);
    Ok(BoundInputs {
        m: s.truth_cylinders.len(),
        r_m,
        dtheta_m,
        area_f: region.total_area,
        l: route.length,
        eps: epsilon_for(r, rho),
        vol_cn,
        r,
        rho,
        h_m,
        n_p,
        n_sigma,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub name: &'static str,
    pub n_p: u64,
    pub n_sigma: u64,
    pub value: f64,
}

/// Every bound on the (N_P, N_σ) grid.
pub fn bound_table(base: &BoundInputs<f64>, np_list: &[u64], nsigma_list: &[u64]) -> Result<Vec<BoundRow>, LabError> {
    let mut rows = Vec::new();
    for &n_p in np_list {
        for &n_sigma in nsigma_list {
            let i = BoundInputs { n_p, n_sigma, ..*base };
            let beta = beta_m(i.r_m, i.dtheta_m, i.area_f)?;
            let mode = mode_failure_bound(i.m, beta, n_sigma);
            let explore = exploration_failure_bound(i.l, i.eps, i.vol_cn, n_p)?;
            let (alpha, b) = combined_exponential_form(&i)?;
            let values = [
                ("beta_m", beta),
                ("mode_failure", mode),
                ("exploration_failure", explore),
                ("combined", combined_bound(explore, mode)),
                ("combined_exponential", alpha * (-b).exp()),
                ("area_f", i.area_f),
                ("area_f_upper", area_f_upper_bound(i.l, i.eps, i.rho)),
                (
                    "mode_convergence",
                    mode_convergence_bound(i.m, i.r_m, i.dtheta_m, i.l, i.rho, n_sigma),
                ),
            ];
            rows.extend(values.into_iter().map(|(name, value)| BoundRow { name, n_p, n_sigma, value }));
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBoundRow {
    pub n_sigma: u64,
    pub trials: usize,
    pub failures: usize,
    pub empirical: f64,
    pub bound: f64,
    /// Binomial standard deviation at the bound.
    pub sigma: f64,
    pub violation: bool,
}

/// Frequency with which some truth cylinder gets no sample from the
/// planner's placement sampler over F_σ of the straight route, against
/// M(1 - β_m)^{N_σ}. Cylinder `i` is served by left draws when `i` is even
/// and right draws when odd.
pub fn verify_mode_bound(s: &Scenario, rho: f64, nsigma_list: &[u64], trials: usize, base_seed: u64) -> Result<Vec<ModeBoundRow>, LabError> {
    if s.truth_cylinders.is_empty() {
        return Err(LabError::MissingTruth);
    }
    if trials == 0 {
        return Err(LabError::Invalid("need at least one trial".into()));
    }
    let route = straight_route(s);
    let region = SampleRegion::around_route(&route, rho, Some(s.env.ground));
    for (i, c) in s.truth_cylinders.iter().enumerate() {
        let inside_disks = route.planar_distance(c.center) + c.radius <= rho;
        let g = s.env.ground;
        let inside_ground = c.center.x - c.radius >= g.min.x
            && c.center.x + c.radius <= g.max.x
            && c.center.y - c.radius >= g.min.y
            && c.center.y + c.radius <= g.max.y;
        if !(inside_disks && inside_ground) {
            return Err(LabError::Invalid(format!("truth cylinder {i} is not inside F_sigma at rho = {rho}")));
        }
    }
    let m = s.truth_cylinders.len();
    let r_m = s.truth_cylinders.iter().map(|c| c.radius).fold(f64::INFINITY, f64::min);
    let dtheta = s.truth_cylinders.iter().map(|c| c.yaw_span()).fold(f64::INFINITY, f64::min);
    let beta = beta_m(r_m, dtheta, region.total_area)?;
    let mut rows = Vec::new();
    for &n in nsigma_list {
        let failures = (0..trials as u64)
            .into_par_iter()
            .filter(|&i| {
                let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(i));
                let draws = sample_modes(&s.env, &s.robot, &region, n as usize, &mut rng);
                s.truth_cylinders.iter().enumerate().any(|(k, c)| {
                    let side = if k % 2 == 0 { Side::Left } else { Side::Right };
                    !draws.iter().any(|(sd, p)| *sd == side && c.contains(p.xy(), p.yaw))
                })
            })
            .count();
        let bound = mode_failure_bound(m, beta, n);
        let empirical = failures as f64 / trials as f64;
        let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
        rows.push(ModeBoundRow {
            n_sigma: n,
            trials,
            failures,
            empirical,
            bound,
            sigma,
            violation: empirical > bound + 3.0 * sigma,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedRow {
    pub a_f: f64,
    pub b_f: f64,
    pub trials: usize,
    pub observed: f64,
    pub bound: f64,
    pub sigma: f64,
    pub violation: bool,
}

/// Two-stage Bernoulli processes: stage A fails with probability `a_f`;
/// stage B runs only after A succeeds and then fails with probability `b_f`.
/// The joint failure frequency is compared against min(1, a_f + b_f).
pub fn verify_combined(grid: &[(f64, f64)], trials: usize, base_seed: u64) -> Result<Vec<CombinedRow>, LabError> {
    if trials == 0 {
        return Err(LabError::Invalid("need at least one trial".into()));
    }
    let mut rows = Vec::new();
    for (k, &(a_f, b_f)) in grid.iter().enumerate() {
        if !(0.0..=1.0).contains(&a_f) || !(0.0..=1.0).contains(&b_f) {
            return Err(LabError::Invalid(format!("probabilities out of range: ({a_f}, {b_f})")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(k as u64));
        let mut failed = 0usize;
        for _ in 0..trials {
            let a_ok = !rng.gen_bool(a_f);
            let joint_ok = a_ok && !rng.gen_bool(b_f);
            failed += usize::from(!joint_ok);
        }
        let bound = combined_bound(a_f, b_f);
        let observed = failed as f64 / trials as f64;
        let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
        rows.push(CombinedRow {
            a_f,
            b_f,
            trials,
            observed,
            bound,
            sigma,
            violation: observed > bound + 3.0 * sigma,
        });
    }
    Ok(rows)
}
