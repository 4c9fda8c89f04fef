use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::explore::ExplorationGraph;
use super::modes::{search_modes, ModeGraph, SampleRegion};
use super::RpgError;
use crate::biped::{foot_valid, is_reachable, transition_feasible, BipedSpec, Mode, Side};
use crate::explorespace::Route;
use crate::world::{Environment, Query};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanParams {
    /// F_σ disk radius, meters.
    pub rho: f64,
    pub initial_np: usize,
    /// Placements drawn per side in the first round.
    pub initial_nsigma: usize,
    pub max_rounds: u32,
    /// Placements per side drawn between connectivity checks.
    pub batch: usize,
}

impl PlanParams {
    /// Rounds that double up to cumulative budgets of `np` and `nsigma` in the last round.
    pub fn with_budget(rho: f64, np: usize, nsigma: usize, max_rounds: u32) -> Self {
        let div = 1usize << max_rounds.saturating_sub(1);
        PlanParams {
            rho,
            initial_np: (np / div).max(1),
            initial_nsigma: (nsigma / div).max(1),
            max_rounds,
            batch: 50,
        }
    }

    pub fn validate(&self) -> Result<(), RpgError> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(RpgError::Params("rho must be positive".into()));
        }
        if self.initial_np == 0 || self.initial_nsigma == 0 || self.max_rounds == 0 || self.batch == 0 {
            return Err(RpgError::Params("sample counts, rounds and batch must be positive".into()));
        }
        Ok(())
    }

    /// Cumulative (N_P, N_σ) targets of round `k`, counted from 1.
    pub fn round_targets(&self, k: u32) -> (usize, usize) {
        let m = 1usize << (k - 1);
        (self.initial_np * m, self.initial_nsigma * m)
    }

    /// Cumulative budgets after the last round.
    pub fn total_budget(&self) -> (usize, usize) {
        self.round_targets(self.max_rounds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanStatus {
    Solved,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanCounters {
    /// Accepted exploration samples.
    pub n_p_used: usize,
    /// Exploration draws including those rejected by the necessary check.
    pub n_p_draws: u64,
    /// Placements drawn per side.
    pub n_sigma_used: usize,
    /// Placements that failed foot validity.
    pub placements_invalid: usize,
    pub rounds: u32,
    pub routes_found: u32,
    pub edges_checked: usize,
    pub double_support_nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub status: PlanStatus,
    pub mode_path: Option<Vec<Mode>>,
    pub route: Option<Route>,
    pub counters: PlanCounters,
    pub wall_ms: f64,
}

impl PlanResult {
    pub fn solved(&self) -> bool {
        self.status == PlanStatus::Solved
    }

    /// Samples spent until success: accepted exploration samples plus
    /// placements per side.
    pub fn samples_used(&self) -> usize {
        self.counters.n_p_used + self.counters.n_sigma_used
    }
}

/// Run the three stages in rounds of doubling budgets, keeping all samples,
/// until the start and goal stances connect or the rounds run out.
pub fn plan<R: Rng + ?Sized>(
    env: &Environment,
    spec: &BipedSpec,
    query: &Query,
    params: &PlanParams,
    rng: &mut R,
) -> Result<PlanResult, RpgError> {
    params.validate()?;
    let t0 = Instant::now();
    let mut explore = ExplorationGraph::new(env, spec, query)?;
    let mut modes = ModeGraph::new(spec);
    modes.add_stance(env, spec, &query.start);
    modes.add_stance(env, spec, &query.goal);
    let mut c = PlanCounters::default();
    let mut last_route = None;

    let finish = |status, path, route, mut c: PlanCounters, explore: &ExplorationGraph, modes: &ModeGraph| {
        c.n_p_used = explore.sample_count();
        c.n_p_draws = explore.raw_draws();
        c.edges_checked = explore.checked_edges();
        c.double_support_nodes = modes.pairs().len();
        PlanResult {
            status,
            mode_path: path,
            route,
            counters: c,
            wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        }
    };

    if modes.connected(&query.start, &query.goal) {
        let path = search_modes(&modes, &query.start, &query.goal);
        return Ok(finish(PlanStatus::Solved, path, None, c, &explore, &modes));
    }

    for k in 1..=params.max_rounds {
        c.rounds = k;
        let (np_target, ns_target) = params.round_targets(k);
        explore.grow(env, spec, np_target, rng);
        let Some(route) = explore.shortest_route(env, spec) else {
            continue;
        };
        c.routes_found += 1;
        let region = SampleRegion::around_route(&route, params.rho, Some(env.ground));
        last_route = Some(route);
        while c.n_sigma_used < ns_target {
            let n = params.batch.min(ns_target - c.n_sigma_used);
            for _ in 0..n {
                for side in [Side::Left, Side::Right] {
                    let p = region.sample_placement(rng);
                    if modes.add(env, spec, side, p).is_none() {
                        c.placements_invalid += 1;
                    }
                }
            }
            c.n_sigma_used += n;
            if modes.connected(&query.start, &query.goal) {
                let path = search_modes(&modes, &query.start, &query.goal);
                debug_assert!(path.is_some());
                return Ok(finish(PlanStatus::Solved, path, last_route, c, &explore, &modes));
            }
        }
    }
    Ok(finish(PlanStatus::BudgetExhausted, None, last_route, c, &explore, &modes))
}

/// Independent re-check of a mode sequence: endpoints match the query,
/// every placement is valid, double-support feet are mutually reachable and
/// every consecutive pair is a feasible transition.
pub fn validate_mode_path(env: &Environment, spec: &BipedSpec, query: &Query, path: &[Mode]) -> Result<(), String> {
    let (Some(first), Some(last)) = (path.first(), path.last()) else {
        return Err("empty mode path".into());
    };
    if *first != query.start_mode() {
        return Err("path does not begin at the start stance".into());
    }
    if *last != query.goal_mode() {
        return Err("path does not end at the goal stance".into());
    }
    for (i, m) in path.iter().enumerate() {
        for (side, p) in m.feet() {
            if !foot_valid(env, spec, &p) {
                return Err(format!("mode {i}: {side:?} foot placement invalid"));
            }
        }
        if let Mode::DoubleSupport { left, right } = m {
            if !is_reachable(spec, left, Side::Left, right) {
                return Err(format!("mode {i}: feet not mutually reachable"));
            }
        }
    }
    for (i, w) in path.windows(2).enumerate() {
        if !transition_feasible(env, spec, &w[0], &w[1]) {
            return Err(format!("transition {i} -> {} infeasible", i + 1));
        }
    }
    Ok(())
}
