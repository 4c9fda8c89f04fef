//! Seeded Monte Carlo harness: repeated planning trials, ρ sweeps,
//! empirical checks of the failure bounds and CSV output.

mod csvio;
mod stats;
mod verify;

pub use csvio::{bounds_csv, combined_csv, mode_bound_csv, summary_csv, trials_csv, Timing};
pub use stats::{median, spearman};
pub use verify::{
    bound_inputs_for, bound_table, straight_route, verify_combined, verify_mode_bound, BoundRow, CombinedRow, ModeBoundRow,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::biped::Mode;
use crate::bounds::BoundError;
use crate::rpg::{plan, PlanParams, PlanStatus, RpgError};
use crate::world::{Scenario, WorldError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Planner(#[from] RpgError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("scenario has no ground-truth cylinders")]
    MissingTruth,
    #[error("{0}")]
    Invalid(String),
}

/// Cumulative sampling budgets of a planning call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub n_p: usize,
    pub n_sigma: usize,
    pub max_rounds: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            n_p: 2000,
            n_sigma: 2000,
            max_rounds: 4,
        }
    }
}

impl Budget {
    pub fn params(&self, rho: f64) -> PlanParams {
        PlanParams::with_budget(rho, self.n_p, self.n_sigma, self.max_rounds)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub scenario: String,
    pub rho: f64,
    pub rho_over_rmax: f64,
    pub seed: u64,
    pub budget: Budget,
    pub outcome: PlanStatus,
    pub wall_ms: f64,
    pub n_p_used: usize,
    pub n_sigma_used: usize,
    /// Modes in the returned path.
    pub path_len: Option<usize>,
    pub mode_path: Option<Vec<Mode>>,
}

impl TrialRecord {
    /// Samples spent until success; failures count the whole budget.
    pub fn samples_to_success(&self) -> usize {
        match self.outcome {
            PlanStatus::Solved => self.n_p_used + self.n_sigma_used,
            PlanStatus::BudgetExhausted => {
                let (np, ns) = self.budget.params(self.rho).total_budget();
                np + ns
            }
        }
    }
}

/// Run `trials` planning calls; trial `i` uses seed `base_seed + i`. Trials
/// run in parallel and come back in index order.
pub fn run_trials(scenario: &Scenario, rho: f64, budget: Budget, trials: usize, base_seed: u64) -> Result<Vec<TrialRecord>, LabError> {
    if trials == 0 {
        return Err(LabError::Invalid("need at least one trial".into()));
    }
    let params = budget.params(rho);
    let r_max = scenario.max_step();
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = plan(&scenario.env, &scenario.robot, &scenario.query, &params, &mut rng)?;
            Ok(TrialRecord {
                scenario: scenario.name.clone(),
                rho,
                rho_over_rmax: rho / r_max,
                seed,
                budget,
                outcome: r.status,
                wall_ms: r.wall_ms,
                n_p_used: r.counters.n_p_used,
                n_sigma_used: r.counters.n_sigma_used,
                path_len: r.mode_path.as_ref().map(Vec::len),
                mode_path: r.mode_path,
            })
        })
        .collect()
}

/// One line of a sweep summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub rho_over_rmax: f64,
    pub trials: usize,
    pub success_rate: f64,
    pub median_samples: f64,
    pub mean_ms: f64,
    /// Median samples over the smallest median of the sweep.
    pub normalized_median: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SummaryRow>,
    pub records: Vec<TrialRecord>,
    /// Rank correlation between ρ and median samples-to-success.
    pub spearman: Option<f64>,
}

impl Sweep {
    /// Largest over smallest normalized median.
    pub fn spread(&self) -> f64 {
        let v = self.rows.iter().map(|r| r.normalized_median);
        v.clone().fold(f64::NEG_INFINITY, f64::max) / v.fold(f64::INFINITY, f64::min)
    }
}

pub fn summarize(scenario: &str, rho_over_rmax: f64, records: &[TrialRecord]) -> SummaryRow {
    let n = records.len();
    let solved = records.iter().filter(|r| r.outcome == PlanStatus::Solved).count();
    let samples: Vec<f64> = records.iter().map(|r| r.samples_to_success() as f64).collect();
    SummaryRow {
        scenario: scenario.to_string(),
        rho_over_rmax,
        trials: n,
        success_rate: solved as f64 / n as f64,
        median_samples: median(&samples),
        mean_ms: records.iter().map(|r| r.wall_ms).sum::<f64>() / n as f64,
        normalized_median: f64::NAN,
    }
}

/// Trials at each ρ = k · R_max for `k` in `multipliers`.
pub fn sweep_rho(scenario: &Scenario, multipliers: &[f64], budget: Budget, trials: usize, base_seed: u64) -> Result<Sweep, LabError> {
    if multipliers.is_empty() || multipliers.iter().any(|&k| !(k > 0.0)) {
        return Err(LabError::Invalid("ρ multipliers must be positive".into()));
    }
    let r_max = scenario.max_step();
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for &k in multipliers {
        let recs = run_trials(scenario, k * r_max, budget, trials, base_seed)?;
        rows.push(summarize(&scenario.name, k, &recs));
        records.extend(recs);
    }
    let min = rows.iter().map(|r| r.median_samples).fold(f64::INFINITY, f64::min);
    for r in &mut rows {
        r.normalized_median = r.median_samples / min;
    }
    let xs: Vec<f64> = multipliers.to_vec();
    let ys: Vec<f64> = rows.iter().map(|r| r.median_samples).collect();
    Ok(Sweep {
        spearman: spearman(&xs, &ys),
        rows,
        records,
    })
}
