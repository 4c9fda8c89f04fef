use super::{BoundRow, CombinedRow, ModeBoundRow, SummaryRow, TrialRecord};
use crate::rpg::PlanStatus;

/// Whether wall-clock columns are written. `Omit` leaves them empty so that
/// identical inputs give byte-identical files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    Include,
    Omit,
}

fn ms(v: f64, t: Timing) -> String {
    match t {
        Timing::Include => format!("{v:.3}"),
        Timing::Omit => String::new(),
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}

/// `scenario,rho,rho_over_rmax,seed,outcome,wall_ms,n_p_used,n_sigma_used,path_len`
pub fn trials_csv(records: &[TrialRecord], timing: Timing) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "scenario",
        "rho",
        "rho_over_rmax",
        "seed",
        "outcome",
        "wall_ms",
        "n_p_used",
        "n_sigma_used",
        "path_len",
    ])
    .unwrap();
    for r in records {
        let outcome = match r.outcome {
            PlanStatus::Solved => "Solved",
            PlanStatus::BudgetExhausted => "BudgetExhausted",
        };
        w.write_record([
            r.scenario.clone(),
            r.rho.to_string(),
            r.rho_over_rmax.to_string(),
            r.seed.to_string(),
            outcome.to_string(),
            ms(r.wall_ms, timing),
            r.n_p_used.to_string(),
            r.n_sigma_used.to_string(),
            r.path_len.map(|n| n.to_string()).unwrap_or_default(),
        ])
        .unwrap();
    }
    finish(w)
}

/// `scenario,rho_over_rmax,trials,success_rate,median_samples,mean_ms,normalized_median`
pub fn summary_csv(rows: &[SummaryRow], timing: Timing) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "scenario",
        "rho_over_rmax",
        "trials",
        "success_rate",
        "median_samples",
        "mean_ms",
        "normalized_median",
    ])
    .unwrap();
    for r in rows {
        w.write_record([
            r.scenario.clone(),
            r.rho_over_rmax.to_string(),
            r.trials.to_string(),
            r.success_rate.to_string(),
            r.median_samples.to_string(),
            ms(r.mean_ms, timing),
            r.normalized_median.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

/// `bound_name,N_P,N_sigma,value`
pub fn bounds_csv(rows: &[BoundRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bound_name", "N_P", "N_sigma", "value"]).unwrap();
    for r in rows {
        w.write_record([r.name.to_string(), r.n_p.to_string(), r.n_sigma.to_string(), r.value.to_string()])
            .unwrap();
    }
    finish(w)
}

/// `N_sigma,trials,failures,empirical,bound,sigma,violation`
pub fn mode_bound_csv(rows: &[ModeBoundRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["N_sigma", "trials", "failures", "empirical", "bound", "sigma", "violation"])
        .unwrap();
    for r in rows {
        w.write_record([
            r.n_sigma.to_string(),
            r.trials.to_string(),
            r.failures.to_string(),
            r.empirical.to_string(),
            r.bound.to_string(),
            r.sigma.to_string(),
            r.violation.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

/// `a_F,b_F,trials,observed,bound,sigma,violation`
pub fn combined_csv(rows: &[CombinedRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["a_F", "b_F", "trials", "observed", "bound", "sigma", "violation"]).unwrap();
    for r in rows {
        w.write_record([
            r.a_f.to_string(),
            r.b_f.to_string(),
            r.trials.to_string(),
            r.observed.to_string(),
            r.bound.to_string(),
            r.sigma.to_string(),
            r.violation.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}
