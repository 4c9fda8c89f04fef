use wrpg_core::biped::BipedSpec;
use wrpg_core::geom2d::{Point2, Rect};
use wrpg_core::lab::*;
use wrpg_core::rpg::PlanStatus;
use wrpg_core::world::{
    build_pass_under, build_stepping_stones, Environment, PassUnderParams, Query, Scenario, Stance, SteppingStonesParams,
};

fn open_scenario() -> Scenario {
    Scenario {
        name: "open".into(),
        env: Environment::open(Rect::new(Point2::new(-2.0, -2.0), Point2::new(2.0, 2.0)), 2.0),
        robot: BipedSpec::default(),
        query: Query {
            start: Stance::nominal(-0.5, 0.0, 0.0, 0.2),
            goal: Stance::nominal(0.5, 0.0, 0.0, 0.2),
        },
        truth_cylinders: vec![],
    }
}

#[test]
fn one_trial_on_open_floor_solves() {
    let s = open_scenario();
    let recs = run_trials(&s, 1.1, Budget::default(), 1, 42).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].outcome, PlanStatus::Solved);
    assert_eq!(recs[0].seed, 42);
    assert_eq!(recs[0].path_len, recs[0].mode_path.as_ref().map(Vec::len));
    assert_eq!(recs[0].samples_to_success(), recs[0].n_p_used + recs[0].n_sigma_used);
}

#[test]
fn trial_seeds_are_consecutive_and_ordered() {
    let s = open_scenario();
    let recs = run_trials(&s, 1.1, Budget::default(), 8, 100).unwrap();
    let seeds: Vec<u64> = recs.iter().map(|r| r.seed).collect();
    assert_eq!(seeds, (100..108).collect::<Vec<_>>());
    assert!(run_trials(&s, 1.1, Budget::default(), 0, 0).is_err());
}

#[test]
fn reruns_give_identical_csv() {
    let s = build_stepping_stones(&SteppingStonesParams::default()).unwrap();
    let a = run_trials(&s, 2.0 * s.max_step(), Budget::default(), 20, 7).unwrap();
    let b = run_trials(&s, 2.0 * s.max_step(), Budget::default(), 20, 7).unwrap();
    assert_eq!(trials_csv(&a, Timing::Omit), trials_csv(&b, Timing::Omit));
    let header = trials_csv(&a, Timing::Omit).lines().next().unwrap().to_string();
    assert_eq!(
        header,
        "scenario,rho,rho_over_rmax,seed,outcome,wall_ms,n_p_used,n_sigma_used,path_len"
    );
}

#[test]
fn failures_count_the_whole_budget() {
    let s = build_stepping_stones(&SteppingStonesParams::default()).unwrap();
    let tiny = Budget {
        n_p: 100,
        n_sigma: 20,
        max_rounds: 2,
    };
    let recs = run_trials(&s, s.max_step(), tiny, 5, 0).unwrap();
    for r in recs.iter().filter(|r| r.outcome == PlanStatus::BudgetExhausted) {
        assert_eq!(r.samples_to_success(), 120);
        assert!(r.path_len.is_none());
    }
}

#[test]
fn single_rho_sweep_normalizes_to_one() {
    let s = open_scenario();
    let sweep = sweep_rho(&s, &[2.0], Budget::default(), 5, 0).unwrap();
    assert_eq!(sweep.rows.len(), 1);
    assert_eq!(sweep.rows[0].normalized_median, 1.0);
    assert_eq!(sweep.spearman, None);
    assert_eq!(sweep.spread(), 1.0);
    assert!(sweep_rho(&s, &[1.0, -2.0], Budget::default(), 5, 0).is_err());
    assert!(sweep_rho(&s, &[], Budget::default(), 5, 0).is_err());
}

#[test]
fn sweep_summary_csv_has_one_row_per_rho() {
    let s = build_pass_under(&PassUnderParams::default()).unwrap();
    let sweep = sweep_rho(&s, &[1.0, 2.0, 4.0], Budget::default(), 10, 0).unwrap();
    assert_eq!(sweep.records.len(), 30);
    let min = sweep.rows.iter().map(|r| r.normalized_median).fold(f64::INFINITY, f64::min);
    assert_eq!(min, 1.0);
    let csv = summary_csv(&sweep.rows, Timing::Include);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scenario,rho_over_rmax,trials,success_rate,median_samples,mean_ms,normalized_median"
    );
    assert_eq!(lines.count(), 3);
    let omitted = summary_csv(&sweep.rows, Timing::Omit);
    assert!(omitted.lines().skip(1).all(|l| l.split(',').nth(5) == Some("")));
}

#[test]
fn mode_bound_saturates_at_both_ends() {
    let s = build_stepping_stones(&SteppingStonesParams::default()).unwrap();
    let rows = verify_mode_bound(&s, 0.5 * s.max_step(), &[0, 10_000], 50, 0).unwrap();
    assert_eq!(rows[0].empirical, 1.0);
    assert_eq!(rows[0].bound, 1.0);
    assert!(!rows[0].violation);
    assert_eq!(rows[1].failures, 0);
    assert!(rows[1].bound < 1e-6);
    assert!(!rows[1].violation);
    let csv = mode_bound_csv(&rows);
    assert!(csv.starts_with("N_sigma,trials,failures,empirical,bound,sigma,violation\n"));
}

#[test]
fn mode_bound_needs_truth_inside_the_sampling_region() {
    assert!(matches!(
        verify_mode_bound(&open_scenario(), 1.0, &[10], 10, 0),
        Err(LabError::MissingTruth)
    ));
    let s = build_stepping_stones(&SteppingStonesParams::default()).unwrap();
    assert!(matches!(
        verify_mode_bound(&s, 0.05, &[10], 10, 0),
        Err(LabError::Invalid(_))
    ));
}

#[test]
fn combined_verification_examples() {
    let rows = verify_combined(&[(0.0, 0.0), (1.0, 0.0), (0.3, 0.4)], 5_000, 3).unwrap();
    assert_eq!(rows[0].observed, 0.0);
    assert_eq!(rows[1].observed, 1.0);
    assert!(rows.iter().all(|r| !r.violation));
    // Exact joint failure is a + (1 - a)b = 0.58 < 0.7.
    assert!((rows[2].observed - 0.58).abs() < 0.03);
    assert!(verify_combined(&[(1.2, 0.0)], 10, 0).is_err());
    let csv = combined_csv(&rows);
    assert!(csv.starts_with("a_F,b_F,trials,observed,bound,sigma,violation\n"));
}

#[test]
fn bound_table_covers_every_grid_point() {
    let s = build_stepping_stones(&SteppingStonesParams::default()).unwrap();
    let base = bound_inputs_for(&s, 2.0 * s.max_step(), 150.0, 0, 0).unwrap();
    let rows = bound_table(&base, &[1_000, 1_000_000], &[100, 1_000, 10_000]).unwrap();
    assert_eq!(rows.len(), 2 * 3 * 8);
    for r in rows.iter().filter(|r| !r.name.starts_with("area_f") && r.name != "combined_exponential") {
        assert!((0.0..=1.0).contains(&r.value), "{r:?}");
    }
    let csv = bounds_csv(&rows);
    assert!(csv.starts_with("bound_name,N_P,N_sigma,value\n"));
    assert_eq!(csv.lines().count(), rows.len() + 1);
    assert!(matches!(bound_inputs_for(&open_scenario(), 1.0, 1.0, 0, 0), Err(LabError::MissingTruth)));
}

#[test]
fn statistics_helpers() {
    assert_eq!(median(&[5.0, 1.0, 3.0]), 3.0);
    assert_eq!(spearman(&[1.0, 2.0, 4.0, 8.0], &[800.0, 1800.0, 4000.0, 4000.0]).unwrap(), 0.9486832980505138);
}
