use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wrpg_core::biped::{foot_valid, max_step, BipedSpec, FootPose};
use wrpg_core::geom2d::Point2;
use wrpg_core::world::{
    build_checkers, build_pass_under, build_stepping_stones, load_scenario, save_scenario, CheckersParams, PassUnderParams,
    Scenario, SteppingStonesParams, WorldError,
};

const MINIMAL: &str = r#"{
  "ground": {"min": [-2, -1], "max": [2, 1]},
  "invalid_ground": [],
  "obstacles": [],
  "explore_bounds": {"min": [-2, -1, 0], "max": [2, 1, 1.6]},
  "query": {
    "start": {"left": [-1, 0.1, 0], "right": [-1, -0.1, 0]},
    "goal": {"left": [1, 0.1, 0], "right": [1, -0.1, 0]}
  },
  "truth_cylinders": []
}"#;

fn truth_cylinders_are_valid(s: &Scenario, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in &s.truth_cylinders {
        for _ in 0..400 {
            let r = c.radius * rng.gen::<f64>().sqrt();
            let t = rng.gen_range(0.0..TAU);
            let yaw = rng.gen_range(c.yaw[0]..c.yaw[1]);
            let p = FootPose::new(c.center.x + r * t.cos(), c.center.y + r * t.sin(), yaw);
            assert!(foot_valid(&s.env, &s.robot, &p), "{p:?} in {c:?}");
        }
    }
}

#[test]
fn minimal_document_loads() {
    let s = load_scenario(MINIMAL).unwrap();
    assert!(s.env.obstacles.is_empty());
    assert!(s.env.invalid_ground.is_empty());
    assert_eq!(s.robot, BipedSpec::default());
    assert!(foot_valid(&s.env, &s.robot, &FootPose::new(0.3, -0.4, 2.0)));
}

#[test]
fn goal_on_invalid_ground_is_rejected() {
    let doc = MINIMAL.replace(
        r#""invalid_ground": []"#,
        r#""invalid_ground": [{"outer": [[0.5, -1], [1.5, -1], [1.5, 1], [0.5, 1]]}]"#,
    );
    let err = load_scenario(&doc).unwrap_err();
    assert!(err.to_string().contains("goal stance infeasible"), "{err}");
}

#[test]
fn malformed_documents_name_the_problem() {
    assert!(matches!(load_scenario("{"), Err(WorldError::Parse(_))));
    let doc = MINIMAL.replace(r#""obstacles": []"#, r#""obstacles": [{"min": [0, 0, 0], "max": [0, 1, 1]}]"#);
    assert!(load_scenario(&doc).unwrap_err().to_string().contains("obstacles[0]"));
    let doc = MINIMAL.replace(r#""max": [2, 1, 1.6]"#, r#""max": [1, 1, 1.6]"#);
    assert!(load_scenario(&doc).unwrap_err().to_string().contains("explore_bounds"));
}

#[test]
fn robot_overrides_use_camel_case() {
    let doc = MINIMAL.replace(r#""truth_cylinders": []"#, r#""truth_cylinders": [], "robot": {"stepRadius": 0.4, "crouchHeight": 1.0}"#);
    let s = load_scenario(&doc).unwrap();
    assert_eq!(s.robot.step_radius, 0.4);
    assert_eq!(s.robot.crouch_height, 1.0);
    assert_eq!(s.robot.min_separation, BipedSpec::default().min_separation);
}

#[test]
fn builder_outputs_round_trip() {
    let scenarios = [
        build_stepping_stones(&SteppingStonesParams::default()).unwrap(),
        build_stepping_stones(&SteppingStonesParams {
            jitter: 0.5,
            seed: 7,
            ..SteppingStonesParams::default()
        })
        .unwrap(),
        build_checkers(&CheckersParams::default()).unwrap(),
        build_pass_under(&PassUnderParams::default()).unwrap(),
    ];
    for s in scenarios {
        let text = save_scenario(&s);
        let back = load_scenario(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(save_scenario(&back), text);
    }
}

#[test]
fn stepping_stones_examples() {
    let plain = build_stepping_stones(&SteppingStonesParams {
        gap_width: 0.0,
        stone_count: 0,
        ..SteppingStonesParams::default()
    })
    .unwrap();
    assert!(plain.env.invalid_ground.is_empty());
    assert!(plain.truth_cylinders.is_empty());

    let s = build_stepping_stones(&SteppingStonesParams {
        gap_width: 1.2,
        stone_radius: 0.12,
        stone_count: 3,
        ..SteppingStonesParams::default()
    })
    .unwrap();
    assert_eq!(s.truth_cylinders.len(), 3);
    let circum = s.robot.foot_circumradius();
    for c in &s.truth_cylinders {
        assert!((c.radius - (0.12 - circum)).abs() < 1e-15);
        assert!(c.radius >= 0.05);
        assert_eq!(c.yaw_span(), TAU);
    }
    truth_cylinders_are_valid(&s, 1);
    truth_cylinders_are_valid(&build_stepping_stones(&SteppingStonesParams::default()).unwrap(), 4);

    let far = SteppingStonesParams {
        gap_width: 2.0 * max_step(&s.robot) * 2.0,
        stone_count: 1,
        ..SteppingStonesParams::default()
    };
    assert!(matches!(build_stepping_stones(&far), Err(WorldError::Build(_))));

    let small = SteppingStonesParams {
        stone_radius: 0.05,
        ..SteppingStonesParams::default()
    };
    assert!(build_stepping_stones(&small).is_err());
}

#[test]
fn stone_interiors_are_valid_and_gap_is_not() {
    let s = build_stepping_stones(&SteppingStonesParams::default()).unwrap();
    assert!(!foot_valid(&s.env, &s.robot, &FootPose::new(0.0, -0.35, 0.0)));
    assert!(foot_valid(&s.env, &s.robot, &FootPose::new(-1.0, 2.0, 1.0)));
}

#[test]
fn checkers_examples() {
    let one = build_checkers(&CheckersParams {
        rows: 1,
        cols: 1,
        ..CheckersParams::default()
    })
    .unwrap();
    assert_eq!(one.truth_cylinders.len(), 1);
    let c = one.truth_cylinders[0];
    assert!((c.center.x).abs() < 1e-12 && (c.center.y).abs() < 1e-12);

    let board = build_checkers(&CheckersParams::default()).unwrap();
    assert_eq!(board.truth_cylinders.len(), 16);
    truth_cylinders_are_valid(&board, 2);
    let invalid_cell = Point2::new(-0.5 + 0.375, -1.0 + 0.125);
    assert!(!foot_valid(&board.env, &board.robot, &FootPose::new(invalid_cell.x, invalid_cell.y, 0.0)));

    let tiny = CheckersParams {
        cell_size: 0.1,
        ..CheckersParams::default()
    };
    assert!(matches!(build_checkers(&tiny), Err(WorldError::Build(_))));
}

#[test]
fn pass_under_examples() {
    let open = build_pass_under(&PassUnderParams {
        bar_heights: vec![],
        ..PassUnderParams::default()
    })
    .unwrap();
    assert!(open.env.obstacles.is_empty());

    let s = build_pass_under(&PassUnderParams::default()).unwrap();
    assert_eq!(s.env.obstacles.len(), 3);
    // The floor stays fully valid: bars never touch the walkable plane.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = s.env.ground;
    let circum = s.robot.foot_circumradius();
    for _ in 0..2000 {
        let p = FootPose::new(
            rng.gen_range(g.min.x + circum..g.max.x - circum),
            rng.gen_range(g.min.y + circum..g.max.y - circum),
            rng.gen_range(0.0..TAU),
        );
        assert!(foot_valid(&s.env, &s.robot, &p));
    }

    let low = PassUnderParams {
        bar_heights: vec![0.5],
        ..PassUnderParams::default()
    };
    assert!(matches!(build_pass_under(&low), Err(WorldError::Build(_))));
}
