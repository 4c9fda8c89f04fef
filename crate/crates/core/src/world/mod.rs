//! Environment model: flat ground with invalid patches, 3D box obstacles,
//! the exploration box, start/goal stances and scenario files.

mod builders;
mod io;

pub use builders::{
    build_checkers, build_pass_under, build_stepping_stones, CheckersParams, PassUnderParams, SteppingStonesParams,
};
pub use io::{load_scenario, save_scenario};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::biped::{foot_valid, is_reachable, stance_projection, torso_clear, BipedSpec, FootPose, Mode, Side};
use crate::explorespace::{ExploreBounds, ExplorePose};
use crate::geom2d::{Point2, Rect, SE2Cylinder};
use crate::Region;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error("build error: {0}")]
    Build(String),
}

impl WorldError {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        WorldError::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

/// Axis-aligned 3D box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Aabb {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Self {
        Aabb { min, max }
    }

    fn has_positive_extent(&self) -> bool {
        (0..3).all(|k| self.min[k].is_finite() && self.max[k].is_finite() && self.max[k] > self.min[k])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub ground: Rect<f64>,
    pub invalid_ground: Region,
    pub obstacles: Vec<Aabb>,
    pub explore_bounds: ExploreBounds,
}

impl Environment {
    /// Obstacle-free ground; the exploration box spans the ground up to `z_max`.
    pub fn open(ground: Rect<f64>, z_max: f64) -> Self {
        Environment {
            ground,
            invalid_ground: Region::empty(),
            obstacles: Vec::new(),
            explore_bounds: ExploreBounds::new([ground.min.x, ground.min.y, 0.0], [ground.max.x, ground.max.y, z_max]),
        }
    }

    pub fn validate(&self) -> Result<(), WorldError> {
        let g = &self.ground;
        if !(g.min.is_finite() && g.max.is_finite() && g.max.x > g.min.x && g.max.y > g.min.y) {
            return Err(WorldError::invalid("ground", "min must be below max on both axes"));
        }
        if let Some(bb) = self.invalid_ground.bbox() {
            if !g.contains_rect(&bb) {
                return Err(WorldError::invalid("invalid_ground", "must lie inside ground"));
            }
        }
        for (i, b) in self.obstacles.iter().enumerate() {
            if !b.has_positive_extent() {
                return Err(WorldError::invalid(format!("obstacles[{i}]"), "box needs positive extent on every axis"));
            }
        }
        let e = &self.explore_bounds;
        e.validate().map_err(|r| WorldError::invalid("explore_bounds", r))?;
        if e.min[0] > g.min.x || e.min[1] > g.min.y || e.max[0] < g.max.x || e.max[1] < g.max.y {
            return Err(WorldError::invalid("explore_bounds", "xy footprint must cover ground"));
        }
        Ok(())
    }
}

/// A double-support stance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stance {
    pub left: FootPose,
    pub right: FootPose,
}

impl Stance {
    pub fn new(left: FootPose, right: FootPose) -> Self {
        Stance { left, right }
    }

    /// Side-by-side stance centered at `(x, y)` facing `yaw`, feet `width` apart.
    pub fn nominal(x: f64, y: f64, yaw: f64, width: f64) -> Self {
        let c = Point2::new(x, y);
        let side = Point2::from_angle(yaw).perp() * (0.5 * width);
        let (l, r) = (c + side, c - side);
        Stance {
            left: FootPose::new(l.x, l.y, yaw),
            right: FootPose::new(r.x, r.y, yaw),
        }
    }

    pub fn mode(&self) -> Mode {
        Mode::DoubleSupport {
            left: self.left,
            right: self.right,
        }
    }

    pub fn projection(&self, spec: &BipedSpec) -> ExplorePose {
        stance_projection(spec, &self.left, &self.right)
    }
}

/// Why a stance cannot be stood in, or `None` when it can.
pub fn stance_problem(env: &Environment, spec: &BipedSpec, s: &Stance) -> Option<&'static str> {
    if !foot_valid(env, spec, &s.left) {
        return Some("left foot placement invalid");
    }
    if !foot_valid(env, spec, &s.right) {
        return Some("right foot placement invalid");
    }
    if !is_reachable(spec, &s.left, Side::Left, &s.right) {
        return Some("feet not mutually reachable");
    }
    let mid = s.left.xy().lerp(s.right.xy(), 0.5);
    if ![mid, s.left.xy(), s.right.xy()].iter().all(|&c| torso_clear(env, spec, c)) {
        return Some("no torso height clears the obstacles");
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub start: Stance,
    pub goal: Stance,
}

impl Query {
    pub fn start_mode(&self) -> Mode {
        self.start.mode()
    }

    pub fn goal_mode(&self) -> Mode {
        self.goal.mode()
    }

    pub fn start_pose(&self, spec: &BipedSpec) -> ExplorePose {
        self.start.projection(spec)
    }

    pub fn goal_pose(&self, spec: &BipedSpec) -> ExplorePose {
        self.goal.projection(spec)
    }
}

/// Everything a planning run needs, plus optional ground-truth cylinders of
/// interchangeable foot placements.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub env: Environment,
    pub robot: BipedSpec,
    pub query: Query,
    pub truth_cylinders: Vec<SE2Cylinder<f64>>,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), WorldError> {
        self.env.validate()?;
        self.robot.validate().map_err(|e| WorldError::invalid("robot", e.0))?;
        for (field, stance) in [("start", &self.query.start), ("goal", &self.query.goal)] {
            if let Some(reason) = stance_problem(&self.env, &self.robot, stance) {
                return Err(WorldError::invalid(format!("query.{field}"), format!("{field} stance infeasible ({reason})")));
            }
        }
        for (i, c) in self.truth_cylinders.iter().enumerate() {
            if !(c.radius >= 0.0) || !(c.yaw_span() > 0.0) {
                return Err(WorldError::invalid(format!("truth_cylinders[{i}]"), "needs radius >= 0 and a positive yaw span"));
            }
        }
        Ok(())
    }

    pub fn max_step(&self) -> f64 {
        crate::biped::max_step(&self.robot)
    }
}
