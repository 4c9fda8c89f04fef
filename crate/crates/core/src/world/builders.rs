//! Parameterized versions of the three benchmark worlds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Aabb, Environment, Query, Scenario, Stance, WorldError};
use crate::biped::{max_step, BipedSpec};
use crate::geom2d::{Point2, Polygon, Rect, SE2Cylinder, CIRCLE_SEGMENTS};
use crate::Region;

/// Headroom of the exploration box above standing height.
const EXPLORE_HEADROOM: f64 = 0.2;

fn explore_env(ground: Rect<f64>, spec: &BipedSpec) -> Environment {
    Environment::open(ground, spec.stand_height + EXPLORE_HEADROOM)
}

fn finish(name: &str, env: Environment, spec: BipedSpec, query: Query, truth: Vec<SE2Cylinder<f64>>) -> Result<Scenario, WorldError> {
    let scenario = Scenario {
        name: name.to_string(),
        env,
        robot: spec,
        query,
        truth_cylinders: truth,
    };
    scenario.validate().map_err(|e| WorldError::Build(e.to_string()))?;
    Ok(scenario)
}

/// A gap crossing the whole floor, bridged by a zig-zag line of round stones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteppingStonesParams {
    pub gap_width: f64,
    pub stone_radius: f64,
    pub stone_count: usize,
    /// Random lateral jitter of each stone, as a fraction of the free lateral slack.
    pub jitter: f64,
    pub seed: u64,
    /// Square floor side length.
    pub ground_size: f64,
    pub robot: BipedSpec,
}

impl Default for SteppingStonesParams {
    fn default() -> Self {
        SteppingStonesParams {
            gap_width: 0.8,
            stone_radius: 0.2,
            stone_count: 2,
            jitter: 0.0,
            seed: 0,
            ground_size: 8.0,
            robot: BipedSpec::default(),
        }
    }
}

pub fn build_stepping_stones(p: &SteppingStonesParams) -> Result<Scenario, WorldError> {
    let spec = p.robot;
    spec.validate().map_err(|e| WorldError::Build(e.0))?;
    let circum = spec.foot_circumradius();
    if !(p.gap_width >= 0.0) || p.gap_width + 2.0 > p.ground_size {
        return Err(WorldError::Build("gap must be non-negative and leave 1 m of floor on each side".into()));
    }
    if p.stone_count > 0 && !(p.stone_radius > circum) {
        return Err(WorldError::Build(format!(
            "stone radius {} cannot hold the foot (circumradius {circum:.4})",
            p.stone_radius
        )));
    }
    if p.stone_count == 0 && p.gap_width > 0.0 {
        return Err(WorldError::Build("a gap needs at least one stone".into()));
    }
    let reach = max_step(&spec);
    let half_gap = 0.5 * p.gap_width;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let lateral = 0.5 * spec.lateral_offset;
    let mut stones = Vec::with_capacity(p.stone_count);
    for i in 0..p.stone_count {
        let x = -half_gap + p.gap_width * (i + 1) as f64 / (p.stone_count + 1) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let jitter = p.jitter * lateral * rng.gen_range(-1.0..=1.0);
        stones.push(Point2::new(x, sign * lateral + jitter));
    }
    // Nearest valid floor on each side of the gap, at the stone's lateral position.
    let mut chain = Vec::with_capacity(stones.len() + 2);
    if let (Some(first), Some(last)) = (stones.first(), stones.last()) {
        chain.push(Point2::new(-half_gap - spec.foot_half_extents.0, first.y));
        chain.extend(stones.iter().copied());
        chain.push(Point2::new(half_gap + spec.foot_half_extents.0, last.y));
    }
    for w in chain.windows(2) {
        if w[0].dist(w[1]) > reach {
            return Err(WorldError::Build(format!(
                "stones at ({:.3}, {:.3}) and ({:.3}, {:.3}) are farther apart than the maximum step {reach:.3}",
                w[0].x, w[0].y, w[1].x, w[1].y
            )));
        }
    }
    let h = 0.5 * p.ground_size;
    let ground = Rect::new(Point2::new(-h, -h), Point2::new(h, h));
    let mut env = explore_env(ground, &spec);
    if p.gap_width > 0.0 {
        let strip = Region::rect(Point2::new(-half_gap, -h), Point2::new(half_gap, h));
        let stones_region = Region::union_all(
            stones
                .iter()
                .map(|&c| Polygon::circle_circumscribed(c, p.stone_radius, CIRCLE_SEGMENTS)),
        );
        env.invalid_ground = strip.difference(&stones_region);
    }
    let truth = stones
        .iter()
        .map(|&c| SE2Cylinder::full_yaw(c, p.stone_radius - circum))
        .collect();
    let start_x = -half_gap - 0.5;
    let query = Query {
        start: Stance::nominal(start_x, 0.0, 0.0, spec.lateral_offset),
        goal: Stance::nominal(-start_x, 0.0, 0.0, spec.lateral_offset),
    };
    finish("stepping_stones", env, spec, query, truth)
}

/// A gap whose crossing is a checkerboard of valid and invalid square cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckersParams {
    pub cell_size: f64,
    /// Cells across the walking direction.
    pub rows: usize,
    /// Cells along the walking direction.
    pub cols: usize,
    pub ground_size: f64,
    pub robot: BipedSpec,
}

impl Default for CheckersParams {
    fn default() -> Self {
        CheckersParams {
            cell_size: 0.25,
            rows: 8,
            cols: 4,
            ground_size: 8.0,
            robot: BipedSpec::default(),
        }
    }
}

pub fn build_checkers(p: &CheckersParams) -> Result<Scenario, WorldError> {
    let spec = p.robot;
    spec.validate().map_err(|e| WorldError::Build(e.0))?;
    let circum = spec.foot_circumradius();
    if p.rows == 0 || p.cols == 0 {
        return Err(WorldError::Build("board needs at least one row and one column".into()));
    }
    if !(p.cell_size > 2.0 * circum) {
        return Err(WorldError::Build(format!(
            "cell size {} is smaller than the foot diameter {:.4}",
            p.cell_size,
            2.0 * circum
        )));
    }
    let reach = max_step(&spec);
    if p.cell_size * std::f64::consts::SQRT_2 > reach {
        return Err(WorldError::Build("diagonal cells are farther apart than the maximum step".into()));
    }
    let c = p.cell_size;
    let length = c * p.cols as f64;
    let width = c * p.rows as f64;
    let h = 0.5 * p.ground_size;
    if length + 2.0 > p.ground_size || width > p.ground_size {
        return Err(WorldError::Build("board does not fit on the floor".into()));
    }
    let x0 = -0.5 * length;
    let y0 = -0.5 * width;
    let mut cells = Vec::new();
    for row in 0..p.rows {
        for col in 0..p.cols {
            if (row + col) % 2 == 0 {
                let min = Point2::new(x0 + c * col as f64, y0 + c * row as f64);
                cells.push(Polygon::rect(min, Point2::new(min.x + c, min.y + c)));
            }
        }
    }
    let strip = Region::rect(Point2::new(x0, -h), Point2::new(-x0, h));
    let valid = Region::union_all(cells.iter().cloned());
    let mut env = explore_env(Rect::new(Point2::new(-h, -h), Point2::new(h, h)), &spec);
    env.invalid_ground = strip.difference(&valid);
    let truth = cells
        .iter()
        .map(|cell| {
            let bb = cell.bbox();
            SE2Cylinder::full_yaw(bb.min.lerp(bb.max, 0.5), 0.5 * c - circum)
        })
        .collect();
    let start_x = x0 - 0.5;
    let query = Query {
        start: Stance::nominal(start_x, 0.0, 0.0, spec.lateral_offset),
        goal: Stance::nominal(-start_x, 0.0, 0.0, spec.lateral_offset),
    };
    finish("checkers", env, spec, query, truth)
}

/// A narrow corridor crossed by horizontal bars the robot must crouch under.
#[derive(Debug, Clone, PartialEq)]
pub struct PassUnderParams {
    /// Height of each bar's underside.
    pub bar_heights: Vec<f64>,
    pub bar_thickness: f64,
    pub spacing: f64,
    pub corridor_width: f64,
    pub robot: BipedSpec,
}

impl Default for PassUnderParams {
    fn default() -> Self {
        PassUnderParams {
            bar_heights: vec![1.1; 3],
            bar_thickness: 0.1,
            spacing: 1.0,
            corridor_width: 1.2,
            robot: BipedSpec::default(),
        }
    }
}

pub fn build_pass_under(p: &PassUnderParams) -> Result<Scenario, WorldError> {
    let spec = p.robot;
    spec.validate().map_err(|e| WorldError::Build(e.0))?;
    if !(p.bar_thickness > 0.0) || !(p.spacing > p.bar_thickness) {
        return Err(WorldError::Build("bars need positive thickness and spacing larger than it".into()));
    }
    if !(p.corridor_width > 2.0 * spec.foot_circumradius() + spec.min_separation) {
        return Err(WorldError::Build("corridor too narrow for a stance".into()));
    }
    for (i, &bh) in p.bar_heights.iter().enumerate() {
        if !(bh >= spec.crouch_height) {
            return Err(WorldError::Build(format!(
                "bar {i} at {bh} m is below the crouch height {} m",
                spec.crouch_height
            )));
        }
    }
    let n = p.bar_heights.len();
    let span = p.spacing * n.saturating_sub(1) as f64;
    let margin = 1.2;
    let hw = 0.5 * p.corridor_width;
    let ground = Rect::new(Point2::new(-0.5 * span - margin, -hw), Point2::new(0.5 * span + margin, hw));
    let mut env = explore_env(ground, &spec);
    for (i, &bh) in p.bar_heights.iter().enumerate() {
        let xc = -0.5 * span + p.spacing * i as f64;
        let t = 0.5 * p.bar_thickness;
        env.obstacles.push(Aabb::new([xc - t, -hw - 1.0, bh], [xc + t, hw + 1.0, bh + p.bar_thickness]));
    }
    let start_x = -0.5 * span - margin + 0.4;
    let query = Query {
        start: Stance::nominal(start_x, 0.0, 0.0, spec.lateral_offset),
        goal: Stance::nominal(-start_x, 0.0, 0.0, spec.lateral_offset),
    };
    finish("pass_under", env, spec, query, Vec::new())
}
