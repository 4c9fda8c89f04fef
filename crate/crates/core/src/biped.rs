//! Planar biped model: foot geometry, reachability, the necessary-condition
//! check that defines C_N, foot validity and the quasi-static transition test.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::explorespace::{wrap_two_pi, ExplorePose};
use crate::geom2d::{Point2, Polygon, Rect, CIRCLE_SEGMENTS};
use crate::world::{Aabb, Environment};
use crate::Region;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// +1 for a left support (the swing foot sits to its right), -1 otherwise.
    fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

/// Foot placement on the ground plane. Serialized as `[x, y, yaw]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct FootPose {
    pub x: f64,
    pub y: f64,
    /// In `[0, 2π)`.
    pub yaw: f64,
}

impl From<[f64; 3]> for FootPose {
    fn from(v: [f64; 3]) -> Self {
        FootPose::new(v[0], v[1], v[2])
    }
}

impl From<FootPose> for [f64; 3] {
    fn from(p: FootPose) -> Self {
        [p.x, p.y, p.yaw]
    }
}

impl FootPose {
    pub fn new(x: f64, y: f64, yaw: f64) -> Self {
        FootPose { x, y, yaw: wrap_two_pi(yaw) }
    }

    pub fn xy(&self) -> Point2<f64> {
        Point2::new(self.x, self.y)
    }

    pub fn heading(&self) -> Point2<f64> {
        Point2::from_angle(self.yaw)
    }

    /// Footprint rectangle as a counter-clockwise ring.
    pub fn footprint(&self, half: (f64, f64)) -> Vec<Point2<f64>> {
        Polygon::oriented_rect(self.xy(), half, self.yaw).outer
    }
}

/// Contact state: one or two feet on the ground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Mode {
    SingleSupport { side: Side, pose: FootPose },
    DoubleSupport { left: FootPose, right: FootPose },
}

impl Mode {
    /// Planar point the torso is centered over.
    pub fn support_center(&self) -> Point2<f64> {
        match self {
            Mode::SingleSupport { pose, .. } => pose.xy(),
            Mode::DoubleSupport { left, right } => left.xy().lerp(right.xy(), 0.5),
        }
    }

    /// Feet on the ground, tagged by side.
    pub fn feet(&self) -> Vec<(Side, FootPose)> {
        match *self {
            Mode::SingleSupport { side, pose } => vec![(side, pose)],
            Mode::DoubleSupport { left, right } => vec![(Side::Left, left), (Side::Right, right)],
        }
    }

    pub fn foot(&self, side: Side) -> Option<FootPose> {
        self.feet().into_iter().find(|(s, _)| *s == side).map(|(_, p)| p)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid robot spec: {0}")]
pub struct SpecError(pub String);

/// Robot dimensions. JSON field names are camelCase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct BipedSpec {
    /// Half length (along the foot's heading) and half width, meters.
    pub foot_half_extents: (f64, f64),
    pub min_separation: f64,
    /// Nominal lateral distance between the feet.
    pub lateral_offset: f64,
    pub step_radius: f64,
    pub max_yaw_delta: f64,
    pub stand_height: f64,
    pub crouch_height: f64,
    pub torso_radius: f64,
}

impl Default for BipedSpec {
    fn default() -> Self {
        BipedSpec {
            foot_half_extents: (0.06, 0.03),
            min_separation: 0.18,
            lateral_offset: 0.2,
            step_radius: 0.35,
            max_yaw_delta: PI / 3.0,
            stand_height: 1.4,
            crouch_height: 0.9,
            torso_radius: 0.3,
        }
    }
}

impl BipedSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        let (hx, hy) = self.foot_half_extents;
        let positive = [
            ("footHalfExtents", hx.min(hy)),
            ("minSeparation", self.min_separation),
            ("lateralOffset", self.lateral_offset),
            ("stepRadius", self.step_radius),
            ("maxYawDelta", self.max_yaw_delta),
            ("standHeight", self.stand_height),
            ("crouchHeight", self.crouch_height),
            ("torsoRadius", self.torso_radius),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SpecError(format!("{name} must be positive and finite")));
            }
        }
        if self.step_radius <= self.min_separation {
            return Err(SpecError("stepRadius must exceed minSeparation".into()));
        }
        if self.crouch_height >= self.stand_height {
            return Err(SpecError("crouchHeight must be below standHeight".into()));
        }
        if self.max_yaw_delta > PI {
            return Err(SpecError("maxYawDelta must not exceed π".into()));
        }
        Ok(())
    }

    /// Every length multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        BipedSpec {
            foot_half_extents: (self.foot_half_extents.0 * k, self.foot_half_extents.1 * k),
            min_separation: self.min_separation * k,
            lateral_offset: self.lateral_offset * k,
            step_radius: self.step_radius * k,
            stand_height: self.stand_height * k,
            crouch_height: self.crouch_height * k,
            torso_radius: self.torso_radius * k,
            ..*self
        }
    }

    pub fn foot_circumradius(&self) -> f64 {
        let (hx, hy) = self.foot_half_extents;
        hx.hypot(hy)
    }

    pub fn foot_inradius(&self) -> f64 {
        let (hx, hy) = self.foot_half_extents;
        hx.min(hy)
    }

    /// Height of the torso box used by the clearance tests.
    pub fn torso_height(&self) -> f64 {
        0.3 * self.stand_height
    }

    /// Radius of the C_N probe capsule, which is inscribed in the torso box.
    pub fn probe_radius(&self) -> f64 {
        self.torso_radius.min(0.5 * self.torso_height())
    }

    /// Height of a projected stance in the exploration space.
    pub fn nominal_height(&self) -> f64 {
        0.5 * (self.crouch_height + self.stand_height)
    }
}

/// R_max: farthest reachable displacement of the swing foot.
pub fn max_step(spec: &BipedSpec) -> f64 {
    spec.lateral_offset + spec.step_radius
}

/// Unit bisector of two headings. Built from a sum so that swapping the
/// arguments gives a bit-identical result.
fn mid_heading(a_yaw: f64, b_yaw: f64) -> Option<Point2<f64>> {
    let s = Point2::from_angle(a_yaw) + Point2::from_angle(b_yaw);
    let n = s.norm();
    (n > 1e-12).then(|| s * (1.0 / n))
}

fn yaw_gate(spec: &BipedSpec, a_yaw: f64, b_yaw: f64) -> bool {
    Point2::from_angle(a_yaw).dot(Point2::from_angle(b_yaw)) >= spec.max_yaw_delta.cos()
}

/// Center of the step disk for a swing foot of yaw `swing_yaw`.
fn step_center(spec: &BipedSpec, support: &FootPose, side: Side, swing_yaw: f64) -> Option<Point2<f64>> {
    let h = mid_heading(support.yaw, swing_yaw)?;
    Some(support.xy() - h.perp() * (side.sign() * spec.lateral_offset))
}

/// Placements reachable by the swing foot at yaw `swing_yaw` from `support`.
pub fn reachable_region(spec: &BipedSpec, support: &FootPose, side: Side, swing_yaw: f64) -> Region {
    if !yaw_gate(spec, support.yaw, swing_yaw) {
        return Region::empty();
    }
    let Some(center) = step_center(spec, support, side, swing_yaw) else {
        return Region::empty();
    };
    let step = Region::disk(center, spec.step_radius, CIRCLE_SEGMENTS);
    let keep_out = Region::disk(support.xy(), spec.min_separation, CIRCLE_SEGMENTS);
    step.difference(&keep_out)
}

/// Can the foot opposite to `a_side` be placed at `b` while `a` supports?
/// Symmetric: `is_reachable(a, s, b) == is_reachable(b, s.other(), a)`.
pub fn is_reachable(spec: &BipedSpec, a: &FootPose, a_side: Side, b: &FootPose) -> bool {
    let d = b.xy() - a.xy();
    let dist_sq = d.norm_sq();
    let reach = max_step(spec) * (1.0 + 1e-9);
    if dist_sq < spec.min_separation * spec.min_separation || dist_sq > reach * reach {
        return false;
    }
    if !yaw_gate(spec, a.yaw, b.yaw) {
        return false;
    }
    let Some(h) = mid_heading(a.yaw, b.yaw) else {
        return false;
    };
    let off = d + h.perp() * (a_side.sign() * spec.lateral_offset);
    off.norm_sq() <= spec.step_radius * spec.step_radius
}

/// Distance from the probe capsule axis (a vertical segment) to a box.
fn axis_box_distance(p: Point2<f64>, z_lo: f64, z_hi: f64, b: &Aabb) -> f64 {
    let dx = (b.min[0] - p.x).max(p.x - b.max[0]).max(0.0);
    let dy = (b.min[1] - p.y).max(p.y - b.max[1]).max(0.0);
    let dz = if z_hi < b.min[2] {
        b.min[2] - z_hi
    } else if z_lo > b.max[2] {
        z_lo - b.max[2]
    } else {
        0.0
    };
    (dx * dx + dy * dy + dz * dz).sqrt()
}

fn probe_axis(spec: &BipedSpec, z: f64) -> (f64, f64) {
    let c = spec.probe_radius();
    (z - spec.torso_height() + c, z - c)
}

/// Membership in C_N: height gate, probe capsule clear of obstacles, and
/// position over the ground rectangle.
pub fn necessary_check(env: &Environment, spec: &BipedSpec, p: &ExplorePose) -> bool {
    cn_clearance(env, spec, p) >= 0.0
}

/// Signed positional distance from `p` to the boundary of C_N (negative outside).
pub fn cn_clearance(env: &Environment, spec: &BipedSpec, p: &ExplorePose) -> f64 {
    let z = p.z();
    let xy = p.xy();
    let mut c = (z - 0.5 * spec.crouch_height)
        .min(spec.stand_height - z)
        .min(env.ground.inner_clearance(xy));
    let (lo, hi) = probe_axis(spec, z);
    let r = spec.probe_radius();
    for b in &env.obstacles {
        c = c.min(axis_box_distance(xy, lo, hi, b) - r);
    }
    c
}

fn rect_of(b: &Aabb) -> Rect<f64> {
    Rect::new(Point2::new(b.min[0], b.min[1]), Point2::new(b.max[0], b.max[1]))
}

/// Overlap areas below this count as touching, not intersecting.
const OVERLAP_TOL: f64 = 1e-12;

/// Foot rectangle inside the ground and overlapping neither invalid ground
/// nor any obstacle that reaches the floor.
pub fn foot_valid(env: &Environment, spec: &BipedSpec, p: &FootPose) -> bool {
    let ring = p.footprint(spec.foot_half_extents);
    let tol = crate::geom2d::Point2::<f64>::new(1e-12, 1e-12);
    let ground = Rect::new(env.ground.min - tol, env.ground.max + tol);
    if !ring.iter().all(|&q| ground.contains(q)) {
        return false;
    }
    if env.invalid_ground.overlap_area_convex(&ring) > OVERLAP_TOL {
        return false;
    }
    for b in env.obstacles.iter().filter(|b| b.min[2] <= 0.0 && b.max[2] >= 0.0) {
        let r = Region::rect(rect_of(b).min, rect_of(b).max);
        if r.overlap_area_convex(&ring) > OVERLAP_TOL {
            return false;
        }
    }
    true
}

/// Is there a torso height in `[crouch, stand]` whose torso box over `center`
/// misses every obstacle? Touching counts as clear.
pub fn torso_clear(env: &Environment, spec: &BipedSpec, center: Point2<f64>) -> bool {
    torso_height_at(env, spec, center).is_some()
}

/// Lowest admissible torso top height over `center`, if any.
pub fn torso_height_at(env: &Environment, spec: &BipedSpec, center: Point2<f64>) -> Option<f64> {
    let r = spec.torso_radius;
    let h = spec.torso_height();
    let blockers: Vec<(f64, f64)> = env
        .obstacles
        .iter()
        .filter(|b| b.min[0] < center.x + r && b.max[0] > center.x - r && b.min[1] < center.y + r && b.max[1] > center.y - r)
        .map(|b| (b.min[2], b.max[2]))
        .collect();
    let clear = |z: f64| blockers.iter().all(|&(lo, hi)| !(lo < z && hi > z - h));
    let mut candidates = vec![spec.crouch_height, spec.stand_height];
    for &(lo, hi) in &blockers {
        candidates.push(lo);
        candidates.push(hi + h);
    }
    candidates
        .into_iter()
        .filter(|&z| z >= spec.crouch_height && z <= spec.stand_height && clear(z))
        .fold(None, |best: Option<f64>, z| Some(best.map_or(z, |b| b.min(z))))
}

/// Quasi-static transition test between adjacent modes.
pub fn transition_feasible(env: &Environment, spec: &BipedSpec, from: &Mode, to: &Mode) -> bool {
    let adjacent = match (*from, *to) {
        (Mode::DoubleSupport { left, right }, Mode::SingleSupport { side, pose })
        | (Mode::SingleSupport { side, pose }, Mode::DoubleSupport { left, right }) => {
            let (stay, other) = match side {
                Side::Left => (left, right),
                Side::Right => (right, left),
            };
            stay == pose && is_reachable(spec, &stay, side, &other)
        }
        (Mode::DoubleSupport { left: l0, right: r0 }, Mode::DoubleSupport { left: l1, right: r1 }) => {
            if l0 == l1 {
                is_reachable(spec, &l0, Side::Left, &r0) && is_reachable(spec, &l0, Side::Left, &r1)
            } else if r0 == r1 {
                is_reachable(spec, &r0, Side::Right, &l0) && is_reachable(spec, &r0, Side::Right, &l1)
            } else {
                false
            }
        }
        (Mode::SingleSupport { .. }, Mode::SingleSupport { .. }) => false,
    };
    adjacent && torso_clear(env, spec, from.support_center()) && torso_clear(env, spec, to.support_center())
}

/// Projection of a double-support stance into the exploration space.
pub fn stance_projection(spec: &BipedSpec, left: &FootPose, right: &FootPose) -> ExplorePose {
    let c = left.xy().lerp(right.xy(), 0.5);
    let yaw = mid_heading(left.yaw, right.yaw).map_or(left.yaw, |h| h.angle());
    ExplorePose::new([c.x, c.y, spec.nominal_height()], [0.0, 0.0, yaw])
}

/// Full yaw range as `[0, 2π]`.
pub const FULL_YAW: [f64; 2] = [0.0, TAU];
