//! Bounded SE(3) exploration space: Euler-box sampling, a weighted metric,
//! shortest-arc interpolation and resolution-checked segment validity.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geom2d::Point2;

/// Default rotation weight of the metric, meters per radian.
pub const DEFAULT_W_ROT: f64 = 0.3;

/// Default spacing of validity checks along a segment, metric units.
pub const DEFAULT_DELTA_CHECK: f64 = 0.05;

/// Wrap to `(-π, π]`. Angles already in range are returned unchanged.
pub fn wrap_pi(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let mut w = (a + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w += TAU;
    }
    w
}

/// Wrap to `[0, 2π)`.
pub fn wrap_two_pi(a: f64) -> f64 {
    if (0.0..TAU).contains(&a) {
        return a;
    }
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Signed shortest rotation taking angle `a` to angle `b`. Exactly
/// antisymmetric: `angle_diff(a, b) == -angle_diff(b, a)`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = b - a;
    if d.abs() <= PI {
        d
    } else {
        let w = wrap_pi(d.abs());
        if d < 0.0 { -w } else { w }
    }
}

/// A point of the exploration space: position plus roll, pitch, yaw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplorePose {
    pub position: [f64; 3],
    /// Roll and pitch in `[-π, π]`, yaw in `[0, 2π)`.
    pub orientation: [f64; 3],
}

impl ExplorePose {
    pub fn new(position: [f64; 3], orientation: [f64; 3]) -> Self {
        let [r, p, y] = orientation;
        ExplorePose {
            position,
            orientation: [wrap_pi(r), wrap_pi(p), wrap_two_pi(y)],
        }
    }

    pub fn xy(&self) -> Point2<f64> {
        Point2::new(self.position[0], self.position[1])
    }

    pub fn z(&self) -> f64 {
        self.position[2]
    }
}

/// Axis-aligned box over position and Euler angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExploreBounds {
    pub min: [f64; 3],
    pub max: [f64; 3],
    #[serde(default = "default_angle_min")]
    pub angle_min: [f64; 3],
    #[serde(default = "default_angle_max")]
    pub angle_max: [f64; 3],
}

fn default_angle_min() -> [f64; 3] {
    [-PI, -PI, 0.0]
}

fn default_angle_max() -> [f64; 3] {
    [PI, PI, TAU]
}

impl ExploreBounds {
    /// Box over `min..max` with full angle ranges.
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Self {
        ExploreBounds {
            min,
            max,
            angle_min: default_angle_min(),
            angle_max: default_angle_max(),
        }
    }

    /// Lower and upper limits of all six axes.
    fn axes(&self) -> [(f64, f64); 6] {
        [
            (self.min[0], self.max[0]),
            (self.min[1], self.max[1]),
            (self.min[2], self.max[2]),
            (self.angle_min[0], self.angle_max[0]),
            (self.angle_min[1], self.angle_max[1]),
            (self.angle_min[2], self.angle_max[2]),
        ]
    }

    /// Checks `min <= max` on every axis and finiteness.
    pub fn validate(&self) -> Result<(), String> {
        for (k, (lo, hi)) in self.axes().iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(format!("axis {k} has a non-finite limit"));
            }
            if lo > hi {
                return Err(format!("axis {k} has min > max"));
            }
        }
        Ok(())
    }

    /// The 6-volume |𝓔|.
    pub fn volume(&self) -> f64 {
        self.axes().iter().map(|(lo, hi)| (hi - lo).max(0.0)).product()
    }

    pub fn contains_position(&self, p: [f64; 3]) -> bool {
        (0..3).all(|k| p[k] >= self.min[k] && p[k] <= self.max[k])
    }
}

/// Uniform draw over the 6D box; a degenerate axis yields its single value.
pub fn sample_pose<R: Rng + ?Sized>(bounds: &ExploreBounds, rng: &mut R) -> ExplorePose {
    let mut v = [0.0; 6];
    for (k, (lo, hi)) in bounds.axes().iter().enumerate() {
        v[k] = if hi > lo { rng.gen_range(*lo..*hi) } else { *lo };
    }
    ExplorePose::new([v[0], v[1], v[2]], [v[3], v[4], v[5]])
}

/// Linear in position, shortest-arc linear in each Euler angle.
pub fn interpolate(a: &ExplorePose, b: &ExplorePose, t: f64) -> ExplorePose {
    if t <= 0.0 {
        return *a;
    }
    if t >= 1.0 {
        return *b;
    }
    let mut pos = [0.0; 3];
    let mut ori = [0.0; 3];
    for k in 0..3 {
        pos[k] = a.position[k] + (b.position[k] - a.position[k]) * t;
        ori[k] = a.orientation[k] + angle_diff(a.orientation[k], b.orientation[k]) * t;
    }
    ExplorePose::new(pos, ori)
}

/// `sqrt(|Δp|² + w_rot² |Δangles|²)` with shortest angle differences.
pub fn distance(a: &ExplorePose, b: &ExplorePose, w_rot: f64) -> f64 {
    let mut lin = 0.0;
    let mut rot = 0.0;
    for k in 0..3 {
        let d = b.position[k] - a.position[k];
        lin += d * d;
        let r = angle_diff(a.orientation[k], b.orientation[k]);
        rot += r * r;
    }
    (lin + w_rot * w_rot * rot).sqrt()
}

/// True when `check` holds at both endpoints and at interior poses spaced at
/// most `delta` apart in the metric. Interior poses are visited in bisection
/// order so that failures far from the endpoints are found early.
pub fn segment_valid(
    a: &ExplorePose,
    b: &ExplorePose,
    check: impl Fn(&ExplorePose) -> bool,
    delta: f64,
    w_rot: f64,
) -> bool {
    assert!(delta > 0.0, "check spacing must be positive");
    if !check(a) || !check(b) {
        return false;
    }
    let n = (distance(a, b, w_rot) / delta).ceil().max(1.0) as u64;
    if n == 1 {
        return true;
    }
    // Van der Corput order over 1..n covers every index exactly once.
    let bits = 64 - (n - 1).leading_zeros();
    let size = 1u64 << bits;
    for i in 0..size {
        let k = i.reverse_bits() >> (64 - bits);
        if k == 0 || k >= n {
            continue;
        }
        if !check(&interpolate(a, b, k as f64 / n as f64)) {
            return false;
        }
    }
    true
}

/// A start-to-goal polyline through the exploration space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub vertices: Vec<ExplorePose>,
    /// Arclength in the metric.
    pub length: f64,
    pub projected_xy: Vec<Point2<f64>>,
}

impl Route {
    pub fn new(vertices: Vec<ExplorePose>, w_rot: f64) -> Self {
        assert!(vertices.len() >= 2, "a route needs at least two vertices");
        let length = vertices.windows(2).map(|w| distance(&w[0], &w[1], w_rot)).sum();
        let projected_xy = vertices.iter().map(|v| v.xy()).collect();
        Route {
            vertices,
            length,
            projected_xy,
        }
    }

    /// Planar length of the projection.
    pub fn planar_length(&self) -> f64 {
        self.projected_xy.windows(2).map(|w| w[0].dist(w[1])).sum()
    }

    /// Projected polyline resampled so consecutive points are at most `spacing` apart.
    pub fn densified_xy(&self, spacing: f64) -> Vec<Point2<f64>> {
        assert!(spacing > 0.0);
        let mut out = vec![self.projected_xy[0]];
        for w in self.projected_xy.windows(2) {
            let n = (w[0].dist(w[1]) / spacing).ceil().max(1.0) as usize;
            for k in 1..=n {
                out.push(w[0].lerp(w[1], k as f64 / n as f64));
            }
        }
        out
    }

    /// Distance from `p` to the projected polyline.
    pub fn planar_distance(&self, p: Point2<f64>) -> f64 {
        self.projected_xy
            .windows(2)
            .map(|w| crate::geom2d::point_segment_dist(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }
}
