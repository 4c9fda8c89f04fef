use serde::{Deserialize, Serialize};

use super::point::{Point2, Rect};
use super::region::PlanarRegion;
use super::GeomError;
use crate::scalar::Scalar;

/// Wrap an angle into `[0, 2π)`.
pub fn wrap_two_pi<T: Scalar>(a: T) -> T {
    let tau = T::TAU();
    let mut w = a % tau;
    if w < T::zero() {
        w = w + tau;
    }
    if w >= tau {
        w = w - tau;
    }
    w
}

/// A vertical cylinder in (x, y, yaw): a disk of placements times a yaw interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct SE2Cylinder<T> {
    pub center: Point2<T>,
    pub radius: T,
    /// `[lo, hi]` with `lo` in `[0, 2π)` and `0 < hi - lo <= 2π`.
    pub yaw: [T; 2],
}

impl<T: Scalar> SE2Cylinder<T> {
    pub fn new(center: Point2<T>, radius: T, yaw_lo: T, yaw_span: T) -> Result<Self, GeomError> {
        if !(radius >= T::zero()) || !(yaw_span > T::zero()) || yaw_span > T::TAU() + T::boundary_tol() {
            return Err(GeomError::InvalidCylinder);
        }
        let lo = wrap_two_pi(yaw_lo);
        Ok(SE2Cylinder {
            center,
            radius,
            yaw: [lo, lo + yaw_span.min(T::TAU())],
        })
    }

    /// Cylinder covering every yaw.
    pub fn full_yaw(center: Point2<T>, radius: T) -> Self {
        SE2Cylinder {
            center,
            radius,
            yaw: [T::zero(), T::TAU()],
        }
    }

    pub fn yaw_span(&self) -> T {
        self.yaw[1] - self.yaw[0]
    }

    /// π r² Δθ.
    pub fn volume(&self) -> T {
        T::PI() * self.radius * self.radius * self.yaw_span()
    }

    pub fn contains_yaw(&self, yaw: T) -> bool {
        if self.yaw_span() >= T::TAU() {
            return true;
        }
        wrap_two_pi(yaw - self.yaw[0]) <= self.yaw_span()
    }

    pub fn contains(&self, p: Point2<T>, yaw: T) -> bool {
        p.dist(self.center) <= self.radius && self.contains_yaw(yaw)
    }
}

/// Planar slices of a shape in (x, y, yaw), taken at uniform yaw spacing.
/// Each slice stands for the yaw slab of width `spacing` centered on its yaw.
#[derive(Debug, Clone, PartialEq)]
pub struct YawSlicedRegion<T> {
    slices: Vec<(T, PlanarRegion<T>)>,
    spacing: T,
}

impl<T: Scalar> YawSlicedRegion<T> {
    pub fn new(slices: Vec<(T, PlanarRegion<T>)>, spacing: T) -> Result<Self, GeomError> {
        if slices.is_empty() {
            return Err(GeomError::InvalidStack("no slices".into()));
        }
        if !(spacing > T::zero()) {
            return Err(GeomError::InvalidStack("slice spacing must be positive".into()));
        }
        let tol = spacing * T::lit(1e-6);
        for w in slices.windows(2) {
            let gap = w[1].0 - w[0].0;
            if (gap - spacing).abs() > tol {
                return Err(GeomError::InvalidStack("slice yaws must be uniformly spaced and increasing".into()));
            }
        }
        if spacing * T::from_usize(slices.len()).unwrap() > T::TAU() + tol {
            return Err(GeomError::InvalidStack("stack wraps more than a full turn".into()));
        }
        Ok(YawSlicedRegion { slices, spacing })
    }

    pub fn slices(&self) -> &[(T, PlanarRegion<T>)] {
        &self.slices
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    fn bbox(&self) -> Option<Rect<T>> {
        Rect::bounding(
            self.slices
                .iter()
                .filter_map(|(_, r)| r.bbox())
                .flat_map(|b| [b.min, b.max]),
        )
    }

    /// Per-slice radius of the largest disk at `c` inside each slice (negative when outside).
    fn clearances(&self, c: Point2<T>, out: &mut Vec<T>) {
        out.clear();
        for (_, r) in &self.slices {
            if r.contains_strict(c) {
                out.push(r.boundary_distance(c));
            } else {
                out.push(-T::one());
            }
        }
    }

    /// Best contiguous slice range at `c`: (radius, first slice, slice count).
    fn best_at(&self, c: Point2<T>, buf: &mut Vec<T>) -> Option<(T, usize, usize)> {
        self.clearances(c, buf);
        let mut best: Option<(T, usize, usize)> = None;
        let mut best_score = T::zero();
        for i in 0..buf.len() {
            let mut m = T::infinity();
            for (j, &d) in buf.iter().enumerate().skip(i) {
                m = m.min(d);
                if m <= T::zero() {
                    break;
                }
                let count = j - i + 1;
                let score = m * m * T::from_usize(count).unwrap();
                if score > best_score {
                    best_score = score;
                    best = Some((m, i, count));
                }
            }
        }
        best
    }

    fn cylinder_for(&self, c: Point2<T>, radius: T, first: usize, count: usize) -> SE2Cylinder<T> {
        let half = self.spacing * T::lit(0.5);
        let lo = self.slices[first].0 - half;
        let span = self.spacing * T::from_usize(count).unwrap();
        SE2Cylinder::new(c, radius, lo, span).expect("positive span")
    }

    /// Feasibility of a cylinder against the slices it spans.
    pub fn admits(&self, cyl: &SE2Cylinder<T>) -> bool {
        let half = self.spacing * T::lit(0.5);
        self.slices
            .iter()
            .filter(|(yaw, _)| {
                // Slice slab lies inside the cylinder's yaw interval.
                let lo = wrap_two_pi(*yaw - half - cyl.yaw[0]);
                cyl.yaw_span() >= T::TAU()
                    || (lo + self.spacing <= cyl.yaw_span() + self.spacing * T::lit(1e-6))
            })
            .all(|(_, r)| r.contains_disk(cyl.center, cyl.radius))
    }

    /// Approximate maximizer of π r² Δθ by grid search over centers at spacing `grid`.
    pub fn largest_inscribed_cylinder(&self, grid: T) -> Result<SE2Cylinder<T>, GeomError> {
        let bb = self.bbox().ok_or(GeomError::NoCylinder)?;
        if !(grid > T::zero()) {
            return Err(GeomError::InvalidStack("grid spacing must be positive".into()));
        }
        let mut buf = Vec::with_capacity(self.slices.len());
        let mut best: Option<(T, Point2<T>, T, usize, usize)> = None;
        let consider = |c: Point2<T>, buf: &mut Vec<T>, best: &mut Option<(T, Point2<T>, T, usize, usize)>| {
            if let Some((r, i, n)) = self.best_at(c, buf) {
                let score = r * r * T::from_usize(n).unwrap();
                if best.is_none_or(|b| score > b.0) {
                    *best = Some((score, c, r, i, n));
                }
            }
        };
        let nx = ((bb.width() / grid).ceil().to_usize().unwrap_or(0)).max(1);
        let ny = ((bb.height() / grid).ceil().to_usize().unwrap_or(0)).max(1);
        for ix in 0..=nx {
            for iy in 0..=ny {
                let c = Point2::new(
                    bb.min.x + grid * T::from_usize(ix).unwrap(),
                    bb.min.y + grid * T::from_usize(iy).unwrap(),
                );
                consider(c, &mut buf, &mut best);
            }
        }
        // Vertex centroids catch regions thinner than the grid.
        for (_, r) in &self.slices {
            for p in &r.polygons {
                let n = T::from_usize(p.outer.len()).unwrap();
                let c = p.outer.iter().fold(Point2::zero(), |acc, &q| acc + q) * (T::one() / n);
                consider(c, &mut buf, &mut best);
            }
        }
        let (_, mut c, _, _, _) = best.ok_or(GeomError::NoCylinder)?;
        // Local refinement around the best grid center.
        let mut step = grid * T::lit(0.5);
        let stop = grid * T::lit(1e-3);
        while step > stop {
            let mut improved = false;
            for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let cand = c + Point2::new(T::lit(dx), T::lit(dy)) * step;
                let before = best.map(|b| b.0);
                consider(cand, &mut buf, &mut best);
                if best.map(|b| b.0) != before {
                    improved = true;
                }
            }
            c = best.expect("best set").1;
            if !improved {
                step = step * T::lit(0.5);
            }
        }
        let (_, c, r, i, n) = best.expect("best set");
        // Shave the radius so the containment check passes through the boundary band.
        let cyl = self.cylinder_for(c, (r - T::boundary_tol()).max(T::zero()), i, n);
        debug_assert!(self.admits(&cyl));
        Ok(cyl)
    }
}
