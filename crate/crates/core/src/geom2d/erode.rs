//! Inward offsetting of a region by a disk.
//!
//! The boundary of the eroded set is made of pieces of the edges shifted
//! inward by `r` and of arcs of radius `r` around reflex vertices. All such
//! candidate pieces are generated, split at their mutual crossings, and a
//! piece survives when its midpoint lies in the region at distance at least
//! `r` from the boundary.

use super::boolean::{assemble_rings, rings_to_region, split_all, DirSeg, Snapper};
use super::point::Point2;
use super::region::{ring_edges, PlanarRegion};
use super::GeomError;
use crate::scalar::Scalar;

/// How arcs around reflex vertices are turned into line segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcResolution<T> {
    /// Fixed number of segments per full circle.
    SegmentsPerCircle(usize),
    /// Largest allowed gap between the polyline and the true arc, meters.
    MaxSagitta(T),
}

impl<T: Scalar> Default for ArcResolution<T> {
    fn default() -> Self {
        ArcResolution::MaxSagitta(T::lit(1e-7))
    }
}

impl<T: Scalar> ArcResolution<T> {
    fn max_step(&self, r: T) -> T {
        match *self {
            ArcResolution::SegmentsPerCircle(n) => T::TAU() / T::from_usize(n.max(8)).unwrap(),
            ArcResolution::MaxSagitta(s) => {
                if s >= r {
                    T::FRAC_PI_2()
                } else {
                    // Circumscribed chords of step h stand off the arc by r(1/cos(h/2) - 1).
                    let c = r / (r + s);
                    (T::lit(2.0) * c.acos()).min(T::FRAC_PI_2())
                }
            }
        }
    }
}

impl<T: Scalar> PlanarRegion<T> {
    /// Points of the region at distance at least `r` from its boundary.
    pub fn erode(&self, r: T) -> Result<Self, GeomError> {
        self.erode_with(r, ArcResolution::default())
    }

    pub fn erode_with(&self, r: T, res: ArcResolution<T>) -> Result<Self, GeomError> {
        if !(r >= T::zero()) || !r.is_finite() {
            return Err(GeomError::InvalidRadius);
        }
        if r == T::zero() || self.is_empty() {
            return Ok(self.clone());
        }
        let step = res.max_step(r);
        let mut segs: Vec<DirSeg<T>> = Vec::new();
        for ring in self.rings() {
            let n = ring.len();
            for (a, b) in ring_edges(ring) {
                let d = b - a;
                let len = d.norm();
                if len <= T::zero() {
                    continue;
                }
                let nrm = d.perp() * (r / len);
                segs.push(DirSeg { a: a + nrm, b: b + nrm, tag: 0 });
            }
            for i in 0..n {
                let prev = ring[(i + n - 1) % n];
                let v = ring[i];
                let next = ring[(i + 1) % n];
                let d1 = v - prev;
                let d2 = next - v;
                if d1.cross(d2) < T::zero() {
                    push_arc(&mut segs, v, d1.perp().angle(), d2.perp().angle(), r, step);
                }
            }
        }
        let pieces = split_all(&segs);
        let keep_tol = T::snap_tol() * T::lit(10.0);
        let mut snap = Snapper::new();
        let mut kept = Vec::new();
        for s in &pieces {
            let m = s.a.lerp(s.b, T::lit(0.5));
            if !self.contains_strict(m) {
                continue;
            }
            if self.boundary_distance(m) >= r - keep_tol {
                kept.push((snap.id(s.a), snap.id(s.b)));
            }
        }
        Ok(rings_to_region(assemble_rings(&snap.pts, &kept)))
    }
}

/// Clockwise arc around `v` from angle `from` to angle `to`, as a polyline tangent to the circle.
fn push_arc<T: Scalar>(segs: &mut Vec<DirSeg<T>>, v: Point2<T>, from: T, to: T, r: T, max_step: T) {
    let mut span = from - to;
    while span < T::zero() {
        span = span + T::TAU();
    }
    while span > T::TAU() {
        span = span - T::TAU();
    }
    if span <= T::zero() {
        return;
    }
    let k = (span / max_step).ceil().max(T::one());
    let h = span / k;
    let k = k.to_usize().unwrap_or(1);
    let outer_r = r / (h * T::lit(0.5)).cos();
    let mut prev = v + Point2::from_angle(from) * r;
    for j in 0..k {
        let ang = from - h * (T::from_usize(j).unwrap() + T::lit(0.5));
        let p = v + Point2::from_angle(ang) * outer_r;
        segs.push(DirSeg { a: prev, b: p, tag: 1 });
        prev = p;
    }
    let end = v + Point2::from_angle(to) * r;
    segs.push(DirSeg { a: prev, b: end, tag: 1 });
}
