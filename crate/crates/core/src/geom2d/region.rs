use serde::{Deserialize, Serialize};

use super::point::{point_segment_dist, Point2, Rect};
use super::GeomError;
use crate::scalar::Scalar;

/// Signed shoelace area of a closed ring (positive when counter-clockwise).
pub fn ring_signed_area<T: Scalar>(ring: &[Point2<T>]) -> T {
    let n = ring.len();
    if n < 3 {
        return T::zero();
    }
    let mut acc = T::zero();
    for i in 0..n {
        acc = acc + ring[i].cross(ring[(i + 1) % n]);
    }
    acc * T::lit(0.5)
}

/// Iterate the closed edges of a ring.
pub fn ring_edges<T: Scalar>(ring: &[Point2<T>]) -> impl Iterator<Item = (Point2<T>, Point2<T>)> + '_ {
    let n = ring.len();
    (0..n).map(move |i| (ring[i], ring[(i + 1) % n]))
}

/// Even-odd crossing test against one ring, no boundary handling.
pub fn ring_crossings<T: Scalar>(ring: &[Point2<T>], p: Point2<T>) -> bool {
    let mut inside = false;
    let n = ring.len();
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let a = ring[i];
        let b = ring[j];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn segments_properly_cross<T: Scalar>(a: Point2<T>, b: Point2<T>, c: Point2<T>, d: Point2<T>) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    ((d1 > T::zero() && d2 < T::zero()) || (d1 < T::zero() && d2 > T::zero()))
        && ((d3 > T::zero() && d4 < T::zero()) || (d3 < T::zero() && d4 > T::zero()))
}

/// A simple polygon with optional holes. Outer ring counter-clockwise, holes clockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct Polygon<T> {
    pub outer: Vec<Point2<T>>,
    #[serde(default)]
    pub holes: Vec<Vec<Point2<T>>>,
}

impl<T: Scalar> Polygon<T> {
    /// Build a polygon, normalizing ring orientation and rejecting broken topology.
    pub fn new(outer: Vec<Point2<T>>, holes: Vec<Vec<Point2<T>>>) -> Result<Self, GeomError> {
        let mut poly = Polygon { outer, holes };
        poly.normalize()?;
        Ok(poly)
    }

    /// Axis-aligned rectangle.
    pub fn rect(min: Point2<T>, max: Point2<T>) -> Self {
        Polygon {
            outer: Rect::new(min, max).corners().to_vec(),
            holes: Vec::new(),
        }
    }

    /// Regular polygon with vertices on the circle.
    pub fn circle(center: Point2<T>, radius: T, segments: usize) -> Self {
        Self::regular(center, radius, segments)
    }

    /// Regular polygon whose edges are tangent to the circle, so it contains the disk.
    pub fn circle_circumscribed(center: Point2<T>, radius: T, segments: usize) -> Self {
        let half = T::PI() / T::from_usize(segments).unwrap();
        Self::regular(center, radius / half.cos(), segments)
    }

    fn regular(center: Point2<T>, radius: T, segments: usize) -> Self {
        let n = segments.max(3);
        let step = T::TAU() / T::from_usize(n).unwrap();
        let outer = (0..n)
            .map(|i| center + Point2::from_angle(step * T::from_usize(i).unwrap()) * radius)
            .collect();
        Polygon { outer, holes: Vec::new() }
    }

    /// Oriented rectangle with the given half extents, centered at `center`, rotated by `yaw`.
    pub fn oriented_rect(center: Point2<T>, half: (T, T), yaw: T) -> Self {
        let (hx, hy) = half;
        let outer = [(-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy)]
            .iter()
            .map(|&(x, y)| center + Point2::new(x, y).rotate(yaw))
            .collect();
        Polygon { outer, holes: Vec::new() }
    }

    fn normalize(&mut self) -> Result<(), GeomError> {
        check_ring(&self.outer, "outer")?;
        if ring_signed_area(&self.outer) < T::zero() {
            self.outer.reverse();
        }
        for h in &mut self.holes {
            check_ring(h, "hole")?;
            if ring_signed_area(h) > T::zero() {
                h.reverse();
            }
        }
        for h in &self.holes {
            let inside = h
                .iter()
                .any(|&p| ring_crossings(&self.outer, p) && ring_min_dist(&self.outer, p) > T::boundary_tol());
            if !inside {
                return Err(GeomError::InvalidPolygon("hole lies outside its outer ring".into()));
            }
        }
        Ok(())
    }

    pub fn rings(&self) -> impl Iterator<Item = &Vec<Point2<T>>> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn area(&self) -> T {
        let holes = self
            .holes
            .iter()
            .fold(T::zero(), |acc, h| acc + ring_signed_area(h).abs());
        (ring_signed_area(&self.outer).abs() - holes).max(T::zero())
    }

    pub fn bbox(&self) -> Rect<T> {
        Rect::bounding(self.outer.iter().copied()).expect("polygon has vertices")
    }

    pub fn map_points(&self, f: impl Fn(Point2<T>) -> Point2<T>) -> Self {
        Polygon {
            outer: self.outer.iter().map(|&p| f(p)).collect(),
            holes: self.holes.iter().map(|h| h.iter().map(|&p| f(p)).collect()).collect(),
        }
    }
}

fn ring_min_dist<T: Scalar>(ring: &[Point2<T>], p: Point2<T>) -> T {
    ring_edges(ring).fold(T::infinity(), |m, (a, b)| m.min(point_segment_dist(p, a, b)))
}

fn check_ring<T: Scalar>(ring: &[Point2<T>], which: &str) -> Result<(), GeomError> {
    if ring.len() < 3 {
        return Err(GeomError::InvalidPolygon(format!("{which} ring has fewer than 3 vertices")));
    }
    if ring.iter().any(|p| !p.is_finite()) {
        return Err(GeomError::InvalidPolygon(format!("{which} ring has a non-finite vertex")));
    }
    if ring_signed_area(ring).abs() <= T::zero() {
        return Err(GeomError::InvalidPolygon(format!("{which} ring has zero area")));
    }
    let n = ring.len();
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            if segments_properly_cross(a, b, c, d) {
                return Err(GeomError::InvalidPolygon(format!("{which} ring self-intersects")));
            }
        }
    }
    Ok(())
}

/// A set of non-overlapping polygons with holes. The empty list is the empty region.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct PlanarRegion<T> {
    pub polygons: Vec<Polygon<T>>,
}

impl<T: Scalar> PlanarRegion<T> {
    pub fn empty() -> Self {
        PlanarRegion { polygons: Vec::new() }
    }

    /// Wrap already-normalized polygons whose interiors are known to be disjoint.
    pub fn from_polygons(polygons: Vec<Polygon<T>>) -> Self {
        PlanarRegion { polygons }
    }

    /// Validate and normalize every polygon. Overlap between polygons is not checked.
    pub fn new(polygons: Vec<Polygon<T>>) -> Result<Self, GeomError> {
        let polygons = polygons
            .into_iter()
            .map(|p| Polygon::new(p.outer, p.holes))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PlanarRegion { polygons })
    }

    pub fn rect(min: Point2<T>, max: Point2<T>) -> Self {
        Self::from_polygons(vec![Polygon::rect(min, max)])
    }

    pub fn disk(center: Point2<T>, radius: T, segments: usize) -> Self {
        Self::from_polygons(vec![Polygon::circle(center, radius, segments)])
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    pub fn rings(&self) -> impl Iterator<Item = &Vec<Point2<T>>> {
        self.polygons.iter().flat_map(|p| p.rings())
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2<T>, Point2<T>)> + '_ {
        self.rings().flat_map(|r| ring_edges(r))
    }

    pub fn vertex_count(&self) -> usize {
        self.rings().map(|r| r.len()).sum()
    }

    /// Shoelace area minus holes.
    pub fn area(&self) -> T {
        self.polygons.iter().fold(T::zero(), |acc, p| acc + p.area())
    }

    pub fn bbox(&self) -> Option<Rect<T>> {
        Rect::bounding(self.polygons.iter().flat_map(|p| p.outer.iter().copied()))
    }

    /// Distance from `p` to the nearest boundary edge (infinite for the empty region).
    pub fn boundary_distance(&self, p: Point2<T>) -> T {
        self.edges()
            .fold(T::infinity(), |m, (a, b)| m.min(point_segment_dist(p, a, b)))
    }

    /// Even-odd membership without a boundary band.
    pub fn contains_strict(&self, p: Point2<T>) -> bool {
        let mut inside = false;
        for ring in self.rings() {
            if ring_crossings(ring, p) {
                inside = !inside;
            }
        }
        inside
    }

    /// Even-odd membership; points within the boundary band count as inside.
    pub fn contains(&self, p: Point2<T>) -> bool {
        if let Some(bb) = self.bbox() {
            let tol = T::boundary_tol();
            if p.x < bb.min.x - tol || p.x > bb.max.x + tol || p.y < bb.min.y - tol || p.y > bb.max.y + tol {
                return false;
            }
        } else {
            return false;
        }
        if self.boundary_distance(p) <= T::boundary_tol() {
            return true;
        }
        self.contains_strict(p)
    }

    /// True when the closed disk lies in the region (up to the boundary band).
    pub fn contains_disk(&self, center: Point2<T>, radius: T) -> bool {
        self.contains_strict(center) && self.boundary_distance(center) + T::boundary_tol() >= radius
    }

    pub fn map_points(&self, f: impl Fn(Point2<T>) -> Point2<T> + Copy) -> Self {
        PlanarRegion {
            polygons: self.polygons.iter().map(|p| p.map_points(f)).collect(),
        }
    }

    pub fn translate(&self, t: Point2<T>) -> Self {
        self.map_points(move |p| p + t)
    }

    /// Rotate about the origin by `yaw`, then translate by `t`.
    pub fn transform(&self, yaw: T, t: Point2<T>) -> Self {
        self.map_points(move |p| p.rotate(yaw) + t)
    }

    /// Area of the overlap with a convex polygon (counter-clockwise ring).
    pub fn overlap_area_convex(&self, convex: &[Point2<T>]) -> T {
        let Some(cb) = Rect::bounding(convex.iter().copied()) else {
            return T::zero();
        };
        let mut total = T::zero();
        for poly in &self.polygons {
            if !poly.bbox().overlaps(&cb) {
                continue;
            }
            total = total + ring_signed_area(&clip_convex(&poly.outer, convex)).abs();
            for h in &poly.holes {
                total = total - ring_signed_area(&clip_convex(h, convex)).abs();
            }
        }
        total.max(T::zero())
    }
}

/// Sutherland-Hodgman clip of an arbitrary ring against a counter-clockwise convex ring.
/// The signed area of the result equals the signed area of the intersection.
pub fn clip_convex<T: Scalar>(subject: &[Point2<T>], clip: &[Point2<T>]) -> Vec<Point2<T>> {
    let mut out: Vec<Point2<T>> = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % n];
        let edge = b - a;
        let input = std::mem::take(&mut out);
        let m = input.len();
        for j in 0..m {
            let cur = input[j];
            let prev = input[(j + m - 1) % m];
            let cur_in = edge.cross(cur - a) >= T::zero();
            let prev_in = edge.cross(prev - a) >= T::zero();
            if cur_in {
                if !prev_in {
                    out.push(line_hit(prev, cur, a, edge));
                }
                out.push(cur);
            } else if prev_in {
                out.push(line_hit(prev, cur, a, edge));
            }
        }
    }
    out
}

fn line_hit<T: Scalar>(p: Point2<T>, q: Point2<T>, a: Point2<T>, edge: Point2<T>) -> Point2<T> {
    let d = q - p;
    let denom = edge.cross(d);
    if denom == T::zero() {
        return p;
    }
    let s = edge.cross(a - p) / denom;
    p + d * s.max(T::zero()).min(T::one())
}
