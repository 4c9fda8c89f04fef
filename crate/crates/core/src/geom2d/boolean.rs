//! Boolean operations on planar regions by segment arrangement.
//!
//! Every boundary edge of both operands is split at all mutual intersections.
//! Each resulting piece is kept or dropped by classifying its midpoint against
//! the other operand; kept pieces are re-chained into rings with the interior
//! on the left.

use std::collections::{HashMap, HashSet};

use super::point::{point_segment_dist, Point2, Rect};
use super::region::{ring_edges, ring_signed_area, ring_crossings, PlanarRegion, Polygon};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Intersection,
    Union,
    Difference,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct DirSeg<T> {
    pub a: Point2<T>,
    pub b: Point2<T>,
    pub tag: u32,
}

/// Split every segment at its intersections with every other segment.
pub(crate) fn split_all<T: Scalar>(segs: &[DirSeg<T>]) -> Vec<DirSeg<T>> {
    let tol = T::snap_tol();
    let n = segs.len();
    let mut params: Vec<Vec<T>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = (0..n).collect();
    let min_x = |s: &DirSeg<T>| s.a.x.min(s.b.x);
    let max_x = |s: &DirSeg<T>| s.a.x.max(s.b.x);
    order.sort_by(|&i, &j| min_x(&segs[i]).partial_cmp(&min_x(&segs[j])).unwrap_or(std::cmp::Ordering::Equal));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let si = &segs[i];
        let lo = min_x(si) - tol;
        active.retain(|&j| max_x(&segs[j]) >= lo);
        let (ylo, yhi) = (si.a.y.min(si.b.y) - tol, si.a.y.max(si.b.y) + tol);
        for &j in &active {
            let sj = &segs[j];
            if sj.a.y.max(sj.b.y) < ylo || sj.a.y.min(sj.b.y) > yhi {
                continue;
            }
            intersect_into(si, sj, tol, i, j, &mut params);
        }
        active.push(i);
    }
    let mut out = Vec::with_capacity(n * 2);
    for (i, s) in segs.iter().enumerate() {
        let len = s.a.dist(s.b);
        if len <= tol {
            continue;
        }
        let eps = tol / len;
        let ps = &mut params[i];
        ps.retain(|&t| t > eps && t < T::one() - eps);
        ps.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        let mut prev_t = T::zero();
        let mut prev = s.a;
        for &t in ps.iter() {
            if t - prev_t <= eps {
                continue;
            }
            let p = s.a.lerp(s.b, t);
            out.push(DirSeg { a: prev, b: p, tag: s.tag });
            prev = p;
            prev_t = t;
        }
        out.push(DirSeg { a: prev, b: s.b, tag: s.tag });
    }
    out
}

fn intersect_into<T: Scalar>(
    s1: &DirSeg<T>,
    s2: &DirSeg<T>,
    tol: T,
    i: usize,
    j: usize,
    params: &mut [Vec<T>],
) {
    let p = s1.a;
    let r = s1.b - s1.a;
    let q = s2.a;
    let s = s2.b - s2.a;
    let lr = r.norm();
    let ls = s.norm();
    if lr <= tol || ls <= tol {
        return;
    }
    let denom = r.cross(s);
    let qp = q - p;
    // Collinear overlap: split each at the other's endpoints.
    if denom.abs() <= T::lit(1e-12) * lr * ls {
        if (qp.cross(r) / lr).abs() > tol {
            return;
        }
        let lr2 = lr * lr;
        let ls2 = ls * ls;
        for t in [qp.dot(r) / lr2, (s2.b - p).dot(r) / lr2] {
            params[i].push(t);
        }
        for u in [(p - q).dot(s) / ls2, (s1.b - q).dot(s) / ls2] {
            params[j].push(u);
        }
        return;
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let et = tol / lr;
    let eu = tol / ls;
    if t >= -et && t <= T::one() + et && u >= -eu && u <= T::one() + eu {
        params[i].push(t);
        params[j].push(u);
    }
}

/// Merges points closer than the snap tolerance into shared vertex ids.
pub(crate) struct Snapper<T> {
    tol: T,
    cells: HashMap<(i64, i64), Vec<u32>>,
    pub pts: Vec<Point2<T>>,
}

impl<T: Scalar> Snapper<T> {
    pub fn new() -> Self {
        Snapper {
            tol: T::snap_tol(),
            cells: HashMap::new(),
            pts: Vec::new(),
        }
    }

    fn key(&self, p: Point2<T>) -> (i64, i64) {
        let kx = (p.x / self.tol).floor().to_i64().unwrap_or(i64::MAX);
        let ky = (p.y / self.tol).floor().to_i64().unwrap_or(i64::MAX);
        (kx, ky)
    }

    pub fn id(&mut self, p: Point2<T>) -> u32 {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        if self.pts[id as usize].dist(p) <= self.tol {
                            return id;
                        }
                    }
                }
            }
        }
        let id = self.pts.len() as u32;
        self.pts.push(p);
        self.cells.entry((kx, ky)).or_default().push(id);
        id
    }
}

/// Chain directed edges into closed rings, interior on the left.
pub(crate) fn assemble_rings<T: Scalar>(pts: &[Point2<T>], edges: &[(u32, u32)]) -> Vec<Vec<Point2<T>>> {
    // Drop duplicates and cancel antiparallel pairs.
    let mut set: HashSet<(u32, u32)> = HashSet::new();
    let mut uniq: Vec<(u32, u32)> = Vec::new();
    for &(u, v) in edges {
        if u != v && set.insert((u, v)) {
            uniq.push((u, v));
        }
    }
    let uniq: Vec<(u32, u32)> = uniq.into_iter().filter(|&(u, v)| !set.contains(&(v, u))).collect();

    let mut out_edges: HashMap<u32, Vec<usize>> = HashMap::new();
    for (k, &(u, _)) in uniq.iter().enumerate() {
        out_edges.entry(u).or_default().push(k);
    }
    let mut used = vec![false; uniq.len()];
    let mut rings = Vec::new();
    for start in 0..uniq.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let origin = uniq[start].0;
        let mut chain = vec![origin];
        let mut cur = start;
        let closed = loop {
            let (u, v) = uniq[cur];
            if v == origin {
                break true;
            }
            chain.push(v);
            let back = pts[u as usize] - pts[v as usize];
            let candidates = match out_edges.get(&v) {
                Some(c) => c,
                None => break false,
            };
            let mut best: Option<(usize, T)> = None;
            for &k in candidates {
                if used[k] {
                    continue;
                }
                let d = pts[uniq[k].1 as usize] - pts[v as usize];
                // Counter-clockwise angle from the outgoing direction to the back direction.
                let mut ang = d.cross(back).atan2(d.dot(back));
                if ang <= T::zero() {
                    ang = ang + T::TAU();
                }
                if best.is_none_or(|(_, b)| ang < b) {
                    best = Some((k, ang));
                }
            }
            match best {
                Some((k, _)) => {
                    used[k] = true;
                    cur = k;
                }
                None => break false,
            }
        };
        if closed && chain.len() >= 3 {
            let ring: Vec<Point2<T>> = chain.iter().map(|&id| pts[id as usize]).collect();
            let ring = drop_collinear(ring);
            let tiny = T::snap_tol() * T::snap_tol() * T::lit(100.0);
            if ring.len() >= 3 && ring_signed_area(&ring).abs() > tiny {
                rings.push(ring);
            }
        }
    }
    rings
}

fn drop_collinear<T: Scalar>(ring: Vec<Point2<T>>) -> Vec<Point2<T>> {
    let n = ring.len();
    if n < 4 {
        return ring;
    }
    let tol = T::snap_tol() * T::lit(1e-3);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let prev = ring[(i + n - 1) % n];
        let cur = ring[i];
        let next = ring[(i + 1) % n];
        let d1 = cur - prev;
        let d2 = next - cur;
        let straight = d1.cross(d2).abs() <= tol * d1.norm().max(d2.norm()) && d1.dot(d2) > T::zero();
        if !straight {
            out.push(cur);
        }
    }
    if out.len() < 3 {
        ring
    } else {
        out
    }
}

/// Group oriented rings into polygons: counter-clockwise rings are outers, clockwise rings are holes.
pub(crate) fn rings_to_region<T: Scalar>(rings: Vec<Vec<Point2<T>>>) -> PlanarRegion<T> {
    let mut outers: Vec<(Vec<Point2<T>>, T)> = Vec::new();
    let mut holes: Vec<Vec<Point2<T>>> = Vec::new();
    for r in rings {
        let a = ring_signed_area(&r);
        if a > T::zero() {
            outers.push((r, a));
        } else {
            holes.push(r);
        }
    }
    // Smallest containing outer first.
    outers.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(std::cmp::Ordering::Equal));
    let mut polys: Vec<Polygon<T>> = outers
        .into_iter()
        .map(|(outer, _)| Polygon { outer, holes: Vec::new() })
        .collect();
    let probe_off = T::snap_tol() * T::lit(1e3);
    for h in holes {
        // A point just outside the hole lies in the material of its owner.
        let (a, b) = ring_edges(&h).max_by(|x, y| {
            x.0.dist(x.1).partial_cmp(&y.0.dist(y.1)).unwrap_or(std::cmp::Ordering::Equal)
        }).expect("ring has edges");
        let dir = b - a;
        let probe = a.lerp(b, T::lit(0.5)) + dir.perp() * (probe_off / dir.norm());
        if let Some(p) = polys.iter_mut().find(|p| ring_crossings(&p.outer, probe)) {
            p.holes.push(h);
        }
    }
    PlanarRegion::from_polygons(polys)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Inside,
    Outside,
    SharedSame,
    SharedOpposite,
}

fn classify<T: Scalar>(seg: &DirSeg<T>, other: &PlanarRegion<T>, other_bb: Option<Rect<T>>) -> Side {
    let m = seg.a.lerp(seg.b, T::lit(0.5));
    let shared_tol = T::snap_tol() * T::lit(10.0);
    if let Some(bb) = other_bb {
        if m.x < bb.min.x - shared_tol
            || m.x > bb.max.x + shared_tol
            || m.y < bb.min.y - shared_tol
            || m.y > bb.max.y + shared_tol
        {
            return Side::Outside;
        }
    } else {
        return Side::Outside;
    }
    let mut best = T::infinity();
    let mut best_dir = Point2::zero();
    for (a, b) in other.edges() {
        let d = point_segment_dist(m, a, b);
        if d < best {
            best = d;
            best_dir = b - a;
        }
    }
    if best <= shared_tol {
        if best_dir.dot(seg.b - seg.a) > T::zero() {
            Side::SharedSame
        } else {
            Side::SharedOpposite
        }
    } else if other.contains_strict(m) {
        Side::Inside
    } else {
        Side::Outside
    }
}

fn region_segments<T: Scalar>(r: &PlanarRegion<T>, tag: u32) -> impl Iterator<Item = DirSeg<T>> + '_ {
    r.edges().map(move |(a, b)| DirSeg { a, b, tag })
}

/// Exact (up to snapping) boolean combination of two regions.
pub fn boolean<T: Scalar>(a: &PlanarRegion<T>, b: &PlanarRegion<T>, op: BoolOp) -> PlanarRegion<T> {
    match op {
        BoolOp::Intersection if a.is_empty() || b.is_empty() => return PlanarRegion::empty(),
        BoolOp::Union if a.is_empty() => return b.clone(),
        BoolOp::Union if b.is_empty() => return a.clone(),
        BoolOp::Difference if a.is_empty() => return PlanarRegion::empty(),
        BoolOp::Difference if b.is_empty() => return a.clone(),
        _ => {}
    }
    let (abb, bbb) = (a.bbox(), b.bbox());
    if let (Some(x), Some(y)) = (abb, bbb) {
        if !x.overlaps(&y) {
            return match op {
                BoolOp::Intersection => PlanarRegion::empty(),
                BoolOp::Union => {
                    let mut polys = a.polygons.clone();
                    polys.extend(b.polygons.iter().cloned());
                    PlanarRegion::from_polygons(polys)
                }
                BoolOp::Difference => a.clone(),
            };
        }
    }
    let segs: Vec<DirSeg<T>> = region_segments(a, 0).chain(region_segments(b, 1)).collect();
    let pieces = split_all(&segs);
    let mut snap = Snapper::new();
    let mut kept: Vec<(u32, u32)> = Vec::new();
    for s in &pieces {
        let from_a = s.tag == 0;
        let side = if from_a { classify(s, b, bbb) } else { classify(s, a, abb) };
        let keep = match (op, from_a, side) {
            (BoolOp::Intersection, _, Side::Inside | Side::SharedSame) => Some(false),
            (BoolOp::Union, _, Side::Outside | Side::SharedSame) => Some(false),
            (BoolOp::Difference, true, Side::Outside | Side::SharedOpposite) => Some(false),
            (BoolOp::Difference, false, Side::Inside) => Some(true),
            _ => None,
        };
        if let Some(reverse) = keep {
            let (u, v) = (snap.id(s.a), snap.id(s.b));
            kept.push(if reverse { (v, u) } else { (u, v) });
        }
    }
    rings_to_region(assemble_rings(&snap.pts, &kept))
}

impl<T: Scalar> PlanarRegion<T> {
    pub fn intersection(&self, other: &Self) -> Self {
        boolean(self, other, BoolOp::Intersection)
    }

    pub fn union(&self, other: &Self) -> Self {
        boolean(self, other, BoolOp::Union)
    }

    pub fn difference(&self, other: &Self) -> Self {
        boolean(self, other, BoolOp::Difference)
    }

    /// Union of possibly overlapping polygons.
    pub fn union_all<I: IntoIterator<Item = Polygon<T>>>(polys: I) -> Self {
        polys.into_iter().fold(PlanarRegion::empty(), |acc, p| {
            acc.union(&PlanarRegion::from_polygons(vec![p]))
        })
    }
}
