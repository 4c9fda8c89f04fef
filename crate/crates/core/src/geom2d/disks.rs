//! Exact area of a union of equal disks, optionally clipped to a rectangle,
//! by integrating x dy - y dx around the boundary arcs and clip edges.

use super::point::{Point2, Rect};
use crate::scalar::Scalar;

fn push_line_hits<T: Scalar>(c: Point2<T>, r: T, rect: &Rect<T>, angles: &mut Vec<T>) {
    for x in [rect.min.x, rect.max.x] {
        let dx = x - c.x;
        if dx.abs() < r {
            let a = (dx / r).acos();
            angles.push(a);
            angles.push(-a);
        }
    }
    for y in [rect.min.y, rect.max.y] {
        let dy = y - c.y;
        if dy.abs() < r {
            let a = (dy / r).asin();
            angles.push(a);
            angles.push(T::PI() - a);
        }
    }
}

/// Area of `∪ disk(c_i, radius) ∩ clip`.
pub fn disk_union_area<T: Scalar>(centers: &[Point2<T>], radius: T, clip: Option<Rect<T>>) -> T {
    if centers.is_empty() || !(radius > T::zero()) {
        return T::zero();
    }
    let tol = T::snap_tol();
    let mut uniq: Vec<Point2<T>> = Vec::with_capacity(centers.len());
    for &c in centers {
        if !uniq.iter().any(|&u| u.dist(c) <= tol) {
            uniq.push(c);
        }
    }
    let r = radius;
    let covered = |p: Point2<T>, skip: usize| {
        uniq.iter()
            .enumerate()
            .any(|(k, &c)| k != skip && c.dist(p) < r)
    };
    let inside_clip = |p: Point2<T>| clip.is_none_or(|rc| rc.contains(p));
    let half = T::lit(0.5);
    let mut twice_area = T::zero();
    let mut angles: Vec<T> = Vec::new();
    for (i, &c) in uniq.iter().enumerate() {
        angles.clear();
        for (j, &o) in uniq.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = c.dist(o);
            if d >= r + r {
                continue;
            }
            let base = (o - c).angle();
            let off = (d / (r + r)).acos();
            angles.push(base + off);
            angles.push(base - off);
        }
        if let Some(rc) = clip {
            push_line_hits(c, r, &rc, &mut angles);
        }
        for a in angles.iter_mut() {
            *a = super::cylinder::wrap_two_pi(*a);
        }
        angles.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        if angles.is_empty() {
            angles.push(T::zero());
        }
        let m = angles.len();
        for k in 0..m {
            let t1 = angles[k];
            let mut t2 = if k + 1 < m { angles[k + 1] } else { angles[0] + T::TAU() };
            if m == 1 {
                t2 = t1 + T::TAU();
            }
            if t2 - t1 <= T::zero() {
                continue;
            }
            let mid = c + Point2::from_angle((t1 + t2) * half) * r;
            if covered(mid, i) || !inside_clip(mid) {
                continue;
            }
            twice_area = twice_area
                + r * c.x * (t2.sin() - t1.sin())
                - r * c.y * (t2.cos() - t1.cos())
                + r * r * (t2 - t1);
        }
    }
    if let Some(rc) = clip {
        let corners = rc.corners();
        let mut ts: Vec<T> = Vec::new();
        for e in 0..4 {
            let a = corners[e];
            let b = corners[(e + 1) % 4];
            let d = b - a;
            let len2 = d.norm_sq();
            ts.clear();
            ts.push(T::zero());
            ts.push(T::one());
            for &c in &uniq {
                // |a + t d - c| = r
                let f = a - c;
                let bq = f.dot(d);
                let cq = f.norm_sq() - r * r;
                let disc = bq * bq - len2 * cq;
                if disc > T::zero() {
                    let s = disc.sqrt();
                    for t in [(-bq - s) / len2, (-bq + s) / len2] {
                        if t > T::zero() && t < T::one() {
                            ts.push(t);
                        }
                    }
                }
            }
            ts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
            for w in ts.windows(2) {
                if w[1] - w[0] <= T::zero() {
                    continue;
                }
                let p = a + d * w[0];
                let q = a + d * w[1];
                let mid = p.lerp(q, half);
                if covered(mid, usize::MAX) {
                    twice_area = twice_area + p.cross(q);
                }
            }
        }
    }
    (twice_area * half).max(T::zero())
}

/// True when `p` lies in at least one disk.
pub fn in_disk_union<T: Scalar>(centers: &[Point2<T>], radius: T, p: Point2<T>) -> bool {
    centers.iter().any(|&c| c.dist(p) <= radius)
}
