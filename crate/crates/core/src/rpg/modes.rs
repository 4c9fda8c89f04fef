use std::collections::{HashMap, VecDeque};
use std::f64::consts::TAU;

use rand::Rng;

use crate::biped::{foot_valid, is_reachable, torso_clear, BipedSpec, FootPose, Mode, Side};
use crate::explorespace::Route;
use crate::geom2d::{disk_union_area, Point2, Rect};
use crate::world::{Environment, Stance};

/// F_σ: the union of equal disks around the projected route, optionally
/// clipped to a rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRegion {
    pub centers: Vec<Point2<f64>>,
    pub radius: f64,
    pub clip: Option<Rect<f64>>,
    pub total_area: f64,
}

impl SampleRegion {
    pub fn new(centers: Vec<Point2<f64>>, radius: f64, clip: Option<Rect<f64>>) -> Self {
        assert!(radius > 0.0, "sampling radius must be positive");
        assert!(!centers.is_empty(), "sampling region needs at least one disk");
        let total_area = disk_union_area(&centers, radius, clip);
        SampleRegion {
            centers,
            radius,
            clip,
            total_area,
        }
    }

    /// Disks every `radius / 4` along the projected route, clipped to `clip`.
    pub fn around_route(route: &Route, radius: f64, clip: Option<Rect<f64>>) -> Self {
        Self::new(route.densified_xy(0.25 * radius), radius, clip)
    }

    pub fn contains(&self, p: Point2<f64>) -> bool {
        self.clip.is_none_or(|c| c.contains(p)) && self.coverage(p) > 0
    }

    fn coverage(&self, p: Point2<f64>) -> usize {
        let r2 = self.radius * self.radius;
        self.centers.iter().filter(|c| (p - **c).norm_sq() <= r2).count()
    }

    /// Uniform point of the region: a uniform disk, a uniform point in it,
    /// kept with probability one over the number of disks covering it.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2<f64> {
        loop {
            let c = self.centers[rng.gen_range(0..self.centers.len())];
            let r = self.radius * rng.gen::<f64>().sqrt();
            let t = rng.gen_range(0.0..TAU);
            let p = c + Point2::new(r * t.cos(), r * t.sin());
            if let Some(clip) = self.clip {
                if !clip.contains(p) {
                    continue;
                }
            }
            let k = self.coverage(p).max(1);
            if k == 1 || rng.gen_range(0..k) == 0 {
                return p;
            }
        }
    }

    /// Uniform placement of the region with a uniform yaw in `[0, 2π)`.
    pub fn sample_placement<R: Rng + ?Sized>(&self, rng: &mut R) -> FootPose {
        let p = self.sample_point(rng);
        FootPose::new(p.x, p.y, rng.gen_range(0.0..TAU))
    }
}

/// Draw `n_sigma` placements per side over `region` (left then right in each
/// draw) and keep the ones that pass foot validity.
pub fn sample_modes<R: Rng + ?Sized>(
    env: &Environment,
    spec: &BipedSpec,
    region: &SampleRegion,
    n_sigma: usize,
    rng: &mut R,
) -> Vec<(Side, FootPose)> {
    let mut out = Vec::new();
    for _ in 0..n_sigma {
        for side in [Side::Left, Side::Right] {
            let p = region.sample_placement(rng);
            if foot_valid(env, spec, &p) {
                out.push((side, p));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn push(&mut self) {
        let n = self.parent.len() as u32;
        self.parent.push(n);
        self.size.push(1);
    }

    fn find(&mut self, mut a: u32) -> u32 {
        while self.parent[a as usize] != a {
            let gp = self.parent[self.parent[a as usize] as usize];
            self.parent[a as usize] = gp;
            a = gp;
        }
        a
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

/// Incremental mode graph. Single-support nodes are placements; a
/// double-support node joins a mutually reachable left/right pair whose
/// torso box clears the obstacles, and links to both of its feet.
#[derive(Debug, Clone)]
pub struct ModeGraph {
    placements: Vec<(Side, FootPose)>,
    pairs: Vec<(u32, u32)>,
    grid: HashMap<(Side, i64, i64), Vec<u32>>,
    cell: f64,
    uf: UnionFind,
    /// Placements refused because no torso height clears above them.
    pub torso_rejections: usize,
}

impl ModeGraph {
    pub fn new(spec: &BipedSpec) -> Self {
        ModeGraph {
            placements: Vec::new(),
            pairs: Vec::new(),
            grid: HashMap::new(),
            cell: crate::biped::max_step(spec),
            uf: UnionFind {
                parent: Vec::new(),
                size: Vec::new(),
            },
            torso_rejections: 0,
        }
    }

    /// Graph over `placements` plus the start and goal stance feet.
    pub fn build(env: &Environment, spec: &BipedSpec, placements: &[(Side, FootPose)], start: &Stance, goal: &Stance) -> Self {
        let mut g = ModeGraph::new(spec);
        g.add_stance(env, spec, start);
        g.add_stance(env, spec, goal);
        for &(side, p) in placements {
            g.add(env, spec, side, p);
        }
        g
    }

    pub fn placements(&self) -> &[(Side, FootPose)] {
        &self.placements
    }

    /// Double-support nodes as (left index, right index) into `placements`.
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn pair_mode(&self, k: usize) -> Mode {
        let (l, r) = self.pairs[k];
        Mode::DoubleSupport {
            left: self.placements[l as usize].1,
            right: self.placements[r as usize].1,
        }
    }

    fn key(&self, side: Side, p: &FootPose) -> (Side, i64, i64) {
        (side, (p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    pub fn add_stance(&mut self, env: &Environment, spec: &BipedSpec, s: &Stance) -> (Option<u32>, Option<u32>) {
        (self.add(env, spec, Side::Left, s.left), self.add(env, spec, Side::Right, s.right))
    }

    /// Insert a placement (skipped when invalid or already present) and
    /// connect it to every compatible placement of the other side.
    pub fn add(&mut self, env: &Environment, spec: &BipedSpec, side: Side, p: FootPose) -> Option<u32> {
        if let Some(i) = self.index_of(side, &p) {
            return Some(i);
        }
        if !foot_valid(env, spec, &p) {
            return None;
        }
        if !torso_clear(env, spec, p.xy()) {
            self.torso_rejections += 1;
            return None;
        }
        let idx = self.placements.len() as u32;
        self.placements.push((side, p));
        self.uf.push();
        let (_, cx, cy) = self.key(side, &p);
        let other = side.other();
        let mut partners = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = self.grid.get(&(other, cx + dx, cy + dy)) {
                    partners.extend(list.iter().copied());
                }
            }
        }
        partners.sort_unstable();
        for q in partners {
            let qp = self.placements[q as usize].1;
            let (li, ri, l, r) = match side {
                Side::Left => (idx, q, p, qp),
                Side::Right => (q, idx, qp, p),
            };
            if is_reachable(spec, &l, Side::Left, &r) && torso_clear(env, spec, l.xy().lerp(r.xy(), 0.5)) {
                self.pairs.push((li, ri));
                self.uf.union(li, ri);
            }
        }
        self.grid.entry((side, cx, cy)).or_default().push(idx);
        Some(idx)
    }

    fn index_of(&self, side: Side, p: &FootPose) -> Option<u32> {
        let k = self.key(side, p);
        self.grid.get(&k)?.iter().copied().find(|&i| self.placements[i as usize].1 == *p)
    }

    fn stance_pair(&self, s: &Stance) -> Option<usize> {
        let l = self.index_of(Side::Left, &s.left)?;
        let r = self.index_of(Side::Right, &s.right)?;
        self.pairs.iter().position(|&pr| pr == (l, r))
    }

    /// Do the two stances lie in one connected component?
    pub fn connected(&mut self, a: &Stance, b: &Stance) -> bool {
        let (Some(x), Some(y)) = (self.index_of(Side::Left, &a.left), self.index_of(Side::Left, &b.left)) else {
            return false;
        };
        if self.stance_pair(a).is_none() || self.stance_pair(b).is_none() {
            return false;
        }
        self.uf.find(x) == self.uf.find(y)
    }
}

/// Fewest-transition alternating mode sequence from `start` to `goal`
/// (double support, single support, double support, ...), by breadth-first
/// search. A stance equal to the goal yields a single mode.
pub fn search_modes(graph: &ModeGraph, start: &Stance, goal: &Stance) -> Option<Vec<Mode>> {
    let s = graph.stance_pair(start)?;
    let t = graph.stance_pair(goal)?;
    if s == t {
        return Some(vec![graph.pair_mode(s)]);
    }
    let np = graph.placements.len();
    let mut pairs_of: Vec<Vec<u32>> = vec![Vec::new(); np];
    for (k, &(l, r)) in graph.pairs.iter().enumerate() {
        pairs_of[l as usize].push(k as u32);
        pairs_of[r as usize].push(k as u32);
    }
    // Pair k is node k, placement i is node pairs + i.
    let np_pairs = graph.pairs.len();
    let mut prev = vec![u32::MAX; np_pairs + np];
    let mut seen = vec![false; np_pairs + np];
    let mut queue = VecDeque::new();
    seen[s] = true;
    queue.push_back(s as u32);
    while let Some(v) = queue.pop_front() {
        let v = v as usize;
        if v == t {
            break;
        }
        let next: Vec<u32> = if v < np_pairs {
            let (l, r) = graph.pairs[v];
            vec![np_pairs as u32 + l, np_pairs as u32 + r]
        } else {
            pairs_of[v - np_pairs].clone()
        };
        for u in next {
            if !seen[u as usize] {
                seen[u as usize] = true;
                prev[u as usize] = v as u32;
                queue.push_back(u);
            }
        }
    }
    if !seen[t] {
        return None;
    }
    let mut path = Vec::new();
    let mut v = t;
    loop {
        path.push(if v < np_pairs {
            graph.pair_mode(v)
        } else {
            let (side, pose) = graph.placements[v - np_pairs];
            Mode::SingleSupport { side, pose }
        });
        if v == s {
            break;
        }
        v = prev[v] as usize;
    }
    path.reverse();
    Some(path)
}
