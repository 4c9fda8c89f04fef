use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use rand::Rng;

use super::RpgError;
use crate::biped::{necessary_check, BipedSpec};
use crate::explorespace::{distance, sample_pose, segment_valid, ExplorePose, Route, DEFAULT_DELTA_CHECK, DEFAULT_W_ROT};
use crate::world::{Environment, Query};

/// Cap on raw draws per accepted sample before exploration gives up on
/// filling its quota (only reachable when C_N is almost empty).
const MAX_DRAWS_PER_SAMPLE: u64 = 10_000;

/// Possibility-exploration graph over the implicit complete graph of its
/// nodes. Node 0 is the start projection and node 1 the goal projection.
/// Edges are validated lazily, only when a shortest-path search needs them,
/// and the verdicts are kept across calls.
#[derive(Debug, Clone)]
pub struct ExplorationGraph {
    nodes: Vec<ExplorePose>,
    edges: HashMap<(u32, u32), bool>,
    raw_draws: u64,
    w_rot: f64,
    delta: f64,
}

#[derive(Clone, Copy)]
struct Entry {
    f: f64,
    g: f64,
    node: u32,
    parent: u32,
}

impl PartialEq for Entry {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Entry {
    // Min-heap on f, ties broken by lower node index, then lower parent.
    fn cmp(&self, o: &Self) -> Ordering {
        o.f.total_cmp(&self.f)
            .then_with(|| o.node.cmp(&self.node))
            .then_with(|| o.parent.cmp(&self.parent))
    }
}

impl ExplorationGraph {
    pub fn new(env: &Environment, spec: &BipedSpec, query: &Query) -> Result<Self, RpgError> {
        Self::with_metric(env, spec, query, DEFAULT_W_ROT, DEFAULT_DELTA_CHECK)
    }

    pub fn with_metric(env: &Environment, spec: &BipedSpec, query: &Query, w_rot: f64, delta: f64) -> Result<Self, RpgError> {
        let start = query.start_pose(spec);
        let goal = query.goal_pose(spec);
        if !necessary_check(env, spec, &start) {
            return Err(RpgError::Query("start projection fails the necessary condition".into()));
        }
        if !necessary_check(env, spec, &goal) {
            return Err(RpgError::Query("goal projection fails the necessary condition".into()));
        }
        Ok(ExplorationGraph {
            nodes: vec![start, goal],
            edges: HashMap::new(),
            raw_draws: 0,
            w_rot,
            delta,
        })
    }

    pub fn nodes(&self) -> &[ExplorePose] {
        &self.nodes
    }

    /// Accepted samples, excluding the start and goal projections.
    pub fn sample_count(&self) -> usize {
        self.nodes.len() - 2
    }

    /// Uniform draws made so far, rejected ones included.
    pub fn raw_draws(&self) -> u64 {
        self.raw_draws
    }

    /// Edges whose validity has been decided.
    pub fn checked_edges(&self) -> usize {
        self.edges.len()
    }

    /// Draw until `target` samples pass the necessary check.
    pub fn grow<R: Rng + ?Sized>(&mut self, env: &Environment, spec: &BipedSpec, target: usize, rng: &mut R) {
        let mut budget = MAX_DRAWS_PER_SAMPLE * target.saturating_sub(self.sample_count()) as u64;
        while self.sample_count() < target && budget > 0 {
            let p = sample_pose(&env.explore_bounds, rng);
            self.raw_draws += 1;
            budget -= 1;
            if necessary_check(env, spec, &p) {
                self.nodes.push(p);
            }
        }
    }

    fn edge_valid(&mut self, env: &Environment, spec: &BipedSpec, a: u32, b: u32) -> bool {
        let key = (a.min(b), a.max(b));
        if let Some(&v) = self.edges.get(&key) {
            return v;
        }
        let (pa, pb) = (self.nodes[key.0 as usize], self.nodes[key.1 as usize]);
        let v = segment_valid(&pa, &pb, |p| necessary_check(env, spec, p), self.delta, self.w_rot);
        self.edges.insert(key, v);
        v
    }

    fn cached(&self, a: u32, b: u32) -> Option<bool> {
        self.edges.get(&(a.min(b), a.max(b))).copied()
    }

    /// Shortest start-to-goal path through valid edges of the complete graph
    /// on the current nodes, or `None` when they are disconnected.
    pub fn shortest_route(&mut self, env: &Environment, spec: &BipedSpec) -> Option<Route> {
        let n = self.nodes.len();
        let goal = self.nodes[1];
        let h: Vec<f64> = self.nodes.iter().map(|p| distance(p, &goal, self.w_rot)).collect();
        let mut g = vec![f64::INFINITY; n];
        let mut best = vec![f64::INFINITY; n];
        let mut parent = vec![u32::MAX; n];
        let mut closed = vec![false; n];
        let mut closed_list: Vec<u32> = Vec::new();
        let mut heap = BinaryHeap::new();
        best[0] = 0.0;
        heap.push(Entry {
            f: h[0],
            g: 0.0,
            node: 0,
            parent: 0,
        });
        while let Some(e) = heap.pop() {
            let v = e.node as usize;
            if closed[v] || e.g > best[v] {
                continue;
            }
            if v != 0 && !self.edge_valid(env, spec, e.parent, e.node) {
                // Fall back to the best remaining closed parent.
                best[v] = f64::INFINITY;
                let mut cand = None;
                for &c in &closed_list {
                    if self.cached(c, e.node) == Some(false) {
                        continue;
                    }
                    let gc = g[c as usize] + distance(&self.nodes[c as usize], &self.nodes[v], self.w_rot);
                    if gc < best[v] {
                        best[v] = gc;
                        cand = Some(c);
                    }
                }
                if let Some(c) = cand {
                    heap.push(Entry {
                        f: best[v] + h[v],
                        g: best[v],
                        node: e.node,
                        parent: c,
                    });
                }
                continue;
            }
            closed[v] = true;
            closed_list.push(e.node);
            g[v] = e.g;
            parent[v] = e.parent;
            if v == 1 {
                break;
            }
            let pv = self.nodes[v];
            for u in 0..n {
                if closed[u] {
                    continue;
                }
                let gu = e.g + distance(&pv, &self.nodes[u], self.w_rot);
                if gu < best[u] && self.cached(e.node, u as u32) != Some(false) {
                    best[u] = gu;
                    heap.push(Entry {
                        f: gu + h[u],
                        g: gu,
                        node: u as u32,
                        parent: e.node,
                    });
                }
            }
        }
        if !closed[1] {
            return None;
        }
        let mut path = vec![self.nodes[1]];
        let mut v = 1usize;
        while v != 0 {
            v = parent[v] as usize;
            path.push(self.nodes[v]);
        }
        path.reverse();
        Some(Route::new(path, self.w_rot))
    }
}

/// Sample `n_p` poses of C_N, connect them, and return the start-to-goal
/// routes found (the shortest one, or none when disconnected).
pub fn explore<R: Rng + ?Sized>(
    env: &Environment,
    spec: &BipedSpec,
    query: &Query,
    n_p: usize,
    rng: &mut R,
) -> Result<Vec<Route>, RpgError> {
    let mut graph = ExplorationGraph::new(env, spec, query)?;
    graph.grow(env, spec, n_p, rng);
    Ok(graph.shortest_route(env, spec).into_iter().collect())
}
