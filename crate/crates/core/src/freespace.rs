//! Free space of a unit disc among polygonal obstacles and obstacle-only
//! shortest paths.
//!
//! The boundary of the free region consists of the workspace edges offset
//! by 1 and unit-radius arcs around reflex workspace vertices. Each arc is
//! replaced by a circumscribed chain whose chords are all tangent to the
//! unit circle, so every chain point and chain chord keeps clearance 1.
//! Shortest paths run along a reduced visibility graph over the free chain
//! points.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Point, PiecewiseCurve, PolygonWithHoles, Segment, EPS_GEO};
use crate::instance::{is_free, CORE_RADIUS};

/// Default bound on how far a chain strays outside the true offset arc.
pub const DEFAULT_INFLATE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy)]
struct Node {
    p: Point,
    /// Boundary neighbours used for the tangency test.
    prev: Point,
    next: Point,
}

#[derive(Debug, Clone)]
struct EdgeIndex {
    edges: Vec<(Segment, Point, Point)>,
}

impl EdgeIndex {
    fn new(ws: &PolygonWithHoles) -> Self {
        let edges = ws
            .edges()
            .into_iter()
            .map(|e| {
                let lo = Point::new(e.a.x.min(e.b.x), e.a.y.min(e.b.y));
                let hi = Point::new(e.a.x.max(e.b.x), e.a.y.max(e.b.y));
                (e, lo, hi)
            })
            .collect();
        EdgeIndex { edges }
    }

    /// Whole segment keeps distance `r` from the workspace boundary.
    fn clear(&self, s: &Segment, r: f64) -> bool {
        let lo = Point::new(s.a.x.min(s.b.x) - r, s.a.y.min(s.b.y) - r);
        let hi = Point::new(s.a.x.max(s.b.x) + r, s.a.y.max(s.b.y) + r);
        self.edges.iter().all(|(e, elo, ehi)| {
            ehi.x < lo.x || elo.x > hi.x || ehi.y < lo.y || elo.y > hi.y || e.dist_segment(s) >= r - EPS_GEO
        })
    }
}

/// A disc the robot centre must stay out of, used to steer among
/// equal-length alternatives.
#[derive(Debug, Clone, Copy)]
pub struct Blocked {
    pub center: Point,
    pub radius: f64,
}

#[derive(Debug, Clone)]
pub struct FreeSpace {
    ws: PolygonWithHoles,
    index: EdgeIndex,
    inflate_tol: f64,
    nodes: Vec<Node>,
    adj: Vec<Vec<(usize, f64)>>,
    component: Vec<usize>,
    chains: Vec<Vec<Point>>,
}

fn side(o: Point, dir: Point, x: Point) -> i8 {
    let v = x - o;
    let c = dir.cross(v);
    let scale = dir.norm() * v.norm();
    if c > 1e-9 * scale {
        1
    } else if c < -1e-9 * scale {
        -1
    } else {
        0
    }
}

/// The line through `n` towards `w` does not separate the boundary
/// neighbours of `n`.
fn tangent(n: &Node, w: Point) -> bool {
    let d = w - n.p;
    side(n.p, d, n.prev) * side(n.p, d, n.next) >= 0
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

impl FreeSpace {
    pub fn build(ws: &PolygonWithHoles) -> Self {
        FreeSpace::with_tolerance(ws, DEFAULT_INFLATE_TOL)
    }

    pub fn with_tolerance(ws: &PolygonWithHoles, inflate_tol: f64) -> Self {
        let tol = inflate_tol.clamp(1e-9, 0.5);
        let max_step = 2.0 * (1.0 / (1.0 + tol)).acos();
        let mut nodes = Vec::new();
        let mut chains = Vec::new();
        for ring in ws.rings() {
            let m = ring.len();
            for k in 0..m {
                let (u, v, w) = (ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]);
                let (d1, d2) = ((v - u).normalized(), (w - v).normalized());
                let turn = d1.cross(d2);
                if turn >= -1e-12 {
                    continue;
                }
                let span = turn.abs().atan2(d1.dot(d2));
                let count = ((span / max_step).ceil() as usize).max(1);
                let step = span / count as f64;
                let reach = CORE_RADIUS / (step / 2.0).cos();
                let a0 = d1.perp().angle();
                let mut chain = vec![v + d1.perp()];
                chain.extend((1..=count).map(|j| v + Point::polar(reach, a0 - (j as f64 - 0.5) * step)));
                chain.push(v + d2.perp());
                let last = chain.len() - 1;
                for (j, &p) in chain.iter().enumerate() {
                    if !is_free(ws, p) {
                        continue;
                    }
                    let prev = if j == 0 { p - d1 } else { chain[j - 1] };
                    let next = if j == last { p + d2 } else { chain[j + 1] };
                    nodes.push(Node { p, prev, next });
                }
                chains.push(chain);
            }
        }
        let index = EdgeIndex::new(ws);
        let adj: Vec<Vec<(usize, f64)>> = (0..nodes.len())
            .into_par_iter()
            .map(|u| {
                let nu = &nodes[u];
                (0..nodes.len())
                    .filter(|&w| w != u)
                    .filter(|&w| tangent(nu, nodes[w].p) && tangent(&nodes[w], nu.p))
                    .filter(|&w| index.clear(&Segment::new(nu.p, nodes[w].p), CORE_RADIUS))
                    .map(|w| (w, nu.p.dist(nodes[w].p)))
                    .collect()
            })
            .collect();
        let mut uf: Vec<usize> = (0..nodes.len()).collect();
        for (u, list) in adj.iter().enumerate() {
            for &(w, _) in list {
                let (a, b) = (find(&mut uf, u), find(&mut uf, w));
                if a != b {
                    uf[a.max(b)] = a.min(b);
                }
            }
        }
        let component = (0..nodes.len()).map(|u| find(&mut uf, u)).collect();
        FreeSpace { ws: ws.clone(), index, inflate_tol: tol, nodes, adj, component, chains }
    }

    pub fn workspace(&self) -> &PolygonWithHoles {
        &self.ws
    }

    pub fn inflate_tol(&self) -> f64 {
        self.inflate_tol
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Polygonized offset arcs around reflex workspace vertices, including
    /// points cut away by other obstacles.
    pub fn offset_chains(&self) -> &[Vec<Point>] {
        &self.chains
    }

    pub fn is_free(&self, p: Point) -> bool {
        is_free(&self.ws, p)
    }

    /// Segment keeps clearance 1 from the obstacles along its whole length.
    pub fn segment_is_free(&self, s: &Segment) -> bool {
        self.is_free(s.a) && self.index.clear(s, CORE_RADIUS)
    }

    /// No free point found among graph nodes and a 0.25-pitch sample grid.
    pub fn is_empty(&self) -> bool {
        if !self.nodes.is_empty() {
            return false;
        }
        let (lo, hi) = self.ws.bbox();
        let pitch = 0.25;
        let nx = ((hi.x - lo.x) / pitch).ceil() as usize;
        let ny = ((hi.y - lo.y) / pitch).ceil() as usize;
        !(0..=nx).any(|i| (0..=ny).any(|j| self.is_free(lo + Point::new(i as f64 * pitch, j as f64 * pitch))))
    }

    /// Number of node-carrying components. Convex pockets without nodes are
    /// not counted.
    pub fn component_count(&self) -> usize {
        let mut c: Vec<usize> = self.component.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    /// Graph components of the nodes visible from `p`, sorted. Empty when
    /// `p` is not free or sees no node. Isolated nodes in narrow dead ends
    /// form their own components, so one point can see several.
    pub fn components_visible(&self, p: Point) -> Vec<usize> {
        if !self.is_free(p) {
            return Vec::new();
        }
        let mut seen: Vec<usize> = (0..self.nodes.len())
            .filter(|&u| self.index.clear(&Segment::new(p, self.nodes[u].p), CORE_RADIUS))
            .map(|u| self.component[u])
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    }

    pub fn connected(&self, a: Point, b: Point) -> bool {
        if self.segment_is_free(&Segment::new(a, b)) {
            return true;
        }
        let (ca, cb) = (self.components_visible(a), self.components_visible(b));
        ca.iter().any(|c| cb.binary_search(c).is_ok())
    }

    pub fn shortest_path(&self, a: Point, b: Point) -> Result<PiecewiseCurve> {
        self.search(a, b, &[], f64::INFINITY).and_then(|o| o.ok_or(Error::Unreachable))
    }

    /// Shortest path whose centre keeps out of every blocked disc, or `None`
    /// if none exists within length `bound`.
    pub fn shortest_path_avoiding(
        &self,
        a: Point,
        b: Point,
        blocked: &[Blocked],
        bound: f64,
    ) -> Result<Option<PiecewiseCurve>> {
        self.search(a, b, blocked, bound)
    }

    fn search(&self, a: Point, b: Point, blocked: &[Blocked], bound: f64) -> Result<Option<PiecewiseCurve>> {
        for q in [a, b] {
            if !self.is_free(q) {
                return Err(Error::NotFree(q));
            }
        }
        if a == b {
            return Ok(Some(PiecewiseCurve::point(a)));
        }
        let seg_ok = |s: &Segment| blocked.iter().all(|d| s.dist_point(d.center) >= d.radius - EPS_GEO);
        let node_ok = |p: Point| blocked.iter().all(|d| p.dist(d.center) >= d.radius - EPS_GEO);
        let direct = Segment::new(a, b);
        if self.index.clear(&direct, CORE_RADIUS) && seg_ok(&direct) {
            return Ok((a.dist(b) <= bound).then(|| PiecewiseCurve::polyline(&[a, b])));
        }
        let n = self.nodes.len();
        let reach = |q: Point| -> Vec<(usize, f64)> {
            (0..n)
                .filter(|&u| node_ok(self.nodes[u].p) && tangent(&self.nodes[u], q))
                .filter(|&u| {
                    let s = Segment::new(q, self.nodes[u].p);
                    seg_ok(&s) && self.index.clear(&s, CORE_RADIUS)
                })
                .map(|u| (u, q.dist(self.nodes[u].p)))
                .collect()
        };
        let from_a = reach(a);
        let into_b = reach(b);
        // node indices: 0..n graph, n = a, n + 1 = b
        let (sa, sb) = (n, n + 1);
        let mut to_b = vec![f64::NAN; n];
        for &(u, d) in &into_b {
            to_b[u] = d;
        }
        let mut dist = vec![f64::INFINITY; n + 2];
        let mut prev = vec![usize::MAX; n + 2];
        let mut heap = BinaryHeap::new();
        dist[sa] = 0.0;
        heap.push(Entry(a.dist(b), sa));
        let pos = |u: usize| if u == sa { a } else if u == sb { b } else { self.nodes[u].p };
        while let Some(Entry(f, u)) = heap.pop() {
            if u == sb {
                break;
            }
            let g = dist[u];
            if f > g + pos(u).dist(b) + 1e-12 || g > bound {
                continue;
            }
            let mut relax = |w: usize, d: f64, heap: &mut BinaryHeap<Entry>| {
                let nd = g + d;
                if nd < dist[w] {
                    dist[w] = nd;
                    prev[w] = u;
                    heap.push(Entry(nd + pos(w).dist(b), w));
                }
            };
            if u == sa {
                for &(w, d) in &from_a {
                    relax(w, d, &mut heap);
                }
                continue;
            }
            if !to_b[u].is_nan() {
                relax(sb, to_b[u], &mut heap);
            }
            for &(w, d) in &self.adj[u] {
                if blocked.is_empty() || (node_ok(self.nodes[w].p) && seg_ok(&Segment::new(self.nodes[u].p, self.nodes[w].p))) {
                    relax(w, d, &mut heap);
                }
            }
        }
        if !dist[sb].is_finite() {
            return if blocked.is_empty() { Err(Error::Unreachable) } else { Ok(None) };
        }
        if dist[sb] > bound {
            return Ok(None);
        }
        let mut pts = vec![b];
        let mut u = sb;
        while u != sa {
            u = prev[u];
            pts.push(pos(u));
        }
        pts.reverse();
        Ok(Some(PiecewiseCurve::polyline(&pts)))
    }
}
