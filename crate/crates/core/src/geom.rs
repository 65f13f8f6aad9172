//! Planar primitives: points, segments, circular arcs, polygons and
//! piecewise curves built from segments and arcs.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack for geometric predicates, in workspace units.
pub const EPS_GEO: f64 = 1e-9;
/// Maximum gap tolerated between consecutive pieces of a curve.
pub const EPS_JOIN: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn polar(r: f64, angle: f64) -> Self {
        Point::new(r * angle.cos(), r * angle.sin())
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self * (1.0 / n)
        }
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn dir(&self) -> Point {
        self.b - self.a
    }

    pub fn point_at(&self, t: f64) -> Point {
        self.a.lerp(self.b, t)
    }

    /// Parameter in `[0, 1]` of the point closest to `p`.
    pub fn closest_param(&self, p: Point) -> f64 {
        let d = self.dir();
        let l2 = d.norm2();
        if l2 == 0.0 {
            return 0.0;
        }
        ((p - self.a).dot(d) / l2).clamp(0.0, 1.0)
    }

    pub fn dist_point(&self, p: Point) -> f64 {
        self.point_at(self.closest_param(p)).dist(p)
    }

    pub fn intersects(&self, o: &Segment) -> bool {
        let d1 = orient(o.a, o.b, self.a);
        let d2 = orient(o.a, o.b, self.b);
        let d3 = orient(self.a, self.b, o.a);
        let d4 = orient(self.a, self.b, o.b);
        if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
            && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
        {
            return true;
        }
        (d1 == 0.0 && on_box(o.a, o.b, self.a))
            || (d2 == 0.0 && on_box(o.a, o.b, self.b))
            || (d3 == 0.0 && on_box(self.a, self.b, o.a))
            || (d4 == 0.0 && on_box(self.a, self.b, o.b))
    }

    pub fn dist_segment(&self, o: &Segment) -> f64 {
        if self.intersects(o) {
            return 0.0;
        }
        self.dist_point(o.a)
            .min(self.dist_point(o.b))
            .min(o.dist_point(self.a))
            .min(o.dist_point(self.b))
    }

    /// Parameters `t ∈ [0, 1]` where the segment meets the circle, sorted.
    /// A tangency yields a single parameter.
    pub fn circle_params(&self, c: &Circle) -> Vec<f64> {
        let d = self.dir();
        let f = self.a - c.center;
        let qa = d.norm2();
        if qa == 0.0 {
            return Vec::new();
        }
        let qb = 2.0 * f.dot(d);
        let qc = f.norm2() - c.radius * c.radius;
        let disc = qb * qb - 4.0 * qa * qc;
        let scale = 4.0 * qa * c.radius * c.radius;
        let mut out = Vec::new();
        if disc < -EPS_GEO * scale {
            return out;
        }
        if disc.abs() <= EPS_GEO * scale {
            let t = -qb / (2.0 * qa);
            if (-1e-12..=1.0 + 1e-12).contains(&t) {
                out.push(t.clamp(0.0, 1.0));
            }
            return out;
        }
        let s = disc.sqrt();
        // numerically stable pair of roots
        let q = -0.5 * (qb + qb.signum() * s);
        let (mut t0, mut t1) = if q != 0.0 { (q / qa, qc / q) } else { (0.0, 0.0) };
        if t0 > t1 {
            std::mem::swap(&mut t0, &mut t1);
        }
        for t in [t0, t1] {
            if (-1e-12..=1.0 + 1e-12).contains(&t) {
                out.push(t.clamp(0.0, 1.0));
            }
        }
        out
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_box(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Ccw,
    Cw,
}

/// Circular arc stored as a start angle and a signed sweep (positive = CCW).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: Point,
    pub radius: f64,
    pub start_angle: f64,
    pub sweep: f64,
}

impl Arc {
    /// Arc between two angles traversed with the given orientation. Equal
    /// angles denote the full circle.
    pub fn new(center: Point, radius: f64, start_angle: f64, end_angle: f64, o: Orientation) -> Self {
        let s = normalize_angle(start_angle);
        let e = normalize_angle(end_angle);
        let mut ext = match o {
            Orientation::Ccw => normalize_angle(e - s),
            Orientation::Cw => normalize_angle(s - e),
        };
        if ext <= 0.0 {
            ext = TAU;
        }
        let sweep = match o {
            Orientation::Ccw => ext,
            Orientation::Cw => -ext,
        };
        Arc { center, radius, start_angle: s, sweep }
    }

    pub fn from_sweep(center: Point, radius: f64, start_angle: f64, sweep: f64) -> Self {
        Arc { center, radius, start_angle: normalize_angle(start_angle), sweep: sweep.clamp(-TAU, TAU) }
    }

    pub fn full(c: Circle) -> Self {
        Arc::from_sweep(c.center, c.radius, 0.0, TAU)
    }

    pub fn circle(&self) -> Circle {
        Circle::new(self.center, self.radius)
    }

    pub fn orientation(&self) -> Orientation {
        if self.sweep >= 0.0 {
            Orientation::Ccw
        } else {
            Orientation::Cw
        }
    }

    pub fn end_angle(&self) -> f64 {
        normalize_angle(self.start_angle + self.sweep)
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep.abs()
    }

    pub fn point_at_angle(&self, a: f64) -> Point {
        self.center + Point::polar(self.radius, a)
    }

    /// Point at fraction `t ∈ [0, 1]` of the sweep.
    pub fn point_at(&self, t: f64) -> Point {
        self.point_at_angle(self.start_angle + self.sweep * t)
    }

    pub fn start(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point {
        self.point_at(1.0)
    }

    /// Fraction of the sweep at which angle `a` is reached, if on the arc.
    pub fn angle_param(&self, a: f64) -> Option<f64> {
        let ext = self.sweep.abs();
        let d = if self.sweep >= 0.0 {
            normalize_angle(a - self.start_angle)
        } else {
            normalize_angle(self.start_angle - a)
        };
        let tol = 1e-12 + EPS_GEO / self.radius.max(1.0);
        if ext >= TAU - tol {
            return Some(d / TAU);
        }
        if d <= ext + tol {
            Some((d / ext).min(1.0))
        } else if d >= TAU - tol {
            Some(0.0)
        } else {
            None
        }
    }

    pub fn contains_angle(&self, a: f64) -> bool {
        self.angle_param(a).is_some()
    }

    pub fn dist_point(&self, p: Point) -> f64 {
        let v = p - self.center;
        let r = v.norm();
        if r == 0.0 {
            return self.radius;
        }
        if self.contains_angle(v.angle()) {
            (r - self.radius).abs()
        } else {
            p.dist(self.start()).min(p.dist(self.end()))
        }
    }

    fn dist_segment(&self, s: &Segment) -> f64 {
        for t in s.circle_params(&self.circle()) {
            if self.contains_angle((s.point_at(t) - self.center).angle()) {
                return 0.0;
            }
        }
        let mut best = self
            .dist_point(s.a)
            .min(self.dist_point(s.b))
            .min(s.dist_point(self.start()))
            .min(s.dist_point(self.end()));
        let f = s.point_at(s.closest_param(self.center));
        let v = f - self.center;
        if v.norm() > 0.0 && self.contains_angle(v.angle()) {
            best = best.min((v.norm() - self.radius).abs());
        }
        best
    }

    fn dist_arc(&self, o: &Arc) -> f64 {
        let d = self.center.dist(o.center);
        if d < EPS_GEO {
            let overlap = o.contains_angle(self.start_angle)
                || o.contains_angle(self.end_angle())
                || self.contains_angle(o.start_angle)
                || self.contains_angle(o.end_angle());
            if overlap {
                return (self.radius - o.radius).abs();
            }
        } else if let Ok(pts) = circle_circle_intersect(&self.circle(), &o.circle()) {
            for p in pts {
                if self.contains_angle((p - self.center).angle())
                    && o.contains_angle((p - o.center).angle())
                {
                    return 0.0;
                }
            }
        }
        let mut best = self
            .dist_point(o.start())
            .min(self.dist_point(o.end()))
            .min(o.dist_point(self.start()))
            .min(o.dist_point(self.end()));
        if d >= EPS_GEO {
            let u = (o.center - self.center) * (1.0 / d);
            for s1 in [1.0, -1.0] {
                let q1 = self.center + u * (s1 * self.radius);
                if !self.contains_angle((q1 - self.center).angle()) {
                    continue;
                }
                for s2 in [1.0, -1.0] {
                    let q2 = o.center + u * (s2 * o.radius);
                    if o.contains_angle((q2 - o.center).angle()) {
                        best = best.min(q1.dist(q2));
                    }
                }
            }
        }
        best
    }

    /// Fractions of the sweep where the arc meets circle `c`, sorted.
    pub fn circle_params(&self, c: &Circle) -> Vec<f64> {
        let mut out: Vec<f64> = match circle_circle_intersect(&self.circle(), c) {
            Ok(pts) => pts
                .into_iter()
                .filter_map(|p| self.angle_param((p - self.center).angle()))
                .collect(),
            Err(_) => Vec::new(),
        };
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub const fn new(center: Point, radius: f64) -> Self {
        Circle { center, radius }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.dist(self.center) <= self.radius + EPS_GEO
    }

    pub fn contains_strictly(&self, p: Point) -> bool {
        p.dist(self.center) < self.radius - EPS_GEO
    }
}

/// Intersection points of two circle boundaries. Near-tangent pairs are
/// snapped to one point.
pub fn circle_circle_intersect(c1: &Circle, c2: &Circle) -> Result<Vec<Point>> {
    let dv = c2.center - c1.center;
    let d = dv.norm();
    if d < EPS_GEO {
        if (c1.radius - c2.radius).abs() < EPS_GEO {
            return Err(Error::Coincident);
        }
        return Ok(Vec::new());
    }
    if d > c1.radius + c2.radius + EPS_GEO || d < (c1.radius - c2.radius).abs() - EPS_GEO {
        return Ok(Vec::new());
    }
    let a = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
    let h2 = c1.radius * c1.radius - a * a;
    let u = dv * (1.0 / d);
    let base = c1.center + u * a;
    if h2 <= EPS_GEO {
        return Ok(vec![base]);
    }
    let h = h2.sqrt();
    Ok(vec![base + u.perp() * h, base - u.perp() * h])
}

/// Argument accepted by [`distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Point(Point),
    Segment(Segment),
    Arc(Arc),
}

/// Euclidean minimum distance between two primitives.
pub fn distance(g1: &Shape, g2: &Shape) -> f64 {
    use Shape::*;
    match (g1, g2) {
        (Point(p), Point(q)) => p.dist(*q),
        (Point(p), Segment(s)) | (Segment(s), Point(p)) => s.dist_point(*p),
        (Point(p), Arc(a)) | (Arc(a), Point(p)) => a.dist_point(*p),
        (Segment(s), Segment(t)) => s.dist_segment(t),
        (Segment(s), Arc(a)) | (Arc(a), Segment(s)) => a.dist_segment(s),
        (Arc(a), Arc(b)) => a.dist_arc(b),
    }
}

/// Closed polygonal ring; the closing edge is implicit.
pub type Ring = Vec<Point>;

pub fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| ring[i].cross(ring[(i + 1) % n])).sum::<f64>() * 0.5
}

pub fn ring_edges(ring: &[Point]) -> impl Iterator<Item = Segment> + '_ {
    let n = ring.len();
    (0..n).map(move |i| Segment::new(ring[i], ring[(i + 1) % n]))
}

/// Even-odd point-in-ring test.
pub fn point_in_ring(ring: &[Point], p: Point) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
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

fn ring_is_simple(ring: &[Point]) -> bool {
    let n = ring.len();
    let edges: Vec<Segment> = ring_edges(ring).collect();
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if edges[i].intersects(&edges[j]) {
                return false;
            }
        }
    }
    true
}

fn rings_cross(r1: &[Point], r2: &[Point]) -> bool {
    ring_edges(r1).any(|e| ring_edges(r2).any(|f| e.intersects(&f)))
}

/// Workspace polygon. The outer ring is stored CCW and holes CW, so the
/// workspace interior is always to the left of every directed edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonWithHoles {
    pub outer: Ring,
    #[serde(default)]
    pub holes: Vec<Ring>,
}

impl PolygonWithHoles {
    /// Builds a workspace, normalising ring orientation. Fails with
    /// `bad-workspace` on degenerate, self-intersecting or nested rings.
    pub fn new(outer: Ring, holes: Vec<Ring>) -> Result<Self> {
        let mut poly = PolygonWithHoles { outer, holes };
        poly.normalize();
        poly.check()?;
        Ok(poly)
    }

    /// Skips the simplicity checks. For generated geometry whose holes may
    /// touch each other or the outer ring along shared edges.
    pub fn new_unchecked(outer: Ring, holes: Vec<Ring>) -> Self {
        let mut poly = PolygonWithHoles { outer, holes };
        poly.normalize();
        poly
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        PolygonWithHoles::new_unchecked(
            vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)],
            Vec::new(),
        )
    }

    pub fn with_hole(mut self, hole: Ring) -> Self {
        self.holes.push(hole);
        self.normalize();
        self
    }

    fn normalize(&mut self) {
        if signed_area(&self.outer) < 0.0 {
            self.outer.reverse();
        }
        for h in &mut self.holes {
            if signed_area(h) > 0.0 {
                h.reverse();
            }
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadWorkspace(m));
        for (k, ring) in std::iter::once(&self.outer).chain(self.holes.iter()).enumerate() {
            if ring.len() < 3 {
                return bad(format!("ring {k} has fewer than 3 vertices"));
            }
            if ring.iter().any(|p| !p.is_finite()) {
                return bad(format!("ring {k} has non-finite coordinates"));
            }
            if signed_area(ring).abs() < EPS_GEO {
                return bad(format!("ring {k} has zero area"));
            }
            if !ring_is_simple(ring) {
                return bad(format!("ring {k} is self-intersecting"));
            }
        }
        for (k, h) in self.holes.iter().enumerate() {
            if rings_cross(&self.outer, h) || !h.iter().all(|p| point_in_ring(&self.outer, *p)) {
                return bad(format!("hole {k} is not strictly inside the outer ring"));
            }
            for (l, g) in self.holes.iter().enumerate().skip(k + 1) {
                if rings_cross(h, g) || point_in_ring(g, h[0]) || point_in_ring(h, g[0]) {
                    return bad(format!("holes {k} and {l} overlap"));
                }
            }
        }
        Ok(())
    }

    pub fn rings(&self) -> impl Iterator<Item = &Ring> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    /// All boundary edges, each with the workspace interior on its left.
    pub fn edges(&self) -> Vec<Segment> {
        self.rings().flat_map(|r| ring_edges(r)).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.rings().map(Vec::len).sum()
    }

    pub fn contains(&self, p: Point) -> bool {
        point_in_ring(&self.outer, p) && !self.holes.iter().any(|h| point_in_ring(h, p))
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.rings()
            .flat_map(|r| ring_edges(r))
            .map(|e| e.dist_point(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `p` to the obstacle space (zero when `p` is outside).
    pub fn clearance(&self, p: Point) -> f64 {
        if self.contains(p) {
            self.boundary_distance(p)
        } else {
            0.0
        }
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.outer {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Piece {
    Segment(Segment),
    Arc(Arc),
}

impl Piece {
    pub fn length(&self) -> f64 {
        match self {
            Piece::Segment(s) => s.length(),
            Piece::Arc(a) => a.length(),
        }
    }

    pub fn start(&self) -> Point {
        match self {
            Piece::Segment(s) => s.a,
            Piece::Arc(a) => a.start(),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Piece::Segment(s) => s.b,
            Piece::Arc(a) => a.end(),
        }
    }

    /// Point at fraction `t ∈ [0, 1]` of the piece.
    pub fn point_at(&self, t: f64) -> Point {
        match self {
            Piece::Segment(s) => s.point_at(t),
            Piece::Arc(a) => a.point_at(t),
        }
    }

    /// Sub-piece between fractions `t0 <= t1`.
    pub fn slice(&self, t0: f64, t1: f64) -> Piece {
        match self {
            Piece::Segment(s) => Piece::Segment(Segment::new(s.point_at(t0), s.point_at(t1))),
            Piece::Arc(a) => Piece::Arc(Arc::from_sweep(
                a.center,
                a.radius,
                a.start_angle + a.sweep * t0,
                a.sweep * (t1 - t0),
            )),
        }
    }

    /// Fractions where the piece crosses or touches the circle, sorted.
    pub fn circle_params(&self, c: &Circle) -> Vec<f64> {
        match self {
            Piece::Segment(s) => s.circle_params(c),
            Piece::Arc(a) => a.circle_params(c),
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            Piece::Segment(s) => Shape::Segment(*s),
            Piece::Arc(a) => Shape::Arc(*a),
        }
    }
}

/// Chain of segments and arcs, parameterised by arc length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseCurve {
    origin: Point,
    pieces: Vec<Piece>,
    cumulative: Vec<f64>,
}

impl PiecewiseCurve {
    /// Degenerate curve sitting at one point.
    pub fn point(p: Point) -> Self {
        PiecewiseCurve { origin: p, pieces: Vec::new(), cumulative: vec![0.0] }
    }

    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let origin = pieces.first().map(Piece::start).ok_or(Error::BrokenCurve(0))?;
        let mut c = PiecewiseCurve::point(origin);
        for p in pieces {
            c.push(p)?;
        }
        Ok(c)
    }

    pub fn polyline(points: &[Point]) -> Self {
        let mut c = PiecewiseCurve::point(points[0]);
        for w in points.windows(2) {
            if w[0] != w[1] {
                c.pieces.push(Piece::Segment(Segment::new(w[0], w[1])));
                let l = c.length() + w[0].dist(w[1]);
                c.cumulative.push(l);
            }
        }
        c
    }

    /// Appends a piece; fails if it does not start where the curve ends.
    pub fn push(&mut self, p: Piece) -> Result<()> {
        if p.start().dist(self.end()) > EPS_JOIN {
            return Err(Error::BrokenCurve(self.pieces.len()));
        }
        if p.length() == 0.0 {
            return Ok(());
        }
        let l = self.length() + p.length();
        self.pieces.push(p);
        self.cumulative.push(l);
        Ok(())
    }

    pub fn extend(&mut self, other: &PiecewiseCurve) -> Result<()> {
        if other.start().dist(self.end()) > EPS_JOIN {
            return Err(Error::BrokenCurve(self.pieces.len()));
        }
        for p in &other.pieces {
            self.push(*p)?;
        }
        Ok(())
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Arc length at the start of each piece, followed by the total.
    pub fn cumulative_lengths(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn start(&self) -> Point {
        self.origin
    }

    pub fn end(&self) -> Point {
        self.pieces.last().map_or(self.origin, Piece::end)
    }

    pub fn is_degenerate(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Piece index and local fraction for arc length `s`.
    pub fn locate(&self, s: f64) -> Option<(usize, f64)> {
        if self.pieces.is_empty() {
            return None;
        }
        let s = s.clamp(0.0, self.length());
        let k = match self.cumulative.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(k) => k.min(self.pieces.len() - 1),
            Err(k) => k.saturating_sub(1).min(self.pieces.len() - 1),
        };
        let len = self.pieces[k].length();
        let t = if len > 0.0 { ((s - self.cumulative[k]) / len).clamp(0.0, 1.0) } else { 0.0 };
        Some((k, t))
    }

    pub fn point_at(&self, s: f64) -> Point {
        match self.locate(s) {
            None => self.origin,
            Some((k, t)) => self.pieces[k].point_at(t),
        }
    }

    /// Sub-curve between arc lengths `s0 <= s1`.
    pub fn slice(&self, s0: f64, s1: f64) -> PiecewiseCurve {
        let total = self.length();
        let s0 = s0.clamp(0.0, total);
        let s1 = s1.clamp(s0, total);
        let mut out = PiecewiseCurve::point(self.point_at(s0));
        if s1 <= s0 {
            return out;
        }
        for (k, p) in self.pieces.iter().enumerate() {
            let (a, b) = (self.cumulative[k], self.cumulative[k + 1]);
            if b <= s0 || a >= s1 {
                continue;
            }
            let len = b - a;
            let t0 = ((s0.max(a) - a) / len).clamp(0.0, 1.0);
            let t1 = ((s1.min(b) - a) / len).clamp(0.0, 1.0);
            if t1 > t0 {
                let piece = p.slice(t0, t1);
                let l = out.length() + piece.length();
                out.pieces.push(piece);
                out.cumulative.push(l);
            }
        }
        out
    }

    /// Arc-length positions where the curve meets the circle boundary.
    pub fn circle_crossings(&self, c: &Circle) -> Vec<f64> {
        let mut out = Vec::new();
        for (k, p) in self.pieces.iter().enumerate() {
            for t in p.circle_params(c) {
                out.push(self.cumulative[k] + t * p.length());
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        out
    }

    /// Minimum distance from the curve to a point.
    pub fn dist_point(&self, p: Point) -> f64 {
        if self.pieces.is_empty() {
            return self.origin.dist(p);
        }
        self.pieces
            .iter()
            .map(|pc| distance(&pc.shape(), &Shape::Point(p)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Arc-length samples with spacing at most `max_step`; segment corners
    /// and arc endpoints are always included.
    pub fn sample(&self, max_step: f64) -> Vec<(f64, Point)> {
        let mut out = vec![(0.0, self.origin)];
        for (k, p) in self.pieces.iter().enumerate() {
            let len = p.length();
            let n = match p {
                Piece::Segment(_) => 1,
                Piece::Arc(_) => ((len / max_step).ceil() as usize).max(1),
            };
            for i in 1..=n {
                let t = i as f64 / n as f64;
                out.push((self.cumulative[k] + t * len, p.point_at(t)));
            }
        }
        out
    }
}

/// Length of a curve; segments exactly, arcs as radius times sweep.
pub fn arc_length(curve: &PiecewiseCurve) -> f64 {
    curve.length()
}

/// Length of the polyline through `pts`.
pub fn polyline_length(pts: &[Point]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Shorter arc of `circle` from `p` to `q`; a diameter chord resolves to the
/// counter-clockwise arc.
pub fn shorter_arc(circle: &Circle, p: Point, q: Point) -> Arc {
    let a0 = (p - circle.center).angle();
    let a1 = (q - circle.center).angle();
    let ccw = normalize_angle(a1 - a0);
    let sweep = if ccw <= PI + 1e-9 { ccw } else { ccw - TAU };
    Arc::from_sweep(circle.center, circle.radius, a0, sweep)
}
