//! Core-avoiding deformation, the retraction map of resting robots and
//! assembly of the weakly-monotone ensemble over `[0, n]`.
//!
//! The robot at rank `r` of the ordering is active during `[r, r + 1]` and
//! moves at constant speed along its deformed path. Every other robot rests
//! at its start (not yet moved) or final (already moved) position and is
//! retracted inside its core whenever the active robot comes within 2.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freespace::{Blocked, FreeSpace};
use crate::geom::{
    circle_circle_intersect, polyline_length, shorter_arc, Circle, Piece, PiecewiseCurve, Point, EPS_GEO,
};
use crate::instance::{Instance, RevolvingArea, AREA_RADIUS, CORE_RADIUS, INNER_RADIUS};

pub const DEFAULT_TRACE_TOL: f64 = 1e-3;
/// Clearance slack for sampled checks.
pub const EPS_CLEAR: f64 = 1e-6;
/// Relative slack under which two path lengths count as tied.
pub const TIE_TOL: f64 = 1e-9;

/// Replaces, for every core the curve enters, the stretch between its first
/// and last boundary crossing by the shorter boundary arc.
pub fn deform_around_cores(curve: &PiecewiseCurve, cores: &[Circle]) -> Result<PiecewiseCurve> {
    let mut cur = curve.clone();
    for c in cores {
        for q in [cur.start(), cur.end()] {
            if c.contains_strictly(q) {
                return Err(Error::InvalidRest(q));
            }
        }
        let xs = cur.circle_crossings(c);
        if xs.len() < 2 {
            continue;
        }
        let (s0, s1) = (xs[0], xs[xs.len() - 1]);
        let enters = xs.windows(2).any(|w| c.contains_strictly(cur.point_at(0.5 * (w[0] + w[1]))));
        if !enters {
            continue;
        }
        let arc = shorter_arc(c, cur.point_at(s0), cur.point_at(s1));
        let mut out = cur.slice(0.0, s0);
        out.push(Piece::Arc(arc))?;
        out.extend(&cur.slice(s1, cur.length()))?;
        cur = out;
    }
    Ok(cur)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RetractionKind {
    /// Active robot is at least 2 away; the rest position is kept.
    Rest,
    /// Point on the ray from the active robot through the rest position.
    Sector,
    /// Endpoint of the arc of `∂D⁺_p` inside the core.
    Intersection,
    /// Active robot on the core boundary; the opposite boundary point.
    Antipodal,
}

/// Nearest point to `z` in the core around `c` that keeps distance 2 from
/// the active robot at `p`.
pub fn retract(p: Point, z: Point, c: Point) -> Result<(Point, RetractionKind)> {
    let dc = p.dist(c);
    if dc < CORE_RADIUS - EPS_GEO {
        return Err(Error::UndefinedRetraction(p));
    }
    if p.dist(z) >= AREA_RADIUS {
        return Ok((z, RetractionKind::Rest));
    }
    if dc <= CORE_RADIUS + EPS_GEO {
        return Ok((c - (p - c) * (CORE_RADIUS / dc), RetractionKind::Antipodal));
    }
    let ray = p + (z - p).normalized() * AREA_RADIUS;
    if ray.dist(c) <= CORE_RADIUS {
        return Ok((ray, RetractionKind::Sector));
    }
    let pts = circle_circle_intersect(&Circle::new(c, CORE_RADIUS), &Circle::new(p, AREA_RADIUS))?;
    let q = pts
        .into_iter()
        .min_by(|a, b| a.dist(z).total_cmp(&b.dist(z)))
        .unwrap_or_else(|| c + (p - c) * (CORE_RADIUS / dc));
    Ok((q, RetractionKind::Intersection))
}

/// Signed sector indicator: non-positive exactly when the ray point lies in
/// the core.
fn sector_gap(p: Point, z: Point, c: Point) -> f64 {
    (p + (z - p).normalized() * AREA_RADIUS).dist(c) - CORE_RADIUS
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pathlet {
    /// Arc-length interval on the active curve.
    pub s0: f64,
    pub s1: f64,
    pub kind: RetractionKind,
    /// Active robot within distance 3/2 of the core centre.
    pub inside_w: bool,
    pub trace_length: f64,
}

impl Pathlet {
    pub fn active_length(&self) -> f64 {
        self.s1 - self.s0
    }
}

/// Motion of one resting robot while one active robot moves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trace {
    pub rest: Point,
    pub core_center: Point,
    /// `(s, position)` with `s` the arc length along the active curve.
    pub samples: Vec<(f64, Point)>,
    pub pathlets: Vec<Pathlet>,
    pub length: f64,
}

impl Trace {
    pub fn is_constant(&self) -> bool {
        self.pathlets.is_empty()
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        if b - a <= 1e-13 {
            break;
        }
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Samples `ρ(γ(s))` for the rest position `z` in the core around `c`.
///
/// Breakpoints are the crossings of `‖γ − z‖ = 2`, `‖γ − c‖ = 3/2` and
/// `‖γ − c‖ = 1`, the piece joints inside `disc(z, 2)` and the sector /
/// intersection switches. Each interval between breakpoints is sampled
/// from its own endpoints only, so the samples depend on the geometry near
/// `z` and not on where that stretch sits along the curve.
pub fn retraction_trace(curve: &PiecewiseCurve, z: Point, c: Point, tol: f64) -> Result<Trace> {
    let tol = tol.max(1e-7);
    let total = curve.length();
    let mut out = Trace { rest: z, core_center: c, samples: vec![(0.0, z)], pathlets: Vec::new(), length: 0.0 };
    if curve.is_degenerate() || curve.dist_point(z) >= AREA_RADIUS {
        out.samples.push((total, z));
        return Ok(out);
    }
    let mut ev = vec![0.0, total];
    ev.extend(curve.circle_crossings(&Circle::new(z, AREA_RADIUS)));
    ev.extend(curve.circle_crossings(&Circle::new(c, INNER_RADIUS)));
    ev.extend(curve.circle_crossings(&Circle::new(c, CORE_RADIUS)));
    for &s in &curve.cumulative_lengths()[1..] {
        if curve.point_at(s).dist(z) < AREA_RADIUS {
            ev.push(s);
        }
    }
    ev.sort_by(f64::total_cmp);
    ev.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let on_core = |p: Point| (p.dist(c) - CORE_RADIUS).abs() <= EPS_GEO;
    let mut cuts = Vec::new();
    for w in ev.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = curve.point_at(0.5 * (a + b));
        cuts.push(a);
        if mid.dist(z) >= AREA_RADIUS || on_core(mid) {
            continue;
        }
        let h = |s: f64| sector_gap(curve.point_at(s), z, c);
        let m = (((b - a) / tol).ceil() as usize).max(8);
        let mut prev = (a, h(a));
        for k in 1..=m {
            let s = a + (b - a) * k as f64 / m as f64;
            let cur = (s, h(s));
            if (prev.1 > 0.0) != (cur.1 > 0.0) {
                let root = bisect(h, prev.0, cur.0);
                if root - a > 1e-12 && b - root > 1e-12 {
                    cuts.push(root);
                }
            }
            prev = cur;
        }
    }
    cuts.push(total);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let at = |s: f64| retract(curve.point_at(s), z, c).map(|r| r.0);
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid_s = 0.5 * (a + b);
        let mid = curve.point_at(mid_s);
        let (_, kind) = retract(mid, z, c)?;
        if kind == RetractionKind::Rest {
            out.samples.push((b, z));
            continue;
        }
        let m = (((b - a) / tol).ceil() as usize).max(1);
        let mut pts = vec![(a, at(a)?)];
        for k in 1..=m {
            let s = if k == m { b } else { a + (b - a) * k as f64 / m as f64 };
            let q = at(s)?;
            refine(&at, *pts.last().unwrap(), (s, q), tol, 0, &mut pts)?;
            pts.push((s, q));
        }
        let len = polyline_length(&pts.iter().map(|x| x.1).collect::<Vec<_>>());
        out.pathlets.push(Pathlet { s0: a, s1: b, kind, inside_w: mid.dist(c) < INNER_RADIUS, trace_length: len });
        out.length += len;
        out.samples.extend(pts.into_iter().skip(1));
    }
    Ok(out)
}

fn refine(
    at: &impl Fn(f64) -> Result<Point>,
    lo: (f64, Point),
    hi: (f64, Point),
    tol: f64,
    depth: u32,
    pts: &mut Vec<(f64, Point)>,
) -> Result<()> {
    if depth >= 24 || lo.1.dist(hi.1) <= tol || hi.0 - lo.0 <= 1e-12 {
        return Ok(());
    }
    let s = 0.5 * (lo.0 + hi.0);
    let mid = (s, at(s)?);
    refine(at, lo, mid, tol, depth + 1, pts)?;
    pts.push(mid);
    refine(at, mid, hi, tol, depth + 1, pts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanOptions {
    /// Sample spacing for traces and arcs, in workspace units.
    pub trace_tol: f64,
    /// Among shortest paths of equal length, prefer one that stays at least
    /// 2 away from every resting robot.
    pub prefer_clear: bool,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions { trace_tol: DEFAULT_TRACE_TOL, prefer_clear: true }
    }
}

/// Time-stamped polyline covering `[t0, t1]`; `times` is nondecreasing and
/// runs from `t0` to `t1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimedPiece {
    pub t0: f64,
    pub t1: f64,
    pub points: Vec<Point>,
    #[serde(default)]
    pub times: Vec<f64>,
}

impl TimedPiece {
    fn constant(t0: f64, t1: f64, p: Point) -> Self {
        TimedPiece { t0, t1, points: vec![p, p], times: vec![t0, t1] }
    }

    pub fn position(&self, t: f64) -> Point {
        let k = self.times.partition_point(|&x| x <= t);
        if k == 0 {
            return self.points[0];
        }
        if k >= self.times.len() {
            return *self.points.last().unwrap();
        }
        let (ta, tb) = (self.times[k - 1], self.times[k]);
        let u = if tb > ta { (t - ta) / (tb - ta) } else { 1.0 };
        self.points[k - 1].lerp(self.points[k], u)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimedPath {
    pub id: usize,
    pub pieces: Vec<TimedPiece>,
}

impl TimedPath {
    pub fn position(&self, t: f64) -> Point {
        let k = self.pieces.partition_point(|p| p.t1 < t).min(self.pieces.len() - 1);
        self.pieces[k].position(t)
    }

    pub fn start(&self) -> Point {
        self.pieces[0].points[0]
    }

    pub fn end(&self) -> Point {
        *self.pieces.last().unwrap().points.last().unwrap()
    }

    pub fn polyline_length(&self) -> f64 {
        self.pieces.iter().map(|p| polyline_length(&p.points)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Costs {
    pub per_robot: Vec<f64>,
    pub total: f64,
}

/// Retraction of `rest` while `active` moves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceRecord {
    pub active: usize,
    pub rest: usize,
    pub trace: Trace,
}

#[derive(Debug, Clone)]
pub struct PathEnsemble {
    /// Robot ids in execution order.
    pub ordering: Vec<usize>,
    /// Indexed by robot id.
    pub paths: Vec<TimedPath>,
    pub gamma: Vec<PiecewiseCurve>,
    pub gamma_bar: Vec<PiecewiseCurve>,
    /// Non-constant traces only.
    pub traces: Vec<TraceRecord>,
    pub costs: Costs,
}

/// Rest area of robot `k` while the robot at rank `r` moves.
pub fn rest_area(inst: &Instance, rank: &[usize], k: usize, r: usize) -> RevolvingArea {
    if rank[k] < r {
        inst.final_areas[k]
    } else {
        inst.start_areas[k]
    }
}

fn ranks(n: usize, sigma: &[usize]) -> Result<Vec<usize>> {
    let mut rank = vec![usize::MAX; n];
    if sigma.len() != n {
        return Err(Error::BadPlan(format!("ordering has {} entries for {n} robots", sigma.len())));
    }
    for (r, &i) in sigma.iter().enumerate() {
        if i >= n || rank[i] != usize::MAX {
            return Err(Error::BadPlan("ordering is not a permutation".into()));
        }
        rank[i] = r;
    }
    Ok(rank)
}

/// Obstacle-only shortest path for robot `i`; with `rests` given, an
/// equally short path clear of all of them is preferred.
pub fn robot_path(fs: &FreeSpace, inst: &Instance, i: usize, rests: Option<&[Point]>) -> Result<PiecewiseCurve> {
    let (s, f) = (inst.robots[i].start, inst.robots[i].final_pos);
    let gamma = match fs.shortest_path(s, f) {
        Err(Error::Unreachable) => return Err(Error::Infeasible),
        other => other?,
    };
    let Some(rests) = rests else { return Ok(gamma) };
    if rests.iter().all(|z| gamma.dist_point(*z) >= AREA_RADIUS - EPS_GEO) {
        return Ok(gamma);
    }
    let blocked: Vec<Blocked> = rests.iter().map(|&center| Blocked { center, radius: AREA_RADIUS }).collect();
    let bound = gamma.length() * (1.0 + TIE_TOL) + 1e-12;
    Ok(fs.shortest_path_avoiding(s, f, &blocked, bound)?.unwrap_or(gamma))
}

/// Runs all three stages for the execution order `sigma`.
pub fn assemble(inst: &Instance, fs: &FreeSpace, sigma: &[usize], opts: &PlanOptions) -> Result<PathEnsemble> {
    let n = inst.n();
    let rank = ranks(n, sigma)?;
    let gamma: Vec<PiecewiseCurve> = (0..n)
        .into_par_iter()
        .map(|i| {
            let rests: Vec<Point> =
                (0..n).filter(|&k| k != i).map(|k| rest_area(inst, &rank, k, rank[i]).anchor).collect();
            robot_path(fs, inst, i, opts.prefer_clear.then_some(rests.as_slice()))
        })
        .collect::<Result<_>>()?;
    assemble_with_paths(inst, gamma, sigma, opts)
}

/// Stages II and III on precomputed obstacle-only paths.
pub fn assemble_with_paths(
    inst: &Instance,
    gamma: Vec<PiecewiseCurve>,
    sigma: &[usize],
    opts: &PlanOptions,
) -> Result<PathEnsemble> {
    let n = inst.n();
    let rank = ranks(n, sigma)?;
    let tol = opts.trace_tol;
    let gamma_bar: Vec<PiecewiseCurve> = (0..n)
        .into_par_iter()
        .map(|i| {
            let cores: Vec<Circle> =
                (0..n).filter(|&k| k != i).map(|k| rest_area(inst, &rank, k, rank[i]).core()).collect();
            deform_around_cores(&gamma[i], &cores)
        })
        .collect::<Result<_>>()?;

    // one entry per window: (active robot, its grid, traces of moving rests)
    let windows: Vec<(Vec<f64>, Vec<TraceRecord>)> = (0..n)
        .into_par_iter()
        .map(|r| {
            let a = sigma[r];
            let curve = &gamma_bar[a];
            let mut records = Vec::new();
            for k in (0..n).filter(|&k| k != a) {
                let area = rest_area(inst, &rank, k, r);
                let trace = retraction_trace(curve, area.anchor, area.center, tol)?;
                if !trace.is_constant() {
                    records.push(TraceRecord { active: a, rest: k, trace });
                }
            }
            let mut grid: Vec<f64> = curve.sample(tol).into_iter().map(|x| x.0).collect();
            for rec in &records {
                grid.extend(rec.trace.samples.iter().map(|x| x.0));
            }
            grid.sort_by(f64::total_cmp);
            grid.dedup_by(|x, y| (*x - *y).abs() <= 1e-13);
            Ok((grid, records))
        })
        .collect::<Result<_>>()?;

    let mut pieces: Vec<Vec<TimedPiece>> = vec![Vec::new(); n];
    for (r, (grid, records)) in windows.iter().enumerate() {
        let a = sigma[r];
        let curve = &gamma_bar[a];
        let len = curve.length();
        let clock = |s: f64| if len > 0.0 { r as f64 + s / len } else { r as f64 };
        let mut times: Vec<f64> = grid.iter().map(|&s| clock(s)).collect();
        times[0] = r as f64;
        *times.last_mut().unwrap() = (r + 1) as f64;
        if len == 0.0 {
            pieces[a].push(TimedPiece::constant(r as f64, (r + 1) as f64, curve.start()));
        } else {
            let points = grid.iter().map(|&s| curve.point_at(s)).collect();
            pieces[a].push(TimedPiece { t0: r as f64, t1: (r + 1) as f64, points, times: times.clone() });
        }
        for k in (0..n).filter(|&k| k != a) {
            let area = rest_area(inst, &rank, k, r);
            match records.iter().find(|rec| rec.rest == k) {
                Some(_) => {
                    let points = grid
                        .iter()
                        .map(|&s| retract(curve.point_at(s), area.anchor, area.center).map(|x| x.0))
                        .collect::<Result<Vec<_>>>()?;
                    pieces[k].push(TimedPiece { t0: r as f64, t1: (r + 1) as f64, points, times: times.clone() });
                }
                None => push_constant(&mut pieces[k], r as f64, (r + 1) as f64, area.anchor),
            }
        }
    }

    let traces: Vec<TraceRecord> = windows.into_iter().flat_map(|w| w.1).collect();
    let mut per_robot: Vec<f64> = gamma_bar.iter().map(PiecewiseCurve::length).collect();
    for rec in &traces {
        per_robot[rec.rest] += rec.trace.length;
    }
    let total = per_robot.iter().sum();
    let paths = pieces.into_iter().enumerate().map(|(id, pieces)| TimedPath { id, pieces }).collect();
    Ok(PathEnsemble {
        ordering: sigma.to_vec(),
        paths,
        gamma,
        gamma_bar,
        traces,
        costs: Costs { per_robot, total },
    })
}

fn push_constant(pieces: &mut Vec<TimedPiece>, t0: f64, t1: f64, p: Point) {
    if let Some(last) = pieces.last_mut() {
        if last.points.len() == 2 && last.points[0] == p && last.points[1] == p && last.t1 == t0 {
            last.t1 = t1;
            last.times[1] = t1;
            return;
        }
    }
    pieces.push(TimedPiece::constant(t0, t1, p));
}

impl PathEnsemble {
    pub fn cost_gamma(&self) -> f64 {
        self.gamma.iter().map(PiecewiseCurve::length).sum()
    }

    pub fn cost_gamma_bar(&self) -> f64 {
        self.gamma_bar.iter().map(PiecewiseCurve::length).sum()
    }

    /// `cost(Π) − cost(Γ)`.
    pub fn marginal_cost(&self) -> f64 {
        self.costs.total - self.cost_gamma()
    }

    pub fn to_file(&self) -> PlanFile {
        PlanFile {
            ordering: self.ordering.clone(),
            robots: self.paths.clone(),
            costs: self.costs.clone(),
        }
    }
}

/// On-disk plan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanFile {
    pub ordering: Vec<usize>,
    pub robots: Vec<TimedPath>,
    pub costs: Costs,
}

impl PlanFile {
    pub fn from_json(s: &str) -> Result<Self> {
        let mut plan: PlanFile = serde_json::from_str(s)?;
        plan.robots.sort_by_key(|r| r.id);
        for (k, r) in plan.robots.iter_mut().enumerate() {
            if r.id != k {
                return Err(Error::BadPlan(format!("robot ids must be 0..n, found {}", r.id)));
            }
            if r.pieces.is_empty() {
                return Err(Error::BadPlan(format!("robot {k} has no pieces")));
            }
            for p in &mut r.pieces {
                if p.points.is_empty() {
                    return Err(Error::BadPlan(format!("robot {k} has an empty piece")));
                }
                if p.times.len() != p.points.len() {
                    // without timestamps, points are spread evenly over the piece
                    let m = p.points.len();
                    p.times = (0..m)
                        .map(|j| if m == 1 { p.t0 } else { p.t0 + (p.t1 - p.t0) * j as f64 / (m - 1) as f64 })
                        .collect();
                }
            }
        }
        Ok(plan)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plan serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PolygonWithHoles;
    use crate::instance::Robot;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn seg(a: Point, b: Point) -> PiecewiseCurve {
        PiecewiseCurve::polyline(&[a, b])
    }

    #[test]
    fn diameter_chord_takes_ccw_arc() {
        let g = deform_around_cores(&seg(p(-3.0, 0.0), p(3.0, 0.0)), &[Circle::new(p(0.0, 0.0), 1.0)]).unwrap();
        assert!((g.length() - (4.0 + PI)).abs() < 1e-12);
        assert!(g.dist_point(p(0.0, -1.0)) < 1e-12);
        assert!(g.dist_point(p(0.0, 1.0)) > 1.0);
    }

    #[test]
    fn missing_cores_leave_path_alone() {
        let c = seg(p(-3.0, 5.0), p(3.0, 5.0));
        let g = deform_around_cores(&c, &[Circle::new(p(0.0, 0.0), 1.0)]).unwrap();
        assert_eq!(g, c);
    }

    #[test]
    fn off_centre_chord_takes_upper_arc() {
        let g = deform_around_cores(&seg(p(-3.0, 0.8), p(3.0, 0.8)), &[Circle::new(p(0.0, 0.0), 1.0)]).unwrap();
        let arc = 2.0 * 0.6f64.asin();
        assert!((g.length() - (6.0 - 1.2 + arc)).abs() < 1e-12);
        assert!(arc <= 2.0 * 1.2);
        assert!(g.dist_point(p(0.0, 1.0)) < 1e-12);
    }

    #[test]
    fn endpoint_inside_core_is_invalid() {
        let r = deform_around_cores(&seg(p(0.2, 0.0), p(3.0, 0.0)), &[Circle::new(p(0.0, 0.0), 1.0)]);
        assert!(matches!(r, Err(Error::InvalidRest(_))));
    }

    #[test]
    fn retraction_examples() {
        let o = p(0.0, 0.0);
        assert_eq!(retract(p(5.0, 0.0), o, o).unwrap(), (o, RetractionKind::Rest));
        let (q, k) = retract(p(1.5, 0.0), o, o).unwrap();
        assert_eq!(k, RetractionKind::Sector);
        assert!(q.dist(p(-0.5, 0.0)) < 1e-12);
        let pa = p(1.1, 0.0);
        let (q, k) = retract(pa, p(0.3, 0.9), o).unwrap();
        assert_eq!(k, RetractionKind::Intersection);
        assert!((q.dist(pa) - 2.0).abs() < 1e-12 && (q.norm() - 1.0).abs() < 1e-12);
        assert!(q.x < -0.8 && q.y > 0.58, "{q}");
        assert!(matches!(retract(p(0.5, 0.0), o, o), Err(Error::UndefinedRetraction(_))));
        let (q, k) = retract(p(0.0, 1.0), p(0.3, 0.1), o).unwrap();
        assert_eq!(k, RetractionKind::Antipodal);
        assert!(q.dist(p(0.0, -1.0)) < 1e-12);
    }

    #[test]
    fn far_path_gives_constant_trace() {
        let t = retraction_trace(&seg(p(-5.0, 3.0), p(5.0, 3.0)), p(0.0, 0.0), p(0.0, 0.0), 1e-3).unwrap();
        assert!(t.is_constant() && t.length == 0.0);
    }

    #[test]
    fn boundary_arc_gives_antipodal_trace() {
        let arc = Piece::Arc(crate::geom::Arc::from_sweep(p(0.0, 0.0), 1.0, 0.3, 1.7));
        let curve = PiecewiseCurve::new(vec![arc]).unwrap();
        let t = retraction_trace(&curve, p(0.0, 0.0), p(0.0, 0.0), 1e-3).unwrap();
        assert!(t.pathlets.iter().all(|q| q.kind == RetractionKind::Antipodal));
        assert!((t.length - 1.7).abs() < 1e-6, "{}", t.length);
    }

    #[test]
    fn trace_endpoints_are_rest_position() {
        let z = p(0.2, -0.3);
        let t = retraction_trace(&seg(p(-4.0, 1.2), p(4.0, 1.4)), z, p(0.0, 0.0), 1e-3).unwrap();
        assert_eq!(t.samples.first().unwrap().1, z);
        assert!(t.samples.last().unwrap().1.dist(z) < 1e-9);
        for w in t.samples.windows(2) {
            assert!(w[0].1.dist(w[1].1) <= 1e-3 + 1e-12);
        }
    }

    #[test]
    fn single_robot_ensemble_is_its_path() {
        let ws = PolygonWithHoles::rect(-10.0, -10.0, 10.0, 10.0);
        let inst = Instance::new(ws.clone(), vec![Robot { id: 0, start: p(-5.0, 0.0), final_pos: p(5.0, 0.0) }], vec![(p(-5.0, 0.0), p(5.0, 0.0))]).unwrap();
        let fs = FreeSpace::build(&ws);
        let e = assemble(&inst, &fs, &[0], &PlanOptions::default()).unwrap();
        assert_eq!(e.costs.total, 10.0);
        assert_eq!(e.paths[0].start(), p(-5.0, 0.0));
        assert_eq!(e.paths[0].end(), p(5.0, 0.0));
        assert!(e.paths[0].position(0.5).dist(p(0.0, 0.0)) < 1e-12);
    }

    #[test]
    fn crossing_a_start_core_costs_extra() {
        let ws = PolygonWithHoles::rect(-20.0, -20.0, 20.0, 20.0);
        let robots = vec![
            Robot { id: 0, start: p(-6.0, 0.0), final_pos: p(6.0, 0.0) },
            Robot { id: 1, start: p(0.0, 0.0), final_pos: p(0.0, 10.0) },
        ];
        let centers = robots.iter().map(|r| (r.start, r.final_pos)).collect();
        let inst = Instance::new(ws.clone(), robots, centers).unwrap();
        assert!(inst.validate().valid);
        let fs = FreeSpace::build(&ws);
        let e = assemble(&inst, &fs, &[0, 1], &PlanOptions::default()).unwrap();
        assert!((e.gamma_bar[0].length() - (10.0 + PI)).abs() < 1e-9);
        assert!(e.costs.total > e.cost_gamma());
        assert!(e.traces.iter().any(|t| t.active == 0 && t.rest == 1));
        for t in 0..=2000 {
            let t = t as f64 * 1e-3;
            let d = e.paths[0].position(t).dist(e.paths[1].position(t));
            assert!(d >= 2.0 - EPS_CLEAR, "t = {t}, d = {d}");
        }
    }

    #[test]
    fn plan_file_round_trip() {
        let ws = PolygonWithHoles::rect(-10.0, -10.0, 10.0, 10.0);
        let inst = Instance::new(ws.clone(), vec![Robot { id: 0, start: p(-5.0, 0.0), final_pos: p(5.0, 0.0) }], vec![(p(-5.0, 0.0), p(5.0, 0.0))]).unwrap();
        let e = assemble(&inst, &FreeSpace::build(&ws), &[0], &PlanOptions::default()).unwrap();
        let f = PlanFile::from_json(&e.to_file().to_json()).unwrap();
        assert_eq!(f.robots, e.paths);
    }
}
