//! Independent audits of a planned ensemble: sampled clearance, Lipschitz
//! bounds on retraction traces, buffer packing and cost accounting.
//!
//! The clearance checker only looks at time-stamped polylines; it shares no
//! code with the retraction map.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Point, Segment, EPS_JOIN};
use crate::instance::{Instance, AREA_RADIUS, BUFFER_RADIUS, CORE_RADIUS};
use crate::plan::{PathEnsemble, RetractionKind, TimedPath, TraceRecord, EPS_CLEAR};

/// Pointwise speed bound for sector retraction outside the inner zone.
pub const SECTOR_LIPSCHITZ: f64 = 3.0;
/// Slack on [`SECTOR_LIPSCHITZ`] for polyline sampling.
pub const SECTOR_SLACK: f64 = 1.001;
/// Bound on the retraction length of one visit inside the inner zone.
pub const K_INSIDE: f64 = 6.0 * PI + 2.0;
/// Maximum number of buffers any point can lie in.
pub const PACKING_BOUND: usize = 16;

const MAX_REPORTED: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClearanceViolation {
    pub t: f64,
    pub robot: usize,
    /// `None` for an obstacle violation.
    pub other: Option<usize>,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClearanceReport {
    pub min_robot_robot: f64,
    pub min_robot_obstacle: f64,
    pub violations: Vec<ClearanceViolation>,
    pub samples_used: usize,
}

impl ClearanceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_continuity(path: &TimedPath) -> Result<()> {
    for w in path.pieces.windows(2) {
        let gap = w[0].points.last().unwrap().dist(w[1].points[0]);
        if gap > EPS_JOIN || (w[0].t1 - w[1].t0).abs() > 1e-9 {
            return Err(Error::BrokenPath { robot: path.id, t: w[0].t1, gap: gap.max((w[0].t1 - w[1].t0).abs()) });
        }
    }
    for p in &path.pieces {
        if p.times.len() != p.points.len() || p.times.windows(2).any(|t| t[1] < t[0]) {
            return Err(Error::BrokenPath { robot: path.id, t: p.t0, gap: f64::NAN });
        }
    }
    Ok(())
}

/// Polyline vertices of `path` with times in `[t0, t1]`, plus the positions
/// at both ends.
fn window_vertices(path: &TimedPath, t0: f64, t1: f64) -> Vec<(f64, Point)> {
    let mut out = vec![(t0, path.position(t0))];
    for piece in &path.pieces {
        if piece.t1 < t0 || piece.t0 > t1 {
            continue;
        }
        for (&t, &p) in piece.times.iter().zip(&piece.points) {
            if t > t0 && t < t1 {
                out.push((t, p));
            }
        }
    }
    out.push((t1, path.position(t1)));
    out
}

/// Samples all robots at common times and measures pairwise and obstacle
/// clearance. Inside every unit window the time step is `step` divided by
/// the fastest speed in that window, and every polyline vertex is also a
/// sample time.
pub fn check_ensemble(inst: &Instance, paths: &[TimedPath], step: f64) -> Result<ClearanceReport> {
    let n = paths.len();
    for p in paths {
        check_continuity(p)?;
    }
    let horizon = paths
        .iter()
        .filter_map(|p| p.pieces.last().map(|q| q.t1))
        .fold(n as f64, f64::max)
        .ceil() as usize;
    let ws = &inst.workspace;
    let edges = ws.edges();
    let mut rep = ClearanceReport {
        min_robot_robot: f64::INFINITY,
        min_robot_obstacle: f64::INFINITY,
        violations: Vec::new(),
        samples_used: 0,
    };
    // deepest sample per (window, robot, other)
    let mut worst: BTreeMap<(usize, usize, Option<usize>), ClearanceViolation> = BTreeMap::new();
    let mut w = 0usize;
    let mut push = |v: ClearanceViolation, w: usize| {
        let slot = worst.entry((w, v.robot, v.other)).or_insert_with(|| v.clone());
        if v.distance < slot.distance {
            *slot = v;
        }
    };

    while w < horizon.max(1) {
        let (t0, t1) = (w as f64, (w + 1) as f64);
        let verts: Vec<Vec<(f64, Point)>> = paths.iter().map(|p| window_vertices(p, t0, t1)).collect();
        let moving: Vec<usize> =
            (0..n).filter(|&i| verts[i].windows(2).any(|x| x[0].1 != x[1].1)).collect();

        // obstacle clearance, exact per polyline segment
        for (i, vs) in verts.iter().enumerate() {
            if !moving.contains(&i) && w > 0 {
                continue;
            }
            for x in vs.windows(2) {
                let s = Segment::new(x[0].1, x[1].1);
                let inside = ws.contains(s.a);
                let d = if inside {
                    edges.iter().map(|e| e.dist_segment(&s)).fold(f64::INFINITY, f64::min)
                } else {
                    0.0
                };
                rep.min_robot_obstacle = rep.min_robot_obstacle.min(d);
                if d < CORE_RADIUS - EPS_CLEAR {
                    push(ClearanceViolation { t: x[0].0, robot: i, other: None, distance: d }, w);
                }
            }
        }

        // robots that stay put in this window: one check per pair
        let still: Vec<usize> = (0..n).filter(|i| !moving.contains(i)).collect();
        for (a, &i) in still.iter().enumerate() {
            for &j in &still[a + 1..] {
                let d = verts[i][0].1.dist(verts[j][0].1);
                rep.min_robot_robot = rep.min_robot_robot.min(d);
                if d < 2.0 * CORE_RADIUS - EPS_CLEAR {
                    push(ClearanceViolation { t: t0, robot: i, other: Some(j), distance: d }, w);
                }
            }
        }
        if moving.is_empty() {
            rep.samples_used += 1;
            w += 1;
            continue;
        }

        let mut speed: f64 = 0.0;
        let mut times = vec![t0, t1];
        for &i in &moving {
            for x in verts[i].windows(2) {
                let dt = x[1].0 - x[0].0;
                let dd = x[0].1.dist(x[1].1);
                if dd > 0.0 {
                    speed = speed.max(if dt > 0.0 { dd / dt } else { f64::INFINITY });
                }
                times.push(x[0].0);
            }
        }
        if speed.is_finite() && speed > 0.0 {
            let m = ((t1 - t0) * speed / step).ceil() as usize;
            times.extend((1..m).map(|k| t0 + (t1 - t0) * k as f64 / m as f64));
        }
        times.sort_by(f64::total_cmp);
        times.dedup();
        rep.samples_used += times.len();

        // moving robots against everyone, with a bounding-box filter
        let reach = |i: usize| {
            let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
            let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
            for &(_, p) in &verts[i] {
                lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
                hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
            }
            (lo, hi)
        };
        let boxes: Vec<(Point, Point)> = (0..n).map(reach).collect();
        let near = |i: usize, j: usize| {
            let (a, b) = (boxes[i], boxes[j]);
            let g = 2.0 * CORE_RADIUS + 1.0;
            !(a.1.x + g < b.0.x || b.1.x + g < a.0.x || a.1.y + g < b.0.y || b.1.y + g < a.0.y)
        };
        let mut pairs = Vec::new();
        for (a, &i) in moving.iter().enumerate() {
            for j in 0..n {
                if j == i || (moving.contains(&j) && moving[..a].contains(&j)) {
                    continue;
                }
                if near(i, j) {
                    pairs.push((i, j));
                } else {
                    let d = box_gap(boxes[i], boxes[j]);
                    rep.min_robot_robot = rep.min_robot_robot.min(d);
                }
            }
        }
        let involved: Vec<usize> = {
            let mut v: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut cursor = vec![0usize; n];
        let mut pos = vec![Point::default(); n];
        for &t in &times {
            for &i in &involved {
                let vs = &verts[i];
                while cursor[i] + 1 < vs.len() - 1 && vs[cursor[i] + 1].0 <= t {
                    cursor[i] += 1;
                }
                let (a, b) = (vs[cursor[i]], vs[cursor[i] + 1]);
                let u = if b.0 > a.0 { ((t - a.0) / (b.0 - a.0)).clamp(0.0, 1.0) } else { 1.0 };
                pos[i] = a.1.lerp(b.1, u);
            }
            for &(i, j) in &pairs {
                let d = pos[i].dist(pos[j]);
                rep.min_robot_robot = rep.min_robot_robot.min(d);
                if d < 2.0 * CORE_RADIUS - EPS_CLEAR {
                    push(ClearanceViolation { t, robot: i, other: Some(j), distance: d }, w);
                }
            }
        }
        w += 1;
    }
    rep.violations = worst.into_values().take(MAX_REPORTED).collect();
    Ok(rep)
}

fn box_gap(a: (Point, Point), b: (Point, Point)) -> f64 {
    let dx = (b.0.x - a.1.x).max(a.0.x - b.1.x).max(0.0);
    let dy = (b.0.y - a.1.y).max(a.0.y - b.1.y).max(0.0);
    dx.hypot(dy)
}

/// Each robot stays in its start core before its window and in its final
/// core after it. Returns the offending robots.
pub fn check_weak_monotone(inst: &Instance, ordering: &[usize], paths: &[TimedPath]) -> Vec<usize> {
    let mut bad = Vec::new();
    for (r, &i) in ordering.iter().enumerate() {
        let (s, f) = (inst.start_areas[i].center, inst.final_areas[i].center);
        let ok = paths[i].pieces.iter().all(|piece| {
            piece.times.iter().zip(&piece.points).all(|(&t, &p)| {
                if t < r as f64 - 1e-12 {
                    p.dist(s) <= CORE_RADIUS + 1e-9
                } else if t > (r + 1) as f64 + 1e-12 {
                    p.dist(f) <= CORE_RADIUS + 1e-9
                } else {
                    true
                }
            })
        });
        if !ok {
            bad.push(i);
        }
    }
    bad
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathletAudit {
    pub active: usize,
    pub rest: usize,
    pub kind: RetractionKind,
    pub inside_w: bool,
    pub active_length: f64,
    pub trace_length: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisitAudit {
    pub active: usize,
    pub rest: usize,
    pub trace_length: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LipschitzAudit {
    pub pathlets: Vec<PathletAudit>,
    pub inside_visits: Vec<VisitAudit>,
    /// Sector pathlets outside the inner zone above the bound.
    pub sector_failures: usize,
    /// Inside visits above [`K_INSIDE`].
    pub inside_failures: usize,
    pub max_sector_ratio: f64,
    pub max_intersection_ratio: f64,
    pub max_inside_length: f64,
}

impl LipschitzAudit {
    pub fn ok(&self) -> bool {
        self.sector_failures == 0 && self.inside_failures == 0
    }
}

pub fn audit_lipschitz(records: &[TraceRecord]) -> Result<LipschitzAudit> {
    let mut out = LipschitzAudit::default();
    for rec in records {
        let mut visit: Option<f64> = None;
        let mut last_end = f64::NAN;
        let close = |visit: &mut Option<f64>, out: &mut LipschitzAudit| {
            if let Some(len) = visit.take() {
                out.max_inside_length = out.max_inside_length.max(len);
                if len > K_INSIDE {
                    out.inside_failures += 1;
                }
                out.inside_visits.push(VisitAudit { active: rec.active, rest: rec.rest, trace_length: len });
            }
        };
        for (k, p) in rec.trace.pathlets.iter().enumerate() {
            if p.kind == RetractionKind::Rest || !(p.s1 >= p.s0) {
                return Err(Error::MissingEvents(k));
            }
            let ratio = if p.active_length() > 0.0 {
                p.trace_length / p.active_length()
            } else if p.trace_length > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            out.pathlets.push(PathletAudit {
                active: rec.active,
                rest: rec.rest,
                kind: p.kind,
                inside_w: p.inside_w,
                active_length: p.active_length(),
                trace_length: p.trace_length,
                ratio,
            });
            if !p.inside_w {
                match p.kind {
                    RetractionKind::Sector => {
                        out.max_sector_ratio = out.max_sector_ratio.max(ratio);
                        if p.trace_length > SECTOR_LIPSCHITZ * SECTOR_SLACK * p.active_length() {
                            out.sector_failures += 1;
                        }
                    }
                    RetractionKind::Intersection => {
                        out.max_intersection_ratio = out.max_intersection_ratio.max(ratio);
                    }
                    _ => {}
                }
            }
            let contiguous = (p.s0 - last_end).abs() <= 1e-9;
            if p.inside_w && p.kind != RetractionKind::Antipodal {
                if !contiguous {
                    close(&mut visit, &mut out);
                }
                *visit.get_or_insert(0.0) += p.trace_length;
            } else {
                close(&mut visit, &mut out);
            }
            last_end = p.s1;
        }
        close(&mut visit, &mut out);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRetraction {
    pub rest: usize,
    pub active: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub cost_gamma: f64,
    pub cost_gamma_bar: f64,
    pub cost_pi: f64,
    pub per_pair: Vec<PairRetraction>,
    pub ratio_gamma_bar: f64,
    pub ratio_pi: f64,
    /// Robots whose deformed path exceeds twice the original.
    pub stage_two_failures: Vec<usize>,
}

pub fn cost_report(ens: &PathEnsemble) -> CostReport {
    let cost_gamma = ens.cost_gamma();
    let cost_gamma_bar = ens.cost_gamma_bar();
    let cost_pi = ens.costs.total;
    let ratio = |x: f64| if cost_gamma > 0.0 { x / cost_gamma } else { 1.0 };
    let stage_two_failures = (0..ens.gamma.len())
        .filter(|&i| ens.gamma_bar[i].length() > 2.0 * ens.gamma[i].length() + 1e-9)
        .collect();
    CostReport {
        cost_gamma,
        cost_gamma_bar,
        cost_pi,
        per_pair: ens
            .traces
            .iter()
            .map(|t| PairRetraction { rest: t.rest, active: t.active, length: t.trace.length })
            .collect(),
        ratio_gamma_bar: ratio(cost_gamma_bar),
        ratio_pi: ratio(cost_pi),
        stage_two_failures,
    }
}

/// Largest number of buffers containing one point.
pub fn buffer_depth(inst: &Instance, points: &[Point]) -> usize {
    let centers: Vec<Point> = inst.anchors().into_iter().map(|a| inst.area(a).center).collect();
    points
        .iter()
        .map(|p| centers.iter().filter(|c| p.dist(**c) <= BUFFER_RADIUS).count())
        .max()
        .unwrap_or(0)
}

/// Buffer depth along every active stretch, sampled at the stored vertices.
pub fn audit_packing(inst: &Instance, ens: &PathEnsemble) -> Result<usize> {
    let rep = inst.validate();
    if !rep.valid {
        return Err(Error::InvalidInstance(format!("{} violated conditions", rep.violations.len())));
    }
    let mut pts = Vec::new();
    for (r, &i) in ens.ordering.iter().enumerate() {
        for piece in &ens.paths[i].pieces {
            for (&t, &p) in piece.times.iter().zip(&piece.points) {
                if t >= r as f64 && t <= (r + 1) as f64 {
                    pts.push(p);
                }
            }
        }
    }
    Ok(buffer_depth(inst, &pts))
}

/// Robots sharing one revolving area at some sampled time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Congestion {
    pub area_center: Point,
    pub t: f64,
    pub robots: Vec<usize>,
}

/// Every `(area, t)` at which two or more robot centres lie inside one
/// revolving area, sampled at spacing `dt`.
pub fn congestion_witness(inst: &Instance, paths: &[TimedPath], dt: f64) -> Vec<Congestion> {
    let horizon = paths.iter().filter_map(|p| p.pieces.last().map(|q| q.t1)).fold(0.0, f64::max);
    let steps = (horizon / dt).ceil() as usize;
    let mut out: Vec<Congestion> = Vec::new();
    let areas: Vec<Point> = inst.anchors().into_iter().map(|a| inst.area(a).center).collect();
    for k in 0..=steps {
        let t = (k as f64 * dt).min(horizon);
        let pos: Vec<Point> = paths.iter().map(|p| p.position(t)).collect();
        for &c in &areas {
            let inside: Vec<usize> = (0..pos.len()).filter(|&i| pos[i].dist(c) < AREA_RADIUS - 1e-9).collect();
            if inside.len() >= 2 {
                let dup = out.last().is_some_and(|l| l.area_center == c && l.robots == inside);
                if !dup {
                    out.push(Congestion { area_center: c, t, robots: inside });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PolygonWithHoles;
    use crate::instance::Robot;
    use crate::plan::{TimedPiece, Trace, Pathlet};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn inst2(a: Point, b: Point) -> Instance {
        let ws = PolygonWithHoles::rect(-20.0, -20.0, 20.0, 20.0);
        let robots = vec![Robot { id: 0, start: a, final_pos: a }, Robot { id: 1, start: b, final_pos: b }];
        Instance::new(ws, robots, vec![(a, a), (b, b)]).unwrap()
    }

    fn still(id: usize, q: Point) -> TimedPath {
        TimedPath { id, pieces: vec![TimedPiece { t0: 0.0, t1: 2.0, points: vec![q, q], times: vec![0.0, 2.0] }] }
    }

    fn mover(id: usize, a: Point, b: Point, t0: f64, t1: f64) -> TimedPath {
        TimedPath { id, pieces: vec![TimedPiece { t0, t1, points: vec![a, b], times: vec![t0, t1] }] }
    }

    #[test]
    fn touching_robots_are_fine() {
        let inst = inst2(p(0.0, 0.0), p(2.0, 0.0));
        let r = check_ensemble(&inst, &[still(0, p(0.0, 0.0)), still(1, p(2.0, 0.0))], 1e-3).unwrap();
        assert_eq!(r.min_robot_robot, 2.0);
        assert!(r.ok());
    }

    #[test]
    fn crossing_robots_collide_mid_window() {
        let inst = inst2(p(-5.0, 0.0), p(0.0, -5.0));
        let a = mover(0, p(-5.0, 0.0), p(5.0, 0.0), 0.0, 1.0);
        let b = mover(1, p(0.0, -5.0), p(0.0, 5.0), 0.0, 1.0);
        let r = check_ensemble(&inst, &[a, b], 1e-3).unwrap();
        assert!(!r.ok());
        let worst = r.violations.iter().min_by(|x, y| x.distance.total_cmp(&y.distance)).unwrap();
        assert!((worst.t - 0.5).abs() < 1e-2, "{}", worst.t);
        assert!(r.min_robot_robot < 1e-2);
    }

    #[test]
    fn gaps_are_broken_paths() {
        let inst = inst2(p(-5.0, 0.0), p(5.0, 0.0));
        let mut a = mover(0, p(-5.0, 0.0), p(-4.0, 0.0), 0.0, 1.0);
        a.pieces.push(TimedPiece { t0: 1.0, t1: 2.0, points: vec![p(-3.0, 0.0), p(-3.0, 0.0)], times: vec![1.0, 2.0] });
        let r = check_ensemble(&inst, &[a, still(1, p(5.0, 0.0))], 1e-3);
        assert!(matches!(r, Err(Error::BrokenPath { robot: 0, .. })));
    }

    #[test]
    fn obstacle_violation_is_reported() {
        let inst = inst2(p(-5.0, 0.0), p(5.0, 10.0));
        let a = mover(0, p(-5.0, 0.0), p(-19.5, 0.0), 0.0, 1.0);
        let r = check_ensemble(&inst, &[a, still(1, p(5.0, 10.0))], 1e-3).unwrap();
        assert!((r.min_robot_obstacle - 0.5).abs() < 1e-12);
        assert!(r.violations.iter().any(|v| v.other.is_none()));
    }

    fn record(pathlets: Vec<Pathlet>) -> TraceRecord {
        let length = pathlets.iter().map(|p| p.trace_length).sum();
        TraceRecord {
            active: 0,
            rest: 1,
            trace: Trace { rest: p(0.0, 0.0), core_center: p(0.0, 0.0), samples: vec![], pathlets, length },
        }
    }

    #[test]
    fn constant_trace_audits_to_zero() {
        let a = audit_lipschitz(&[record(vec![])]).unwrap();
        assert!(a.ok() && a.max_sector_ratio == 0.0 && a.pathlets.is_empty());
    }

    #[test]
    fn sector_bound_is_enforced() {
        let good = Pathlet { s0: 0.0, s1: 1.0, kind: RetractionKind::Sector, inside_w: false, trace_length: 2.9 };
        let bad = Pathlet { s0: 1.0, s1: 2.0, kind: RetractionKind::Sector, inside_w: false, trace_length: 3.1 };
        let a = audit_lipschitz(&[record(vec![good, bad])]).unwrap();
        assert_eq!(a.sector_failures, 1);
    }

    #[test]
    fn inside_visits_are_summed() {
        let mk = |s0: f64, s1: f64, kind, len| Pathlet { s0, s1, kind, inside_w: true, trace_length: len };
        let a = audit_lipschitz(&[record(vec![
            mk(0.0, 1.0, RetractionKind::Sector, 11.0),
            mk(1.0, 2.0, RetractionKind::Intersection, 11.0),
            mk(2.0, 3.0, RetractionKind::Antipodal, 3.0),
            mk(3.0, 4.0, RetractionKind::Sector, 1.0),
        ])])
        .unwrap();
        assert_eq!(a.inside_visits.len(), 2);
        assert_eq!(a.inside_visits[0].trace_length, 22.0);
        assert_eq!(a.inside_failures, 1);
    }

    #[test]
    fn unlabeled_pathlet_is_rejected() {
        let p0 = Pathlet { s0: 0.0, s1: 1.0, kind: RetractionKind::Rest, inside_w: false, trace_length: 0.0 };
        assert!(matches!(audit_lipschitz(&[record(vec![p0])]), Err(Error::MissingEvents(0))));
    }

    #[test]
    fn grid_anchors_pack_at_most_sixteen() {
        // anchors on a pitch-3 grid, each area centred on its anchor
        let ws = PolygonWithHoles::rect(-5.0, -5.0, 35.0, 35.0);
        let mut robots = Vec::new();
        let mut centers = Vec::new();
        let pts: Vec<Point> = (0..10).flat_map(|i| (0..10).map(move |j| p(3.0 * i as f64, 3.0 * j as f64))).collect();
        for (id, k) in (0..pts.len()).step_by(2).enumerate() {
            robots.push(Robot { id, start: pts[k], final_pos: pts[k + 1] });
            centers.push((pts[k], pts[k + 1]));
        }
        let inst = Instance::new(ws, robots, centers).unwrap();
        assert!(inst.validate().valid);
        let probe: Vec<Point> = (0..300).flat_map(|i| (0..300).map(move |j| p(i as f64 * 0.1, j as f64 * 0.1))).collect();
        let d = buffer_depth(&inst, &probe);
        assert!(d <= PACKING_BOUND && d >= 4, "{d}");
    }

    #[test]
    fn packing_refuses_invalid_instances() {
        let inst = inst2(p(0.0, 0.0), p(1.0, 0.0));
        let ens = PathEnsemble {
            ordering: vec![0, 1],
            paths: vec![still(0, p(0.0, 0.0)), still(1, p(1.0, 0.0))],
            gamma: vec![],
            gamma_bar: vec![],
            traces: vec![],
            costs: crate::plan::Costs { per_robot: vec![0.0, 0.0], total: 0.0 },
        };
        assert!(audit_packing(&inst, &ens).is_err());
    }

    #[test]
    fn parked_pair_is_congested() {
        let inst = inst2(p(0.0, 0.0), p(10.0, 0.0));
        let w = congestion_witness(&inst, &[still(0, p(0.0, 0.0)), still(1, p(0.5, 0.0))], 0.5);
        assert!(!w.is_empty());
        assert_eq!(w[0].robots, vec![0, 1]);
        assert!(congestion_witness(&inst, &[still(0, p(0.0, 0.0)), still(1, p(10.0, 0.0))], 0.5).is_empty());
    }
}
