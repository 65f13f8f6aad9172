//! Instance model: workspace, labelled robots and their revolving areas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Circle, Point, PolygonWithHoles, Ring, EPS_GEO};

pub const CORE_RADIUS: f64 = 1.0;
pub const AREA_RADIUS: f64 = 2.0;
pub const BUFFER_RADIUS: f64 = 3.0;
pub const INNER_RADIUS: f64 = 1.5;

/// Pitch of the center search used by [`default_areas`].
pub const AREA_SEARCH_PITCH: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Robot {
    pub id: usize,
    pub start: Point,
    pub final_pos: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorKind {
    Start,
    Final,
}

/// A start or final position, identified by robot and kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AnchorRef {
    pub robot: usize,
    pub kind: AnchorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevolvingArea {
    pub anchor: Point,
    pub center: Point,
}

impl RevolvingArea {
    pub fn centered(anchor: Point) -> Self {
        RevolvingArea { anchor, center: anchor }
    }

    pub fn core(&self) -> Circle {
        Circle::new(self.center, CORE_RADIUS)
    }

    pub fn area(&self) -> Circle {
        Circle::new(self.center, AREA_RADIUS)
    }

    pub fn buffer(&self) -> Circle {
        Circle::new(self.center, BUFFER_RADIUS)
    }

    pub fn inner(&self) -> Circle {
        Circle::new(self.center, INNER_RADIUS)
    }
}

/// `disc(p, 1)` misses the obstacle space.
pub fn is_free(ws: &PolygonWithHoles, p: Point) -> bool {
    ws.contains(p) && ws.boundary_distance(p) >= CORE_RADIUS - EPS_GEO
}

/// `disc(c, 2)` misses the obstacle space.
pub fn area_is_clear(ws: &PolygonWithHoles, c: Point) -> bool {
    ws.contains(c) && ws.boundary_distance(c) >= AREA_RADIUS - EPS_GEO
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub workspace: PolygonWithHoles,
    /// Sorted by id; `robots[i].id == i`.
    pub robots: Vec<Robot>,
    pub start_areas: Vec<RevolvingArea>,
    pub final_areas: Vec<RevolvingArea>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    NotFree { anchor: AnchorRef },
    AnchorOutsideArea { anchor: AnchorRef, distance: f64 },
    AreaHitsObstacle { anchor: AnchorRef, clearance: f64 },
    AreaHitsAnchor { anchor: AnchorRef, other: AnchorRef, distance: f64 },
    AnchorOutsideCore { anchor: AnchorRef, distance: f64 },
    CoresOverlap { anchor: AnchorRef, other: AnchorRef, distance: f64 },
    AnchorInBuffer { anchor: AnchorRef, other: AnchorRef, distance: f64 },
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl Instance {
    /// Builds an instance with explicit area centers. Robots are sorted by
    /// id, which must be exactly `0..n`.
    pub fn new(workspace: PolygonWithHoles, robots: Vec<Robot>, centers: Vec<(Point, Point)>) -> Result<Self> {
        if robots.len() != centers.len() {
            return Err(Error::InvalidInstance("one center pair per robot required".into()));
        }
        let mut rows: Vec<(Robot, (Point, Point))> = robots.into_iter().zip(centers).collect();
        rows.sort_by_key(|(r, _)| r.id);
        for (k, (r, _)) in rows.iter().enumerate() {
            if r.id != k {
                return Err(Error::InvalidInstance(format!("robot ids must be 0..n, found {} at rank {k}", r.id)));
            }
            if !r.start.is_finite() || !r.final_pos.is_finite() {
                return Err(Error::InvalidInstance(format!("robot {k} has non-finite coordinates")));
            }
        }
        let start_areas = rows.iter().map(|(r, c)| RevolvingArea { anchor: r.start, center: c.0 }).collect();
        let final_areas = rows.iter().map(|(r, c)| RevolvingArea { anchor: r.final_pos, center: c.1 }).collect();
        Ok(Instance { workspace, robots: rows.into_iter().map(|(r, _)| r).collect(), start_areas, final_areas })
    }

    /// Builds an instance whose areas come from [`default_areas`]; anchors
    /// without a feasible center keep `c = z` and fail validation.
    pub fn with_default_areas(workspace: PolygonWithHoles, robots: Vec<Robot>) -> Result<Self> {
        let mut robots = robots;
        robots.sort_by_key(|r| r.id);
        let found = default_areas(&workspace, &robots);
        let centers = robots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let s = found[2 * i].as_ref().map_or(r.start, |a| a.center);
                let f = found[2 * i + 1].as_ref().map_or(r.final_pos, |a| a.center);
                (s, f)
            })
            .collect();
        Instance::new(workspace, robots, centers)
    }

    pub fn n(&self) -> usize {
        self.robots.len()
    }

    pub fn area(&self, a: AnchorRef) -> &RevolvingArea {
        match a.kind {
            AnchorKind::Start => &self.start_areas[a.robot],
            AnchorKind::Final => &self.final_areas[a.robot],
        }
    }

    pub fn anchors(&self) -> Vec<AnchorRef> {
        anchor_refs(self.n())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let anchors = self.anchors();
        for &a in &anchors {
            let ar = self.area(a);
            if !is_free(&self.workspace, ar.anchor) {
                v.push(Violation::NotFree { anchor: a });
            }
            let d = ar.anchor.dist(ar.center);
            if d > AREA_RADIUS - CORE_RADIUS + EPS_GEO {
                v.push(Violation::AnchorOutsideArea { anchor: a, distance: d });
            }
            if d > CORE_RADIUS + EPS_GEO {
                v.push(Violation::AnchorOutsideCore { anchor: a, distance: d });
            }
            if !area_is_clear(&self.workspace, ar.center) {
                v.push(Violation::AreaHitsObstacle { anchor: a, clearance: self.workspace.clearance(ar.center) });
            }
        }
        for &a in &anchors {
            let ar = self.area(a);
            for &b in &anchors {
                if a == b || same_point_same_robot(self, a, b) {
                    continue;
                }
                let br = self.area(b);
                let d = ar.center.dist(br.anchor);
                if d < AREA_RADIUS + CORE_RADIUS - EPS_GEO {
                    v.push(Violation::AreaHitsAnchor { anchor: a, other: b, distance: d });
                }
                // ‖x − c_y‖ ≥ 3 and ‖c_x − c_y‖ ≥ 2, seen from the other side
                let dx = ar.anchor.dist(br.center);
                if dx < BUFFER_RADIUS - EPS_GEO {
                    v.push(Violation::AnchorInBuffer { anchor: a, other: b, distance: dx });
                }
                if a < b {
                    let dc = ar.center.dist(br.center);
                    if dc < 2.0 * CORE_RADIUS - EPS_GEO {
                        v.push(Violation::CoresOverlap { anchor: a, other: b, distance: dc });
                    }
                }
            }
        }
        ValidationReport { valid: v.is_empty(), violations: v }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(s)?;
        file.into_instance()
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            workspace: WorkspaceFile { outer: self.workspace.outer.clone(), holes: self.workspace.holes.clone() },
            robots: self
                .robots
                .iter()
                .map(|r| RobotRecord {
                    id: r.id,
                    start: r.start,
                    final_pos: r.final_pos,
                    start_area_center: Some(self.start_areas[r.id].center),
                    final_area_center: Some(self.final_areas[r.id].center),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serialises")
    }
}

/// A robot sitting still (`s = f`) owns one point, not two.
fn same_point_same_robot(inst: &Instance, a: AnchorRef, b: AnchorRef) -> bool {
    a.robot == b.robot && inst.area(a).anchor == inst.area(b).anchor
}

pub fn anchor_refs(n: usize) -> Vec<AnchorRef> {
    (0..n)
        .flat_map(|i| {
            [AnchorRef { robot: i, kind: AnchorKind::Start }, AnchorRef { robot: i, kind: AnchorKind::Final }]
        })
        .collect()
}

/// Why no center was found for an anchor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AreaFailure {
    pub anchor: AnchorRef,
    pub reason: String,
}

/// Picks a center for every anchor, in [`anchor_refs`] order. Tries the
/// anchor itself, then the grid point of pitch [`AREA_SEARCH_PITCH`]
/// inside `disc(z, 1)` nearest to `z` that meets all constraints.
pub fn default_areas(ws: &PolygonWithHoles, robots: &[Robot]) -> Vec<Result<RevolvingArea, AreaFailure>> {
    let mut points: Vec<(AnchorRef, Point)> = Vec::new();
    for r in robots {
        points.push((AnchorRef { robot: r.id, kind: AnchorKind::Start }, r.start));
        points.push((AnchorRef { robot: r.id, kind: AnchorKind::Final }, r.final_pos));
    }
    let offsets = grid_offsets();
    points
        .iter()
        .map(|&(a, z)| {
            if !is_free(ws, z) {
                return Err(AreaFailure { anchor: a, reason: "anchor is not in free space".into() });
            }
            let others: Vec<Point> = points
                .iter()
                .filter(|(b, y)| !(b.robot == a.robot && *y == z))
                .map(|&(_, y)| y)
                .collect();
            let ok = |c: Point| {
                area_is_clear(ws, c) && others.iter().all(|y| c.dist(*y) >= AREA_RADIUS + CORE_RADIUS - EPS_GEO)
            };
            std::iter::once(Point::new(0.0, 0.0))
                .chain(offsets.iter().copied())
                .map(|o| z + o)
                .find(|&c| ok(c))
                .map(|c| RevolvingArea { anchor: z, center: c })
                .ok_or_else(|| AreaFailure { anchor: a, reason: "no center within distance 1 satisfies the area constraints".into() })
        })
        .collect()
}

/// Grid offsets within the unit disc, nearest first, ties in grid order.
fn grid_offsets() -> Vec<Point> {
    let k = (1.0 / AREA_SEARCH_PITCH).round() as i64;
    let mut out: Vec<(i64, i64)> = (-k..=k)
        .flat_map(|i| (-k..=k).map(move |j| (i, j)))
        .filter(|&(i, j)| (i != 0 || j != 0) && i * i + j * j <= k * k)
        .collect();
    out.sort_by_key(|&(i, j)| (i * i + j * j, i, j));
    out.into_iter().map(|(i, j)| Point::new(i as f64 * AREA_SEARCH_PITCH, j as f64 * AREA_SEARCH_PITCH)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorkspaceFile {
    pub outer: Ring,
    #[serde(default)]
    pub holes: Vec<Ring>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobotRecord {
    pub id: usize,
    pub start: Point,
    #[serde(rename = "final")]
    pub final_pos: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_area_center: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_area_center: Option<Point>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub workspace: WorkspaceFile,
    pub robots: Vec<RobotRecord>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        let ws = PolygonWithHoles::new(self.workspace.outer, self.workspace.holes)?;
        let robots: Vec<Robot> =
            self.robots.iter().map(|r| Robot { id: r.id, start: r.start, final_pos: r.final_pos }).collect();
        let mut inst = Instance::new(ws.clone(), robots.clone(), robots.iter().map(|r| (r.start, r.final_pos)).collect())?;
        if self.robots.iter().any(|r| r.start_area_center.is_none() || r.final_area_center.is_none()) {
            inst = Instance::with_default_areas(ws, robots)?;
        }
        for r in &self.robots {
            if let Some(c) = r.start_area_center {
                inst.start_areas[r.id].center = c;
            }
            if let Some(c) = r.final_area_center {
                inst.final_areas[r.id].center = c;
            }
        }
        Ok(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn open_square() -> PolygonWithHoles {
        PolygonWithHoles::rect(-10.0, -10.0, 20.0, 20.0)
    }

    fn robots(pairs: &[(Point, Point)]) -> Vec<Robot> {
        pairs.iter().enumerate().map(|(id, &(start, final_pos))| Robot { id, start, final_pos }).collect()
    }

    fn centered(ws: PolygonWithHoles, pairs: &[(Point, Point)]) -> Instance {
        Instance::new(ws, robots(pairs), pairs.to_vec()).unwrap()
    }

    #[test]
    fn separated_robots_are_valid() {
        let inst = centered(open_square(), &[(p(0.0, 0.0), p(0.0, 10.0)), (p(10.0, 0.0), p(10.0, 10.0))]);
        let rep = inst.validate();
        assert!(rep.valid, "{:?}", rep.violations);
    }

    #[test]
    fn close_start_breaks_separation() {
        let inst = centered(open_square(), &[(p(0.0, 0.0), p(0.0, 10.0)), (p(2.5, 0.0), p(10.0, 10.0))]);
        let rep = inst.validate();
        assert!(!rep.valid);
        assert!(rep.violations.iter().any(|v| matches!(v,
            Violation::AreaHitsAnchor { anchor, other, distance }
                if anchor.robot == 0 && anchor.kind == AnchorKind::Start
                    && other.robot == 1 && (distance - 2.5).abs() < 1e-12)));
    }

    #[test]
    fn boundary_containment_holds() {
        let ws = open_square();
        let inst = Instance::new(ws, robots(&[(p(0.0, 0.0), p(10.0, 10.0))]), vec![(p(0.8, 0.6), p(10.0, 10.0))]).unwrap();
        let rep = inst.validate();
        assert!(!rep.violations.iter().any(|v| matches!(v, Violation::AnchorOutsideArea { .. })));
        assert!(rep.valid);
    }

    #[test]
    fn stationary_robot_is_not_compared_with_itself() {
        let inst = centered(open_square(), &[(p(0.0, 0.0), p(0.0, 0.0))]);
        assert!(inst.validate().valid);
    }

    #[test]
    fn default_area_in_open_space_is_anchor() {
        let a = default_areas(&open_square(), &robots(&[(p(0.0, 0.0), p(10.0, 0.0))]));
        assert_eq!(a[0].as_ref().unwrap().center, p(0.0, 0.0));
    }

    #[test]
    fn default_area_shifts_away_from_wall() {
        // obstacle half-plane x >= 1.5
        let ws = PolygonWithHoles::rect(-20.0, -20.0, 1.5, 20.0);
        let r = robots(&[(p(0.0, 0.0), p(-10.0, 0.0))]);
        let a = default_areas(&ws, &r);
        let c = a[0].as_ref().unwrap().center;
        assert!(c.x <= -0.5 + 1e-9, "{c}");
        assert!(c.dist(p(0.0, 0.0)) <= 1.0 + 1e-9);
        assert!(area_is_clear(&ws, c));
        let inst = Instance::with_default_areas(ws, r).unwrap();
        assert!(inst.validate().valid);
    }

    #[test]
    fn close_anchors_fail_when_centered() {
        let inst = centered(open_square(), &[(p(0.0, 0.0), p(0.0, 10.0)), (p(2.9, 0.0), p(10.0, 10.0))]);
        assert!(!inst.validate().valid);
    }

    #[test]
    fn json_round_trip() {
        let inst = centered(open_square(), &[(p(0.0, 0.0), p(0.0, 10.0)), (p(10.0, 0.0), p(10.0, 10.0))]);
        let back = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back.robots, inst.robots);
        assert_eq!(back.start_areas, inst.start_areas);
    }

    #[test]
    fn missing_centers_use_defaults() {
        let s = r#"{"workspace":{"outer":[[-20,-20],[1.5,-20],[1.5,20],[-20,20]]},
                    "robots":[{"id":0,"start":[0,0],"final":[-10,0]}]}"#;
        let inst = Instance::from_json(s).unwrap();
        assert!(inst.start_areas[0].center.x <= -0.5 + 1e-9);
        assert!(inst.validate().valid);
    }

    #[test]
    fn bad_workspace_is_rejected() {
        let s = r#"{"workspace":{"outer":[[0,0],[1,0]]},"robots":[]}"#;
        assert!(matches!(Instance::from_json(s), Err(Error::BadWorkspace(_))));
    }

    #[test]
    fn bad_ids_are_rejected() {
        let s = r#"{"workspace":{"outer":[[0,0],[30,0],[30,30],[0,30]]},
                    "robots":[{"id":1,"start":[5,5],"final":[20,20]}]}"#;
        assert!(matches!(Instance::from_json(s), Err(Error::InvalidInstance(_))));
    }
}
