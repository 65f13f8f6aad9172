//! Instances built from 3-CNF formulas in which a zero-overhead weakly
//! monotone plan exists exactly when the formula is satisfiable.
//!
//! The workspace is a chain of gadgets joined by corridors one robot
//! diameter wide: one gadget with a positive and a negative passage per
//! variable, then one gadget with three passages per clause. Each literal
//! occurrence becomes a robot that starts in its variable's passage and ends
//! in its clause's passage. Pivot robots cross the whole chain.
//!
//! Every route through a gadget climbs from an entrance level below all
//! passages to an exit level above them (or the mirror image), so every
//! route has the same length and the same four 90° turns. Without that, a
//! shortest path would prefer whichever passage cuts fewer corners.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freespace::{FreeSpace, DEFAULT_INFLATE_TOL};
use crate::geom::{signed_area, Point, PolygonWithHoles, Ring};
use crate::instance::{Instance, Robot};

pub use crate::verify::{congestion_witness, Congestion};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: usize,
    /// DIMACS literals: `v` or `-v` for variable `v ∈ 1..=num_vars`.
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        let mut out = Vec::with_capacity(clauses.len());
        for (k, c) in clauses.into_iter().enumerate() {
            let Ok(c) = <[i32; 3]>::try_from(c.as_slice()) else {
                return Err(Error::BadCnf(format!("clause {} has {} literals, expected 3", k + 1, c.len())));
            };
            if let Some(&l) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::BadCnf(format!("clause {} has literal {l} outside 1..={num_vars}", k + 1)));
            }
            out.push(c);
        }
        if out.is_empty() {
            return Err(Error::BadCnf("formula has no clauses".into()));
        }
        Ok(CnfFormula { num_vars, clauses: out })
    }

    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut cur = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('%') {
                break;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                let parsed = match f.as_slice() {
                    ["cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                    _ => None,
                };
                header = Some(parsed.ok_or_else(|| Error::BadCnf(format!("malformed header '{line}'")))?);
                continue;
            }
            if header.is_none() {
                return Err(Error::BadCnf("clause before 'p cnf' header".into()));
            }
            for tok in line.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| Error::BadCnf(format!("bad literal '{tok}'")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut cur));
                } else {
                    cur.push(l);
                }
            }
        }
        if !cur.is_empty() {
            clauses.push(cur);
        }
        let (num_vars, num_clauses) = header.ok_or_else(|| Error::BadCnf("missing 'p cnf' header".into()))?;
        if clauses.len() != num_clauses {
            return Err(Error::BadCnf(format!("header declares {num_clauses} clauses, found {}", clauses.len())));
        }
        CnfFormula::new(num_vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            s.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        s
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// Largest number of occurrences of any variable (≤ 5 for MAX-3SAT(5)).
    pub fn max_occurrences(&self) -> usize {
        let mut count = vec![0; self.num_vars + 1];
        for l in self.clauses.iter().flatten() {
            count[l.unsigned_abs() as usize] += 1;
        }
        count.into_iter().max().unwrap_or(0)
    }

    /// Index of the first clause `assignment` leaves false.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|c| !c.iter().any(|&l| literal_value(l, assignment)))
    }

    pub fn var_name(&self, v: usize) -> String {
        if self.num_vars <= 26 {
            ((b'a' + v as u8) as char).to_string()
        } else {
            format!("x{}", v + 1)
        }
    }
}

fn literal_value(l: i32, assignment: &[bool]) -> bool {
    let v = assignment.get(l.unsigned_abs() as usize - 1).copied().unwrap_or(false);
    v == (l > 0)
}

/// Corridor half-width; a hair over one robot radius so the free space is
/// a thin strip rather than a bare centreline.
pub const HALF_WIDTH: f64 = 1.0 + 1e-6;
/// Vertical distance between neighbouring passages.
pub const LEVEL_SPACING: f64 = 3.5;
/// Entrance and exit levels sit this far below / above the outer passages.
pub const PORT_OFFSET: f64 = 3.0;
/// Distance between consecutive anchors on a passage, and from a passage's
/// end columns to its first and last anchor.
pub const ANCHOR_SPACING: f64 = 4.2;
pub const GADGET_GAP: f64 = 4.0;
/// Radius of the widening around every anchor; the radius-2 area must fit.
pub const BULGE_RADIUS: f64 = 2.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutConstants {
    pub half_width: f64,
    pub level_spacing: f64,
    pub port_offset: f64,
    pub anchor_spacing: f64,
    pub gadget_gap: f64,
    pub bulge_radius: f64,
    pub bulge_sagitta: f64,
}

impl Default for LayoutConstants {
    fn default() -> Self {
        LayoutConstants {
            half_width: HALF_WIDTH,
            level_spacing: LEVEL_SPACING,
            port_offset: PORT_OFFSET,
            anchor_spacing: ANCHOR_SPACING,
            gadget_gap: GADGET_GAP,
            bulge_radius: BULGE_RADIUS,
            bulge_sagitta: DEFAULT_INFLATE_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

fn snap_axis(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    v
}

fn axis_index(axis: &[f64], x: f64) -> usize {
    axis.partition_point(|&a| a < x - 1e-9)
}

/// Boundary rings of a union of rectangles, traced with the interior on the
/// left. Collinear vertices are dropped.
fn rect_union(rects: &[Rect]) -> Vec<Ring> {
    let xs = snap_axis(rects.iter().flat_map(|r| [r.x0, r.x1]).collect());
    let ys = snap_axis(rects.iter().flat_map(|r| [r.y0, r.y1]).collect());
    let (nx, ny) = (xs.len() - 1, ys.len() - 1);
    let mut inside = vec![vec![false; ny]; nx];
    for r in rects {
        for col in inside.iter_mut().take(axis_index(&xs, r.x1)).skip(axis_index(&xs, r.x0)) {
            for cell in col.iter_mut().take(axis_index(&ys, r.y1)).skip(axis_index(&ys, r.y0)) {
                *cell = true;
            }
        }
    }
    let at = |i: isize, j: isize| i >= 0 && j >= 0 && (i as usize) < nx && (j as usize) < ny && inside[i as usize][j as usize];
    let mut out: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..nx {
        for j in 0..ny {
            if !inside[i][j] {
                continue;
            }
            let (ii, jj) = (i as isize, j as isize);
            if !at(ii, jj - 1) {
                out.entry((i, j)).or_default().push((i + 1, j));
            }
            if !at(ii + 1, jj) {
                out.entry((i + 1, j)).or_default().push((i + 1, j + 1));
            }
            if !at(ii, jj + 1) {
                out.entry((i + 1, j + 1)).or_default().push((i, j + 1));
            }
            if !at(ii - 1, jj) {
                out.entry((i, j + 1)).or_default().push((i, j));
            }
        }
    }
    let mut rings = Vec::new();
    while let Some((&start, _)) = out.iter().find(|(_, v)| !v.is_empty()) {
        let mut ring = vec![start];
        let mut cur = start;
        loop {
            let next = out.get_mut(&cur).and_then(|v| v.pop()).expect("boundary edges form closed rings");
            if next == start {
                break;
            }
            ring.push(next);
            cur = next;
        }
        let pts: Vec<Point> = ring.iter().map(|&(i, j)| Point::new(xs[i], ys[j])).collect();
        rings.push(drop_collinear(pts));
    }
    rings
}

fn drop_collinear(pts: Vec<Point>) -> Ring {
    let n = pts.len();
    (0..n)
        .filter(|&k| {
            let (a, b, c) = (pts[(k + n - 1) % n], pts[k], pts[(k + 1) % n]);
            (b - a).cross(c - b).abs() > 1e-12
        })
        .map(|k| pts[k])
        .collect()
}

/// Replaces the stretch of each passage wall next to an anchor by an
/// inscribed polygon of the circle of radius `r` about the anchor.
fn splice_bulges(ring: &Ring, anchors: &[Point], h: f64, r: f64, sagitta: f64) -> Ring {
    let alpha = (h / r).asin();
    let w = r * alpha.cos();
    let sweep = PI - 2.0 * alpha;
    let step = 2.0 * (1.0 - sagitta / r).acos();
    let k = (sweep / step).ceil().max(1.0) as usize;
    let n = ring.len();
    let mut out = Vec::with_capacity(n);
    for e in 0..n {
        let (p, q) = (ring[e], ring[(e + 1) % n]);
        out.push(p);
        if (p.y - q.y).abs() > 1e-12 {
            continue;
        }
        let (lo, hi) = (p.x.min(q.x), p.x.max(q.x));
        let westward = q.x < p.x;
        let mut hits: Vec<Point> = anchors
            .iter()
            .copied()
            .filter(|a| {
                let wall = if westward { a.y + h } else { a.y - h };
                (p.y - wall).abs() < 1e-9 && a.x - w > lo + 1e-9 && a.x + w < hi - 1e-9
            })
            .collect();
        hits.sort_by(|a, b| if westward { b.x.total_cmp(&a.x) } else { a.x.total_cmp(&b.x) });
        for a in hits {
            let a0 = if westward { alpha } else { PI + alpha };
            out.extend((0..=k).map(|t| a + Point::polar(r, a0 + sweep * t as f64 / k as f64)));
        }
    }
    out
}

fn assemble_workspace(rects: &[Rect], anchors: &[Point], c: &LayoutConstants) -> Result<PolygonWithHoles> {
    let rings: Vec<Ring> = rect_union(rects)
        .into_iter()
        .map(|r| splice_bulges(&r, anchors, c.half_width, c.bulge_radius, c.bulge_sagitta))
        .collect();
    let (outer, holes): (Vec<Ring>, Vec<Ring>) = rings.into_iter().partition(|r| signed_area(r) > 0.0);
    let [outer] = <[Ring; 1]>::try_from(outer)
        .map_err(|o| Error::BadWorkspace(format!("gadget chain has {} outer boundaries", o.len())))?;
    PolygonWithHoles::new(outer, holes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapMode {
    SinglePivot,
    /// One pivot per clause, for the approximation-gap variant.
    MPivots,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetKind {
    Variable,
    Clause,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gadget {
    pub kind: GadgetKind,
    /// Variable or clause index.
    pub index: usize,
    pub name: String,
    pub x0: f64,
    pub x1: f64,
    pub entrance: Point,
    pub exit: Point,
    /// Passage centrelines, left end first.
    pub passages: Vec<[Point; 2]>,
    pub bbox: [Point; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "pivot")]
    Pivot,
    #[serde(rename = "literal+")]
    Positive,
    #[serde(rename = "literal-")]
    Negative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotMeta {
    pub id: usize,
    pub label: String,
    pub role: Role,
    /// Zero-based variable index (literal robots only).
    pub variable: Option<usize>,
    pub clause: Option<usize>,
    /// Literal position within the clause.
    pub position: Option<usize>,
    pub start: Point,
    pub target: Point,
    /// Single-robot shortest path length `d_i`.
    pub shortest: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardnessMeta {
    pub formula: CnfFormula,
    pub mode: GapMode,
    pub constants: LayoutConstants,
    pub gadgets: Vec<Gadget>,
    pub robots: Vec<RobotMeta>,
    /// `d(I) = Σ d_i`.
    pub d: f64,
}

impl HardnessMeta {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn label(&self, id: usize) -> &str {
        &self.robots[id].label
    }
}

struct Layout {
    rects: Vec<Rect>,
    gadgets: Vec<Gadget>,
    robots: Vec<RobotMeta>,
}

fn hrect(x0: f64, x1: f64, y: f64, h: f64) -> Rect {
    Rect { x0, y0: y - h, x1, y1: y + h }
}

fn vrect(x: f64, y0: f64, y1: f64, h: f64) -> Rect {
    Rect { x0: x - h, y0: y0 - h, x1: x + h, y1: y1 + h }
}

fn literal_ids(robots: &[RobotMeta], v: usize, role: Role) -> Vec<usize> {
    robots.iter().filter(|r| r.variable == Some(v) && r.role == role).map(|r| r.id).collect()
}

fn layout(q: &CnfFormula, mode: GapMode, c: &LayoutConstants) -> Layout {
    let (h, s, e, sp) = (c.half_width, c.level_spacing, c.port_offset, c.anchor_spacing);
    let top = 2.0 * s;
    let npiv = match mode {
        GapMode::SinglePivot => 1,
        GapMode::MPivots => q.m(),
    };
    let mut robots: Vec<RobotMeta> = (0..npiv)
        .map(|k| RobotMeta {
            id: k,
            label: format!("r{k}"),
            role: Role::Pivot,
            variable: None,
            clause: None,
            position: None,
            start: Point::new(sp * k as f64, -e),
            target: Point::default(),
            shortest: 0.0,
        })
        .collect();
    let mut seen: HashMap<i32, usize> = HashMap::new();
    for (ci, clause) in q.clauses.iter().enumerate() {
        for (p, &l) in clause.iter().enumerate() {
            let v = l.unsigned_abs() as usize - 1;
            let k = seen.entry(l).or_default();
            *k += 1;
            let neg = if l < 0 { "~" } else { "" };
            robots.push(RobotMeta {
                id: robots.len(),
                label: format!("{neg}{}{k}", q.var_name(v)),
                role: if l > 0 { Role::Positive } else { Role::Negative },
                variable: Some(v),
                clause: Some(ci),
                position: Some(p),
                start: Point::default(),
                target: Point::default(),
                shortest: 0.0,
            });
        }
    }
    let mut specs: Vec<(GadgetKind, usize, f64, Vec<f64>)> = Vec::new();
    for v in 0..q.num_vars {
        let k = literal_ids(&robots, v, Role::Positive).len().max(literal_ids(&robots, v, Role::Negative).len());
        specs.push((GadgetKind::Variable, v, sp * (k + 1) as f64, vec![0.0, top]));
    }
    for ci in 0..q.m() {
        specs.push((GadgetKind::Clause, ci, 4.0 * sp, vec![0.0, s, top]));
    }

    let mut rects = vec![hrect(-c.bulge_radius, sp * npiv as f64, -e, h)];
    let mut gadgets = Vec::new();
    let mut x0 = sp * npiv as f64;
    for (g, (kind, index, width, levels)) in specs.into_iter().enumerate() {
        let x1 = x0 + width;
        let bottom_entry = g % 2 == 0;
        let (ent_y, exit_y) = if bottom_entry { (-e, top + e) } else { (top + e, -e) };
        rects.push(vrect(x0, ent_y.min(0.0), ent_y.max(top), h));
        rects.push(vrect(x1, exit_y.min(0.0), exit_y.max(top), h));
        for &y in &levels {
            rects.push(hrect(x0, x1, y, h));
        }
        let name = match kind {
            GadgetKind::Variable => q.var_name(index),
            GadgetKind::Clause => format!("C{}", index + 1),
        };
        gadgets.push(Gadget {
            kind,
            index,
            name,
            x0,
            x1,
            entrance: Point::new(x0, ent_y),
            exit: Point::new(x1, exit_y),
            passages: levels.iter().map(|&y| [Point::new(x0, y), Point::new(x1, y)]).collect(),
            bbox: [Point::new(x0 - h, -e - h), Point::new(x1 + h, top + e + h)],
        });
        x0 = x1 + c.gadget_gap;
        rects.push(hrect(x1, x0, exit_y, h));
    }
    rects.pop();
    let last = gadgets.last().expect("at least one clause gadget").clone();
    let lead_end = last.x1 + sp * npiv as f64 + c.bulge_radius;
    rects.push(hrect(last.x1, lead_end, last.exit.y, h));
    for (k, r) in robots.iter_mut().take(npiv).enumerate() {
        r.target = Point::new(last.x1 + sp * (k + 1) as f64, last.exit.y);
    }

    // Targets: in each clause gadget the first literal sits rightmost.
    for r in robots.iter_mut().skip(npiv) {
        let (ci, p) = (r.clause.unwrap(), r.position.unwrap());
        let g = &gadgets[q.num_vars + ci];
        r.target = Point::new(g.x0 + sp * (3 - p) as f64, p as f64 * s);
    }
    // Starts follow the left-to-right order of the matching targets.
    for v in 0..q.num_vars {
        let g = gadgets[v].clone();
        for (role, y) in [(Role::Negative, 0.0), (Role::Positive, top)] {
            let mut ids = literal_ids(&robots, v, role);
            ids.sort_by(|&a, &b| robots[a].target.x.total_cmp(&robots[b].target.x));
            for (slot, id) in ids.into_iter().enumerate() {
                robots[id].start = Point::new(g.x0 + sp * (slot + 1) as f64, y);
            }
        }
    }
    Layout { rects, gadgets, robots }
}

/// Builds the instance for `q`; every area is centred on its anchor.
pub fn generate(q: &CnfFormula, mode: GapMode) -> Result<(Instance, HardnessMeta)> {
    generate_with(q, mode, &LayoutConstants::default())
}

pub fn generate_with(q: &CnfFormula, mode: GapMode, c: &LayoutConstants) -> Result<(Instance, HardnessMeta)> {
    let Layout { rects, gadgets, mut robots } = layout(q, mode, c);
    let anchors: Vec<Point> = robots.iter().flat_map(|r| [r.start, r.target]).collect();
    let ws = assemble_workspace(&rects, &anchors, c)?;
    let list: Vec<Robot> = robots.iter().map(|r| Robot { id: r.id, start: r.start, final_pos: r.target }).collect();
    let centers = list.iter().map(|r| (r.start, r.final_pos)).collect();
    let inst = Instance::new(ws, list, centers)?;
    let report = inst.validate();
    if !report.valid {
        return Err(Error::InvalidInstance(format!("generated instance fails validation: {:?}", report.violations)));
    }
    let fs = FreeSpace::build(&inst.workspace);
    let lengths: Vec<f64> = {
        use rayon::prelude::*;
        inst.robots
            .par_iter()
            .map(|r| fs.shortest_path(r.start, r.final_pos).map(|p| p.length()))
            .collect::<Result<_>>()?
    };
    for (r, len) in robots.iter_mut().zip(&lengths) {
        r.shortest = *len;
    }
    let meta = HardnessMeta { formula: q.clone(), mode, constants: *c, gadgets, robots, d: lengths.iter().sum() };
    Ok((inst, meta))
}

/// Witness order for a satisfying assignment: robots of false literals
/// right to left by start, then the pivots right to left, then robots of
/// true literals right to left by target.
pub fn assignment_ordering(meta: &HardnessMeta, assignment: &[bool]) -> Result<Vec<usize>> {
    if let Some(ci) = meta.formula.first_unsatisfied(assignment) {
        return Err(Error::UnsatAssignment(ci));
    }
    let truth = |r: &RobotMeta| assignment[r.variable.unwrap()] == (r.role == Role::Positive);
    let by_desc = |mut v: Vec<&RobotMeta>, key: fn(&RobotMeta) -> f64| -> Vec<usize> {
        v.sort_by(|a, b| key(b).total_cmp(&key(a)));
        v.into_iter().map(|r| r.id).collect()
    };
    let (pivots, literals): (Vec<&RobotMeta>, Vec<&RobotMeta>) = meta.robots.iter().partition(|r| r.role == Role::Pivot);
    let (truthy, falsy): (Vec<&RobotMeta>, Vec<&RobotMeta>) = literals.into_iter().partition(|r| truth(r));
    let mut sigma = by_desc(falsy, |r| r.start.x);
    sigma.extend(by_desc(pivots, |r| r.start.x));
    sigma.extend(by_desc(truthy, |r| r.target.x));
    Ok(sigma)
}

/// Reads an assignment back from an order: a variable is true when every
/// robot of its negative literal moves before the first pivot, i.e. the
/// pivot can use the negative passage.
pub fn ordering_assignment(meta: &HardnessMeta, sigma: &[usize]) -> Vec<bool> {
    let mut rank = vec![usize::MAX; meta.robots.len()];
    for (r, &i) in sigma.iter().enumerate() {
        rank[i] = r;
    }
    let pivot = meta.robots.iter().filter(|r| r.role == Role::Pivot).map(|r| rank[r.id]).min().unwrap_or(0);
    (0..meta.formula.num_vars)
        .map(|v| {
            meta.robots
                .iter()
                .filter(|r| r.variable == Some(v) && r.role == Role::Negative)
                .all(|r| rank[r.id] < pivot)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::{assemble, PlanOptions};

    fn three_clause() -> CnfFormula {
        CnfFormula::new(3, vec![vec![-1, -2, 3], vec![1, -2, 3], vec![1, 2, -3]]).unwrap()
    }

    #[test]
    fn dimacs_round_trip() {
        let text = "c example\np cnf 3 3\n-1 -2 3 0\n1 -2\n 3 0\n1 2 -3 0\n%\n0\n";
        let q = CnfFormula::parse_dimacs(text).unwrap();
        assert_eq!(q, three_clause());
        assert_eq!(CnfFormula::parse_dimacs(&q.to_dimacs()).unwrap(), q);
    }

    #[test]
    fn bad_cnf() {
        assert!(matches!(CnfFormula::new(3, vec![vec![1, 2]]), Err(Error::BadCnf(_))));
        assert!(matches!(CnfFormula::new(2, vec![vec![1, 2, 3]]), Err(Error::BadCnf(_))));
        assert!(matches!(CnfFormula::parse_dimacs("p cnf 3 2\n1 2 3 0\n"), Err(Error::BadCnf(_))));
        assert!(matches!(CnfFormula::parse_dimacs("1 2 3 0\n"), Err(Error::BadCnf(_))));
        let e = CnfFormula::new(3, vec![vec![1, 2, 3, -1]]).unwrap_err();
        assert!(e.to_string().starts_with("bad-cnf"));
    }

    #[test]
    fn single_clause_counts() {
        let q = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        let (inst, meta) = generate(&q, GapMode::SinglePivot).unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(meta.gadgets.len(), 4);
        assert_eq!(meta.robots.iter().filter(|r| r.role == Role::Pivot).count(), 1);
        assert!((meta.d - meta.robots.iter().map(|r| r.shortest).sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn three_clause_witness_order() {
        let q = three_clause();
        let (_, meta) = generate(&q, GapMode::SinglePivot).unwrap();
        let sigma = assignment_ordering(&meta, &[true, false, true]).unwrap();
        let labels: Vec<&str> = sigma.iter().map(|&i| meta.label(i)).collect();
        assert_eq!(labels, ["~c1", "b1", "~a1", "r0", "a2", "a1", "~b2", "c2", "~b1", "c1"]);
        assert_eq!(ordering_assignment(&meta, &sigma), vec![true, false, true]);
        assert!(matches!(assignment_ordering(&meta, &[false, true, false]), Err(Error::UnsatAssignment(1))));
    }

    #[test]
    fn three_clause_witness_plan_has_no_overhead() {
        let q = three_clause();
        let (inst, meta) = generate(&q, GapMode::SinglePivot).unwrap();
        let fs = FreeSpace::build(&inst.workspace);
        let sigma = assignment_ordering(&meta, &[true, false, true]).unwrap();
        let ens = assemble(&inst, &fs, &sigma, &PlanOptions::default()).unwrap();
        assert!(ens.marginal_cost().abs() <= 1e-9, "overhead {}", ens.marginal_cost());
        assert!((ens.cost_gamma() - meta.d).abs() <= 1e-6 * meta.d);
        assert!(congestion_witness(&inst, &ens.paths, 1e-2).is_empty());
    }

    #[test]
    fn layout_invariants() {
        let q = three_clause();
        let (inst, meta) = generate(&q, GapMode::SinglePivot).unwrap();
        let c = meta.constants;
        let last_var = meta.gadgets.iter().filter(|g| g.kind == GadgetKind::Variable).map(|g| g.x1).fold(f64::MIN, f64::max);
        let first_clause = meta.gadgets.iter().filter(|g| g.kind == GadgetKind::Clause).map(|g| g.x0).fold(f64::MAX, f64::min);
        assert!(last_var < first_clause);
        // Entrance and exit columns are the only vertical runs.
        assert!(2.0 * c.level_spacing + c.port_offset <= 10.0);
        for w in meta.gadgets.windows(2) {
            assert_eq!(w[0].exit.y, w[1].entrance.y);
            assert_ne!(w[0].entrance.y, w[0].exit.y);
        }
        // Same literal: start order matches target order.
        for r in &meta.robots {
            for o in &meta.robots {
                if r.role != Role::Pivot && r.variable == o.variable && r.role == o.role && r.start.x < o.start.x {
                    assert!(r.target.x < o.target.x, "{} / {}", r.label, o.label);
                }
            }
        }
        let areas: Vec<_> = inst.start_areas.iter().chain(&inst.final_areas).collect();
        for (k, a) in areas.iter().enumerate() {
            assert_eq!(a.anchor, a.center);
            for b in &areas[k + 1..] {
                assert!(a.center.dist(b.center) >= 4.0 - 1e-9);
            }
        }
    }

    #[test]
    fn gap_mode_pivots() {
        let q = three_clause();
        let (inst, meta) = generate(&q, GapMode::MPivots).unwrap();
        assert_eq!(inst.n(), 4 * q.m());
        let piv: Vec<&RobotMeta> = meta.robots.iter().filter(|r| r.role == Role::Pivot).collect();
        assert_eq!(piv.len(), q.m());
        let chain = (meta.gadgets[0].x0, meta.gadgets.last().unwrap().x1);
        for w in piv.windows(2) {
            assert!(w[0].start.x < w[1].start.x && w[0].target.x < w[1].target.x);
        }
        assert!(piv.iter().all(|r| r.start.x < chain.0 && r.target.x > chain.1));
        let sigma = assignment_ordering(&meta, &[true, false, true]).unwrap();
        let labels: Vec<&str> = sigma.iter().map(|&i| meta.label(i)).collect();
        assert_eq!(&labels[3..6], ["r2", "r1", "r0"]);
    }
}
