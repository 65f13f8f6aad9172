//! Seeded instance generators used by the test suites and benchmarks.
//!
//! Holes are kept at least [`HOLE_GAP`] apart from each other and from the
//! outer wall, wider than a robot, so the free space is always connected.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Point, PolygonWithHoles, Ring};
use crate::hardness::CnfFormula;
use crate::instance::{area_is_clear, is_free, Instance, Robot};

pub const HOLE_GAP: f64 = 2.5;
/// Minimum distance between any two anchors; validity needs 3.
pub const ANCHOR_SEPARATION: f64 = 4.0;

struct Hole {
    center: Point,
    radius: f64,
    ring: Ring,
}

fn random_hole(rng: &mut ChaCha8Rng, center: Point, radius: f64) -> Hole {
    let k = rng.gen_range(3..=4);
    let mut angles: Vec<f64> = (0..k)
        .map(|j| (j as f64 + rng.gen_range(0.15..0.85)) * std::f64::consts::TAU / k as f64)
        .collect();
    angles.sort_by(f64::total_cmp);
    let ring = angles.iter().map(|&a| center + Point::polar(radius * rng.gen_range(0.6..1.0), a)).collect();
    Hole { center, radius, ring }
}

fn scatter_holes(rng: &mut ChaCha8Rng, side: f64, count: usize) -> Vec<Hole> {
    let mut holes: Vec<Hole> = Vec::new();
    for _ in 0..count * 50 {
        if holes.len() == count {
            break;
        }
        let r = rng.gen_range(1.0..3.0);
        let m = r + HOLE_GAP;
        if side <= 2.0 * m {
            continue;
        }
        let c = Point::new(rng.gen_range(m..side - m), rng.gen_range(m..side - m));
        if holes.iter().all(|h| h.center.dist(c) >= h.radius + r + HOLE_GAP) {
            holes.push(random_hole(rng, c, r));
        }
    }
    holes
}

/// Places `2n` anchors uniformly at random, rejecting any that would make
/// the centred-area instance invalid.
fn scatter_robots(rng: &mut ChaCha8Rng, ws: &PolygonWithHoles, n: usize) -> Option<Vec<Robot>> {
    let (lo, hi) = ws.bbox();
    let mut anchors: Vec<Point> = Vec::with_capacity(2 * n);
    let mut tries = 0;
    while anchors.len() < 2 * n {
        tries += 1;
        if tries > 20_000 {
            return None;
        }
        let p = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if is_free(ws, p) && area_is_clear(ws, p) && anchors.iter().all(|a| a.dist(p) >= ANCHOR_SEPARATION) {
            anchors.push(p);
        }
    }
    Some((0..n).map(|i| Robot { id: i, start: anchors[2 * i], final_pos: anchors[2 * i + 1] }).collect())
}

fn centered(ws: PolygonWithHoles, robots: Vec<Robot>) -> Instance {
    let centers = robots.iter().map(|r| (r.start, r.final_pos)).collect();
    Instance::new(ws, robots, centers).expect("robot ids are 0..n")
}

/// Random valid instance with `n` robots and at most 40 workspace vertices.
pub fn random_instance(n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 14.0 + 2.5 * n as f64;
    loop {
        let count = rng.gen_range(0..=9);
        let holes = scatter_holes(&mut rng, side, count);
        let ws = PolygonWithHoles::rect(0.0, 0.0, side, side);
        let ws = holes.into_iter().fold(ws, |w, h| w.with_hole(h.ring));
        if let Some(robots) = scatter_robots(&mut rng, &ws, n) {
            return centered(ws, robots);
        }
    }
}

/// The seeded random suite: `count` instances with `n ∈ [2, 10]`.
pub fn random_suite(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(rng.gen_range(2..=10), rng.gen())).collect()
}

/// Anchors on a `k × k` lattice of pitch 3, the tightest spacing validity
/// allows. Starts take the even cells, targets the odd cells mirrored.
pub fn dense_grid(k: usize) -> Instance {
    let pitch = 3.0;
    let side = pitch * (k - 1) as f64;
    let ws = PolygonWithHoles::rect(-2.5, -2.5, side + 2.5, side + 2.5);
    let cell = |i: usize, j: usize| Point::new(pitch * i as f64, pitch * j as f64);
    let even: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|(i, j)| (i + j) % 2 == 0).collect();
    let odd: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|(i, j)| (i + j) % 2 == 1).rev().collect();
    let robots = even
        .iter()
        .zip(&odd)
        .enumerate()
        .map(|(id, (&(i, j), &(a, b)))| Robot { id, start: cell(i, j), final_pos: cell(a, b) })
        .collect();
    centered(ws, robots)
}

/// Performance case: `n` robots in a square with one small hole per cell
/// of a 7 × 7 lattice, about 200 vertices in all.
pub fn perf_instance(n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cells, pitch) = (7, 10.0);
    let side = cells as f64 * pitch;
    loop {
        let mut ws = PolygonWithHoles::rect(0.0, 0.0, side, side);
        for i in 0..cells {
            for j in 0..cells {
                let c = Point::new((i as f64 + 0.5) * pitch, (j as f64 + 0.5) * pitch);
                let mut h = random_hole(&mut rng, c, 2.0);
                while h.ring.len() < 4 {
                    h = random_hole(&mut rng, c, 2.0);
                }
                ws = ws.with_hole(h.ring);
            }
        }
        if let Some(robots) = scatter_robots(&mut rng, &ws, n) {
            return centered(ws, robots);
        }
    }
}

/// Uniform random 3-CNF over `num_vars ≥ 3` variables, three distinct
/// variables per clause.
pub fn random_formula(num_vars: usize, m: usize, seed: u64) -> CnfFormula {
    assert!(num_vars >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            let mut vars: Vec<i32> = Vec::with_capacity(3);
            while vars.len() < 3 {
                let v = rng.gen_range(1..=num_vars as i32);
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.into_iter().map(|v| if rng.gen() { v } else { -v }).collect()
        })
        .collect();
    CnfFormula::new(num_vars, clauses).expect("three literals in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freespace::FreeSpace;

    #[test]
    fn random_instances_are_valid_and_connected() {
        for (k, inst) in random_suite(6, 11).iter().enumerate() {
            assert!(inst.validate().valid, "instance {k}");
            assert!(inst.workspace.vertex_count() <= 40);
            let fs = FreeSpace::build(&inst.workspace);
            assert!(inst.robots.iter().all(|r| fs.connected(r.start, r.final_pos)), "instance {k}");
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(random_instance(5, 3).robots, random_instance(5, 3).robots);
        assert_eq!(random_formula(5, 4, 1), random_formula(5, 4, 1));
    }

    #[test]
    fn dense_grid_is_valid() {
        let inst = dense_grid(6);
        assert_eq!(inst.n(), 18);
        assert!(inst.validate().valid);
    }

    #[test]
    fn perf_instance_shape() {
        let inst = perf_instance(50, 1);
        assert_eq!(inst.n(), 50);
        assert!(inst.workspace.vertex_count() >= 190 && inst.workspace.vertex_count() <= 200);
        assert!(inst.validate().valid);
    }
}
