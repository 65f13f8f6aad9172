use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ramp_core::geom::{Point, PolygonWithHoles};
use ramp_core::instance::{Instance, Robot};
use ramp_core::scenario::random_instance;
use tempfile::TempDir;

fn ramp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramp")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn put(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Two rooms joined by a corridor too narrow for a unit disc.
fn two_rooms() -> Instance {
    let pts = [(0., 0.), (10., 0.), (10., 4.25), (14., 4.25), (14., 0.), (24., 0.), (24., 10.), (14., 10.), (14., 5.75), (10., 5.75), (10., 10.), (0., 10.)];
    let ws = PolygonWithHoles::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect(), vec![]).unwrap();
    let r = Robot { id: 0, start: Point::new(5.0, 5.0), final_pos: Point::new(19.0, 5.0) };
    Instance::new(ws, vec![r], vec![(r.start, r.final_pos)]).unwrap()
}

#[test]
fn validate_reports_json() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "i.json", &random_instance(4, 2).to_json());
    let o = ramp(&["validate", s(&inst)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["valid"], true);
}

#[test]
fn plan_then_check() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "i.json", &random_instance(6, 7).to_json());
    let plan = dir.path().join("p.json");
    let o = ramp(&["plan", s(&inst), "--out", s(&plan)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let first = std::fs::read(&plan).unwrap();
    let o = ramp(&["--jobs", "2", "plan", s(&inst), "--out", s(&plan)]);
    assert_eq!(code(&o), 0);
    assert_eq!(first, std::fs::read(&plan).unwrap(), "plan bytes depend only on inputs");
    let o = ramp(&["check", s(&inst), s(&plan), "--step", "1e-2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["ok"], true);
}

#[test]
fn plan_with_optimised_orders() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "i.json", &random_instance(5, 21).to_json());
    let plan = dir.path().join("p.json");
    for order in ["given", "greedy", "local", "exact"] {
        let o = ramp(&["plan", s(&inst), "--order", order, "--out", s(&plan)]);
        assert_eq!(code(&o), 0, "{order}");
    }
    let o = ramp(&["order", s(&inst), "--method", "exact"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["ordering"].as_array().unwrap().len(), 5);
    assert!(v["delta_cost"].as_f64().unwrap() >= 0.0);
}

#[test]
fn disconnected_is_infeasible() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "i.json", &two_rooms().to_json());
    let o = ramp(&["plan", s(&inst), "--out", s(&dir.path().join("p.json"))]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no feasible motion plan exists"));
}

#[test]
fn check_flags_a_collision() {
    let dir = TempDir::new().unwrap();
    let inst = random_instance(3, 4);
    let path = put(&dir, "i.json", &inst.to_json());
    // Every robot jumps straight to its target during window 0.
    let robots: Vec<_> = inst
        .robots
        .iter()
        .map(|r| {
            serde_json::json!({"id": r.id, "pieces": [
                {"t0": 0.0, "t1": 1.0, "points": [r.start, r.final_pos]},
                {"t0": 1.0, "t1": 3.0, "points": [r.final_pos, r.final_pos]}]})
        })
        .collect();
    let plan = serde_json::json!({"ordering": [0, 1, 2], "robots": robots, "costs": {"per_robot": [0, 0, 0], "total": 0}});
    let plan = put(&dir, "p.json", &plan.to_string());
    let o = ramp(&["check", s(&path), s(&plan), "--step", "1e-2"]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["ok"], false);
}

#[test]
fn hardness_witness_round_trip() {
    let dir = TempDir::new().unwrap();
    let cnf = put(&dir, "f.cnf", "c example\np cnf 3 3\n-1 -2 3 0\n1 -2 3 0\n1 2 -3 0\n");
    let [inst, meta, wit, plan] = ["i.json", "m.json", "w.json", "p.json"].map(|f| dir.path().join(f));
    let o = ramp(&["gen-hardness", "--cnf", s(&cnf), "--out", s(&inst), "--meta", s(&meta), "--assignment", "1 -2 3", "--witness", s(&wit)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let w: serde_json::Value = serde_json::from_slice(&std::fs::read(&wit).unwrap()).unwrap();
    assert_eq!(w["labels"], serde_json::json!(["~c1", "b1", "~a1", "r0", "a2", "a1", "~b2", "c2", "~b1", "c1"]));
    let o = ramp(&["plan", s(&inst), "--order", s(&wit), "--out", s(&plan)]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["marginal_cost"].as_f64().unwrap().abs() <= 1e-9);
    let o = ramp(&["gen-hardness", "--cnf", s(&cnf), "--out", s(&inst), "--assignment", "-1 2 -3", "--witness", s(&wit)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsat-assignment"));
}

#[test]
fn bad_cnf_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let cnf = put(&dir, "f.cnf", "p cnf 3 1\n1 2 0\n");
    let o = ramp(&["gen-hardness", "--cnf", s(&cnf), "--out", s(&dir.path().join("i.json"))]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad-cnf"));
}

#[test]
fn render_static_and_animated() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "i.json", &random_instance(3, 9).to_json());
    let (plan, svg) = (dir.path().join("p.json"), dir.path().join("o.svg"));
    assert_eq!(code(&ramp(&["plan", s(&inst), "--out", s(&plan)])), 0);
    assert_eq!(code(&ramp(&["render", s(&inst), "--svg", s(&svg)])), 0);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
    assert_eq!(code(&ramp(&["render", s(&inst), s(&plan), "--svg", s(&svg), "--animate", "--fps", "12"])), 0);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<animate"));
    assert_eq!(code(&ramp(&["render", s(&inst), s(&plan), "--svg", s(&svg), "--animate", "--fps", "0"])), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&ramp(&["plan", "x.json", "--bogus"])), 2);
    assert_eq!(code(&ramp(&["frobnicate"])), 2);
    assert_eq!(code(&ramp(&["validate", "/nonexistent/instance.json"])), 2);
}
