//! SVG 1.1 pictures of instances and plans.
//!
//! Output is a pure function of its inputs: element ids are derived from
//! robot ids and nothing time- or host-dependent is written.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geom::{Point, Ring};
use crate::instance::{Instance, RevolvingArea};
use crate::plan::TimedPath;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub animate: bool,
    /// Keyframes per unit of plan time; one unit plays in one second.
    pub fps: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { animate: false, fps: 24 }
    }
}

fn colour(i: usize, n: usize) -> String {
    format!("hsl({},70%,45%)", (360 * i / n.max(1)) % 360)
}

fn ring_path(ring: &Ring) -> String {
    let mut d = String::new();
    for (k, p) in ring.iter().enumerate() {
        let _ = write!(d, "{}{:.4},{:.4} ", if k == 0 { "M" } else { "L" }, p.x, p.y);
    }
    d.push('Z');
    d
}

fn area_group(out: &mut String, id: &str, a: &RevolvingArea, col: &str) {
    let c = a.center;
    let _ = writeln!(out, r#"<g id="{id}">"#);
    let _ = writeln!(out, r#"<circle cx="{:.4}" cy="{:.4}" r="2" fill="{col}" fill-opacity="0.12"/>"#, c.x, c.y);
    for (r, dash) in [(1.0, ""), (3.0, r#" stroke-dasharray="0.2 0.2""#)] {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.4}" cy="{:.4}" r="{r}" fill="none" stroke="{col}" stroke-width="0.04" stroke-opacity="0.5"{dash}/>"#,
            c.x, c.y
        );
    }
    let _ = writeln!(out, "</g>");
}

fn polyline(points: impl Iterator<Item = Point>) -> String {
    points.map(|p| format!("{:.4},{:.4}", p.x, p.y)).collect::<Vec<_>>().join(" ")
}

/// Renders `inst` and, if given, the robot paths. With `animate` each robot
/// is a disc moving along its path through SMIL keyframes.
pub fn render_svg(inst: &Instance, paths: Option<&[TimedPath]>, opts: &RenderOptions) -> Result<String> {
    if !(1..=60).contains(&opts.fps) {
        return Err(Error::BadRender(format!("fps must be in 1..=60, got {}", opts.fps)));
    }
    if opts.animate && paths.is_none() {
        return Err(Error::BadRender("animation needs a plan".into()));
    }
    let n = inst.n();
    let (lo, hi) = inst.workspace.bbox();
    let (w, h) = (hi.x - lo.x + 2.0, hi.y - lo.y + 2.0);
    let scale = (2000.0 / w.max(h)).min(20.0);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.4} {:.4} {:.4} {:.4}" width="{:.0}" height="{:.0}">"#,
        lo.x - 1.0,
        -hi.y - 1.0,
        w,
        h,
        w * scale,
        h * scale
    );
    let _ = writeln!(out, r#"<rect id="background" x="{:.4}" y="{:.4}" width="{w:.4}" height="{h:.4}" fill="black"/>"#, lo.x - 1.0, -hi.y - 1.0);
    let _ = writeln!(out, r#"<g id="scene" transform="scale(1,-1)">"#);
    let d: Vec<String> = inst.workspace.rings().map(ring_path).collect();
    let _ = writeln!(out, r#"<path id="workspace" d="{}" fill="white" fill-rule="evenodd"/>"#, d.join(" "));
    for i in 0..n {
        let col = colour(i, n);
        area_group(&mut out, &format!("area-s-{i}"), &inst.start_areas[i], &col);
        area_group(&mut out, &format!("area-f-{i}"), &inst.final_areas[i], &col);
    }
    if let Some(paths) = paths {
        for p in paths {
            let pts = polyline(p.pieces.iter().flat_map(|pc| pc.points.iter().copied()));
            let _ = writeln!(
                out,
                r#"<polyline id="path-{}" points="{pts}" fill="none" stroke="{}" stroke-width="0.08"/>"#,
                p.id,
                colour(p.id, n)
            );
        }
    }
    for (i, r) in inst.robots.iter().enumerate() {
        let col = colour(i, n);
        let (s, f) = (r.start, r.final_pos);
        let _ = writeln!(out, r#"<circle id="target-{i}" cx="{:.4}" cy="{:.4}" r="1" fill="none" stroke="{col}" stroke-width="0.08"/>"#, f.x, f.y);
        if !opts.animate {
            let _ = writeln!(out, r#"<circle id="start-{i}" cx="{:.4}" cy="{:.4}" r="1" fill="{col}"/>"#, s.x, s.y);
        }
    }
    if let (true, Some(paths)) = (opts.animate, paths) {
        let horizon = paths.iter().filter_map(|p| p.pieces.last()).map(|pc| pc.t1).fold(0.0, f64::max);
        let frames = ((horizon * opts.fps as f64).ceil() as usize).max(1);
        let key_times = (0..=frames).map(|k| format!("{:.6}", k as f64 / frames as f64)).collect::<Vec<_>>().join(";");
        for p in paths {
            let pos: Vec<Point> = (0..=frames).map(|k| p.position(horizon * k as f64 / frames as f64)).collect();
            let xs = pos.iter().map(|q| format!("{:.4}", q.x)).collect::<Vec<_>>().join(";");
            let ys = pos.iter().map(|q| format!("{:.4}", q.y)).collect::<Vec<_>>().join(";");
            let s = pos[0];
            let _ = writeln!(out, r#"<circle id="robot-{}" cx="{:.4}" cy="{:.4}" r="1" fill="{}">"#, p.id, s.x, s.y, colour(p.id, n));
            for (attr, vals) in [("cx", xs), ("cy", ys)] {
                let _ = writeln!(
                    out,
                    r#"<animate attributeName="{attr}" dur="{horizon:.3}s" repeatCount="indefinite" calcMode="linear" keyTimes="{key_times}" values="{vals}"/>"#
                );
            }
            let _ = writeln!(out, "</circle>");
        }
    }
    let _ = writeln!(out, "</g>\n</svg>");
    Ok(out)
}
