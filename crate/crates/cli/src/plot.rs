//! Hand-written SVG: a route map and battery level over the day.

use std::fmt::Write;

use evrptw_core::verify::RouteTrace;
use evrptw_core::{Action, Instance, NodeKind, Solution};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];
const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

fn color(k: usize) -> &'static str {
    PALETTE[k % PALETTE.len()]
}

/// Nodes by kind (depot square, customer circle, station triangle) and one
/// polyline per route.
pub fn route_map_svg(inst: &Instance, sol: &Solution) -> String {
    let nodes = inst.nodes();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for n in nodes {
        x0 = x0.min(n.x);
        x1 = x1.max(n.x);
        y0 = y0.min(n.y);
        y1 = y1.max(n.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let px = |x: f64| MARGIN + (x - x0) * scale;
    // SVG y grows downwards.
    let py = |y: f64| SIZE - MARGIN - (y - y0) * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, route) in sol.routes.iter().enumerate() {
        let pts: Vec<String> = route
            .nodes
            .iter()
            .map(|&id| format!("{:.1},{:.1}", px(inst.node(id).x), py(inst.node(id).y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            pts.join(" "),
            color(k)
        );
    }
    for (id, n) in nodes.iter().enumerate() {
        let (x, y) = (px(n.x), py(n.y));
        match n.kind {
            NodeKind::DepotStart => {
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.1}" y="{:.1}" width="12" height="12" fill="black"/>"#,
                    x - 6.0,
                    y - 6.0
                );
            }
            NodeKind::DepotEnd => {}
            NodeKind::Customer => {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{x:.1}" cy="{y:.1}" r="5" fill="white" stroke="black"/><text x="{:.1}" y="{:.1}" font-size="10">{}</text>"#,
                    x + 6.0,
                    y - 6.0,
                    id
                );
            }
            NodeKind::Station => {
                let _ = writeln!(
                    out,
                    r#"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="green"/>"#,
                    x,
                    y - 7.0,
                    x - 6.0,
                    y + 5.0,
                    x + 6.0,
                    y + 5.0
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Battery level (charge minutes) against time for one route: linear use
/// while driving, one δ step per charge or discharge period.
pub fn battery_points(
    inst: &Instance,
    sol: &Solution,
    k: usize,
    trace: &RouteTrace,
) -> Vec<(f64, f64)> {
    let delta = inst.delta();
    let route = &sol.routes[k];
    let mut pts = Vec::new();
    for p in 0..route.len() {
        let mut level = trace.battery[p];
        pts.push((trace.arrival[p], level));
        if let Some(acts) = sol.plans.get(k).and_then(|plan| plan.visits.get(p)) {
            let mut acts = acts.clone();
            acts.sort();
            for (t, a) in acts {
                let start = (t - 1) as f64 * delta;
                let change = match a {
                    Action::Charge => delta,
                    Action::Discharge => -delta,
                    Action::Idle => 0.0,
                };
                pts.push((start, level));
                level += change;
                pts.push((start + delta, level));
            }
        }
        if p + 1 < route.len() {
            pts.push((trace.departure[p], level));
        }
    }
    pts
}

/// One step chart per route, stacked vertically.
pub fn battery_svg(inst: &Instance, sol: &Solution, traces: &[RouteTrace]) -> String {
    let full = inst.full_charge();
    let horizon = inst.horizon();
    let (w, h, gap) = (SIZE, 160.0, 30.0);
    let height = (h + gap) * traces.len().max(1) as f64 + gap;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{height}" viewBox="0 0 {w} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, trace) in traces.iter().enumerate() {
        let top = gap + k as f64 * (h + gap);
        let px = |t: f64| MARGIN + t / horizon * (w - 2.0 * MARGIN);
        let py = |b: f64| top + h - b / full * h;
        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN}" y="{top}" width="{}" height="{h}" fill="none" stroke="gray"/><text x="{MARGIN}" y="{}" font-size="11">vehicle {k}</text>"#,
            w - 2.0 * MARGIN,
            top - 5.0
        );
        let pts: Vec<String> = battery_points(inst, sol, k, trace)
            .iter()
            .map(|&(t, b)| format!("{:.1},{:.1}", px(t), py(b)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            pts.join(" "),
            color(k)
        );
    }
    out.push_str("</svg>\n");
    out
}
