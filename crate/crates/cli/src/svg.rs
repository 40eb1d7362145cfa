//! SVG renderer for lifted realizations.
//!
//! Geometry is drawn in framework coordinates inside one scaled group, so the
//! mirror symmetry survives into the file verbatim: the two lifted copies of
//! vertex `i` are circles `v{i}_0` and `v{i}_1` whose `cx` values are the
//! exact negation of each other. Edge labels live in an unscaled overlay so
//! the text stays a readable size.

use num::ToPrimitive;
use refrig_core::graph::LiftVertex;
use refrig_core::{ColoredGraph, Vec2, Q};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const PAD: f64 = 48.0;

fn approx(q: &Q) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

fn lifted_x(world: &[(f64, f64)], v: &LiftVertex) -> f64 {
    let x = world[v.vertex].0;
    if v.sheet.is_identity() {
        x
    } else {
        -x
    }
}

pub fn document(g: &ColoredGraph, points: &[Vec2]) -> String {
    use std::fmt::Write as _;

    assert_eq!(points.len(), g.vertex_count());
    let world: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (approx(&p.x), approx(&p.y)))
        .collect();

    // Bounds over both sheets; the mirror line x = 0 is always in frame.
    let mut min_x: f64 = 0.0;
    let mut max_x: f64 = 0.0;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for &(x, y) in &world {
        min_x = min_x.min(x).min(-x);
        max_x = max_x.max(x).max(-x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    if !min_y.is_finite() {
        min_y = 0.0;
        max_y = 0.0;
    }
    // Collapsed drawings still need a nonzero extent.
    if max_x - min_x < 1.0 {
        let grow = (1.0 - (max_x - min_x)) / 2.0;
        min_x -= grow;
        max_x += grow;
    }
    if max_y - min_y < 1.0 {
        let grow = (1.0 - (max_y - min_y)) / 2.0;
        min_y -= grow;
        max_y += grow;
    }

    let scale = ((WIDTH - 2.0 * PAD) / (max_x - min_x)).min((HEIGHT - 2.0 * PAD) / (max_y - min_y));
    let tx = WIDTH / 2.0 - scale * (min_x + max_x) / 2.0;
    let ty = HEIGHT / 2.0 + scale * (min_y + max_y) / 2.0;
    let stroke = 1.5 / scale;
    let radius = 4.0 / scale;
    let dash = 6.0 / scale;

    let lift = g.lift();
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <g transform="translate({tx} {ty}) scale({scale} -{scale})">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"    <line x1="0" y1="{min_y}" x2="0" y2="{max_y}" stroke="gray" stroke-width="{stroke}" stroke-dasharray="{dash} {dash}"/>"#
    )
    .unwrap();
    for edge in lift.edges() {
        for (a, b) in &edge.copies {
            let x1 = lifted_x(&world, a);
            let y1 = world[a.vertex].1;
            let x2 = lifted_x(&world, b);
            let y2 = world[b.vertex].1;
            writeln!(
                out,
                r#"    <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="{stroke}"/>"#
            )
            .unwrap();
        }
    }
    for (i, &(x, y)) in world.iter().enumerate() {
        let negated = -x;
        writeln!(
            out,
            r#"    <circle id="v{i}_0" cx="{x}" cy="{y}" r="{radius}" fill="black"/>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"    <circle id="v{i}_1" cx="{negated}" cy="{y}" r="{radius}" fill="black"/>"#
        )
        .unwrap();
    }
    writeln!(out, "  </g>").unwrap();
    writeln!(
        out,
        r#"  <g font-family="sans-serif" font-size="12" fill="dimgray">"#
    )
    .unwrap();
    for edge in lift.edges() {
        for (a, b) in &edge.copies {
            let mid_x = (lifted_x(&world, a) + lifted_x(&world, b)) / 2.0;
            let mid_y = (world[a.vertex].1 + world[b.vertex].1) / 2.0;
            let label_x = tx + scale * mid_x;
            let label_y = ty - scale * mid_y;
            writeln!(
                out,
                r#"    <text x="{label_x}" y="{label_y}">{}</text>"#,
                edge.quotient_edge
            )
            .unwrap();
        }
    }
    writeln!(out, "  </g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    out
}
