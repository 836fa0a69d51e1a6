use std::f64::consts::PI;
use std::fmt::Write as _;

use super::geometry::{Curve, PartitionGeometry, Point};
use crate::grid::LabelGrid;
use crate::shape::ShapeKind;

const SIZE: f64 = 480.0;
const PAD: f64 = 10.0;

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// Math-space box of each shape: lower-left corner and side length.
fn frame(shape: ShapeKind) -> (Point, f64) {
    match shape {
        ShapeKind::Disk => ((-1.0, -1.0), 2.0),
        ShapeKind::Square | ShapeKind::Triangle => ((0.0, 0.0), 1.0),
    }
}

struct View {
    origin: Point,
    scale: f64,
}

impl View {
    fn new(shape: ShapeKind) -> Self {
        let (origin, side) = frame(shape);
        View { origin, scale: SIZE / side }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (PAD + (p.0 - self.origin.0) * self.scale, PAD + SIZE - (p.1 - self.origin.1) * self.scale)
    }
}

fn header(out: &mut String) {
    let total = SIZE + 2.0 * PAD;
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
}

/// Cells as filled paths: segments as lines, arcs as `A` commands.
pub fn geometry_svg(geometry: &PartitionGeometry) -> String {
    let view = View::new(geometry.shape);
    let mut out = String::new();
    header(&mut out);
    for (i, cell) in geometry.cells.iter().enumerate() {
        let mut d = String::new();
        if let Some(first) = cell.curves.first() {
            let (x, y) = view.map(first.start_point());
            let _ = write!(d, "M {x:.3} {y:.3}");
        }
        for c in &cell.curves {
            let (x, y) = view.map(c.end_point());
            match *c {
                Curve::Segment { .. } => {
                    let _ = write!(d, " L {x:.3} {y:.3}");
                }
                Curve::Arc { radius, sweep, .. } => {
                    let r = radius * view.scale;
                    let large = (sweep.abs() > PI) as u8;
                    // The y flip turns counter-clockwise into the positive SVG direction.
                    let positive = (sweep > 0.0) as u8;
                    let _ = write!(d, " A {r:.3} {r:.3} 0 {large} {positive} {x:.3} {y:.3}");
                }
            }
        }
        d.push_str(" Z");
        let _ = writeln!(out, r#"  <path d="{d}" fill="{}" fill-opacity="0.6" stroke="black" stroke-width="1"/>"#, color(i));
    }
    for t in &geometry.triple_points {
        let (x, y) = view.map(t.point);
        let _ = writeln!(out, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    out
}

/// One square per labelled node.
pub fn labels_svg(part: &LabelGrid) -> String {
    let spec = part.spec();
    let view = View::new(spec.shape);
    let cell = spec.h() * view.scale;
    let mut out = String::new();
    header(&mut out);
    for p in 0..spec.len() {
        let l = part.label(p);
        if l < 0 {
            continue;
        }
        let (x, y) = view.map(spec.coords(p));
        let _ = writeln!(
            out,
            r#"  <rect x="{:.3}" y="{:.3}" width="{cell:.3}" height="{cell:.3}" fill="{}"/>"#,
            x - cell / 2.0,
            y - cell / 2.0,
            color(l as usize)
        );
    }
    out.push_str("</svg>\n");
    out
}
