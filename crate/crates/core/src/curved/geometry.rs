use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

use crate::error::{Error, Result};
use crate::shape::ShapeKind;

pub type Point = (f64, f64);

/// Shortest admissible edge parameter.
pub const ELL_MIN: f64 = 0.01;

fn sub(a: Point, b: Point) -> Point {
    (a.0 - b.0, a.1 - b.1)
}

fn norm(a: Point) -> f64 {
    a.0.hypot(a.1)
}

fn polar(center: Point, r: f64, angle: f64) -> Point {
    (center.0 + r * angle.cos(), center.1 + r * angle.sin())
}

/// Wraps an angle into `(−π, π]`.
pub(crate) fn wrap_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// A boundary piece: straight segment or circular arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curve {
    Segment { from: Point, to: Point },
    /// Arc of radius `radius` around `center`, from polar angle `start`
    /// through the signed angle `sweep`.
    Arc { center: Point, radius: f64, start: f64, sweep: f64 },
}

impl Curve {
    /// Minor arc from `from` to `to` around `center`.
    pub fn arc_between(center: Point, from: Point, to: Point) -> Curve {
        let a = sub(from, center);
        let b = sub(to, center);
        let start = a.1.atan2(a.0);
        let sweep = wrap_angle(b.1.atan2(b.0) - start);
        Curve::Arc { center, radius: norm(a), start, sweep }
    }

    pub fn start_point(&self) -> Point {
        match *self {
            Curve::Segment { from, .. } => from,
            Curve::Arc { center, radius, start, .. } => polar(center, radius, start),
        }
    }

    pub fn end_point(&self) -> Point {
        match *self {
            Curve::Segment { to, .. } => to,
            Curve::Arc { center, radius, start, sweep } => polar(center, radius, start + sweep),
        }
    }

    pub fn reversed(&self) -> Curve {
        match *self {
            Curve::Segment { from, to } => Curve::Segment { from: to, to: from },
            Curve::Arc { center, radius, start, sweep } => Curve::Arc { center, radius, start: start + sweep, sweep: -sweep },
        }
    }

    /// Unit direction of travel at the start.
    pub fn start_direction(&self) -> f64 {
        match *self {
            Curve::Segment { from, to } => (to.1 - from.1).atan2(to.0 - from.0),
            Curve::Arc { start, sweep, .. } => start + sweep.signum() * FRAC_PI_2,
        }
    }

    /// Euclidean distance from `p` to the curve.
    pub fn distance(&self, p: Point) -> f64 {
        match *self {
            Curve::Segment { from, to } => {
                let d = sub(to, from);
                let len2 = d.0 * d.0 + d.1 * d.1;
                let t = if len2 == 0.0 { 0.0 } else { (((p.0 - from.0) * d.0 + (p.1 - from.1) * d.1) / len2).clamp(0.0, 1.0) };
                norm(sub(p, (from.0 + t * d.0, from.1 + t * d.1)))
            }
            Curve::Arc { center, radius, start, sweep } => {
                let v = sub(p, center);
                let rel = wrap_angle(v.1.atan2(v.0) - start);
                let inside = if sweep >= 0.0 {
                    let rel = if rel < 0.0 { rel + 2.0 * PI } else { rel };
                    rel <= sweep
                } else {
                    let rel = if rel > 0.0 { rel - 2.0 * PI } else { rel };
                    rel >= sweep
                };
                if inside {
                    (norm(v) - radius).abs()
                } else {
                    norm(sub(p, self.start_point())).min(norm(sub(p, self.end_point())))
                }
            }
        }
    }

    /// Signed angle the curve subtends as seen from `p`.
    pub fn subtended(&self, p: Point) -> f64 {
        match *self {
            Curve::Segment { from, to } => chord_angle(p, from, to),
            Curve::Arc { center, radius, start, sweep } => {
                let pieces = (sweep.abs() / FRAC_PI_2).ceil().max(1.0) as usize;
                let step = sweep / pieces as f64;
                (0..pieces)
                    .map(|i| {
                        let s = start + i as f64 * step;
                        let a = polar(center, radius, s);
                        let b = polar(center, radius, s + step);
                        let chord = chord_angle(p, a, b);
                        // Cross product sign: which side of the chord p lies on, relative to the centre.
                        let side = |q: Point| (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0);
                        let sp = side(p);
                        let sc = side(center);
                        let in_circle = norm(sub(p, center)) < radius;
                        if in_circle && sp * sc < 0.0 {
                            chord + 2.0 * PI * step.signum()
                        } else if in_circle && sp == 0.0 {
                            PI * step.signum()
                        } else {
                            chord
                        }
                    })
                    .sum()
            }
        }
    }

    fn sample(&self, count: usize) -> Vec<Point> {
        match *self {
            Curve::Segment { from, to } => (0..=count)
                .map(|i| {
                    let t = i as f64 / count as f64;
                    (from.0 + t * (to.0 - from.0), from.1 + t * (to.1 - from.1))
                })
                .collect(),
            Curve::Arc { center, radius, start, sweep } => {
                (0..=count).map(|i| polar(center, radius, start + sweep * i as f64 / count as f64)).collect()
            }
        }
    }
}

fn chord_angle(p: Point, a: Point, b: Point) -> f64 {
    let u = sub(a, p);
    let v = sub(b, p);
    (u.0 * v.1 - u.1 * v.0).atan2(u.0 * v.0 + u.1 * v.1)
}

/// Closed boundary of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub curves: Vec<Curve>,
}

impl Contour {
    /// Largest gap between consecutive curve endpoints.
    pub fn closure_gap(&self) -> f64 {
        let n = self.curves.len();
        (0..n)
            .map(|i| norm(sub(self.curves[i].end_point(), self.curves[(i + 1) % n].start_point())))
            .fold(0.0, f64::max)
    }

    pub fn winding(&self, p: Point) -> f64 {
        self.curves.iter().map(|c| c.subtended(p)).sum::<f64>() / (2.0 * PI)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.winding(p).abs() > 0.5
    }

    pub fn distance(&self, p: Point) -> f64 {
        self.curves.iter().map(|c| c.distance(p)).fold(f64::INFINITY, f64::min)
    }

    /// Axis-aligned box enclosing the contour.
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for c in &self.curves {
            for q in c.sample(32) {
                lo = (lo.0.min(q.0), lo.1.min(q.1));
                hi = (hi.0.max(q.0), hi.1.max(q.1));
            }
        }
        (lo, hi)
    }

    /// Enclosed area from the winding-free shoelace formula with arc segments.
    pub fn area(&self) -> f64 {
        let mut twice = 0.0;
        for c in &self.curves {
            match *c {
                Curve::Segment { from, to } => twice += from.0 * to.1 - to.0 * from.1,
                Curve::Arc { center, radius, start, sweep } => {
                    // ∮ x dy − y dx over the arc, in closed form.
                    let (cx, cy) = center;
                    let (s0, s1) = (start, start + sweep);
                    twice += radius * radius * sweep
                        + cx * radius * (s1.sin() - s0.sin())
                        - cy * radius * (s1.cos() - s0.cos());
                }
            }
        }
        (0.5 * twice).abs()
    }
}

/// The three tangent directions leaving an interior meeting point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriplePoint {
    pub point: Point,
    pub directions: [f64; 3],
}

impl TriplePoint {
    /// Largest deviation of the pairwise angular gaps from `2π/3`.
    pub fn angle_defect(&self) -> f64 {
        let mut d: Vec<f64> = self.directions.iter().map(|a| a.rem_euclid(2.0 * PI)).collect();
        d.sort_by(f64::total_cmp);
        let gaps = [d[1] - d[0], d[2] - d[1], 2.0 * PI - (d[2] - d[0])];
        gaps.iter().map(|g| (g - 2.0 * FRAC_PI_3).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionGeometry {
    pub shape: ShapeKind,
    pub cells: Vec<Contour>,
    pub triple_points: Vec<TriplePoint>,
}

impl PartitionGeometry {
    pub fn k(&self) -> usize {
        self.cells.len()
    }
}

/// Outcome of the sine-rule construction for apex angle `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SineRule {
    /// `θ = π/3`: the edge is a straight segment.
    Straight,
    Arc {
        radius: f64,
        /// Distance from the apex to the arc centre.
        ac: f64,
        /// `θ − π/3`; negative for inward arcs.
        arc_angle: f64,
        /// Arcs bulge away from the apex when `θ > π/3`.
        outward: bool,
    },
}

/// `ℓ / sin(θ/2 − π/6) = R / sin(θ/2) = AC / sin(π/6)`.
pub fn sine_rule(theta: f64, ell: f64) -> Result<SineRule> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Parameter(format!("apex angle {theta} outside (0, π)")));
    }
    if !(ell > 0.0) {
        return Err(Error::Parameter(format!("edge length {ell} must be positive")));
    }
    let d = (theta / 2.0 - FRAC_PI_6).sin();
    if d.abs() < 1e-12 {
        return Ok(SineRule::Straight);
    }
    Ok(SineRule::Arc {
        radius: (ell * (theta / 2.0).sin() / d).abs(),
        ac: (ell * FRAC_PI_6.sin() / d).abs(),
        arc_angle: theta - FRAC_PI_3,
        outward: theta > FRAC_PI_3,
    })
}

/// Parameters of an explicit construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvedPolygonSpec {
    pub k: usize,
    pub shape: ShapeKind,
    pub ell: f64,
    pub theta: f64,
    pub edge: SineRule,
}

impl CurvedPolygonSpec {
    pub fn new(shape: ShapeKind, k: usize, ell: f64) -> Result<Self> {
        let (theta, scale) = match (shape, k) {
            (ShapeKind::Disk, 6..=9) => (2.0 * PI / (k - 1) as f64, 1.0),
            // The central 4-gon's vertices sit at ℓ/2 from the square's centre.
            (ShapeKind::Square, 5) => (FRAC_PI_2, 0.5),
            (ShapeKind::Square, 3) => (2.0 * FRAC_PI_3, 1.0),
            _ => return Err(Error::Parameter(format!("no curved construction for k = {k} on the {shape}"))),
        };
        if !(ell >= ELL_MIN && ell < 1.0) {
            return Err(Error::Parameter(format!("ℓ = {ell} outside [{ELL_MIN}, 1)")));
        }
        let edge = if shape == ShapeKind::Square && k == 3 {
            SineRule::Arc { radius: 1.0, ac: f64::NAN, arc_angle: FRAC_PI_6, outward: true }
        } else {
            sine_rule(theta, ell * scale)?
        };
        Ok(CurvedPolygonSpec { k, shape, ell, theta, edge })
    }
}

/// Signed position of the arc centre along the edge bisector, measured from
/// the apex, for vertices at distance `r` and apex angle `θ`.
fn center_offset(theta: f64, r: f64, edge: SineRule) -> Option<f64> {
    match edge {
        SineRule::Straight => None,
        SineRule::Arc { radius, outward, .. } => {
            let signed = if outward { radius } else { -radius };
            let alpha = 2.0 * FRAC_PI_3 - theta / 2.0;
            Some(r * (theta / 2.0).cos() - signed * alpha.sin())
        }
    }
}

/// Central curved polygon around `origin` with `m` vertices at distance `r`,
/// first vertex at polar angle `phase`. Returns vertices and edges (vertex i → i+1).
fn central_polygon(origin: Point, m: usize, r: f64, phase: f64, edge: SineRule) -> (Vec<Point>, Vec<Curve>, Vec<f64>) {
    let theta = 2.0 * PI / m as f64;
    let vertices: Vec<Point> = (0..m).map(|i| polar(origin, r, phase + i as f64 * theta)).collect();
    let offset = center_offset(theta, r, edge);
    let mut extreme = Vec::with_capacity(m);
    let edges = (0..m)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % m]);
            let bis = phase + (i as f64 + 0.5) * theta;
            match (offset, edge) {
                (Some(cx), SineRule::Arc { radius, outward, .. }) => {
                    let center = polar(origin, cx, bis);
                    // Distance from the origin of the arc's midpoint.
                    extreme.push(if outward { cx + radius } else { cx - radius });
                    Curve::arc_between(center, a, b)
                }
                _ => {
                    extreme.push(r * (theta / 2.0).cos());
                    Curve::Segment { from: a, to: b }
                }
            }
        })
        .collect();
    (vertices, edges, extreme)
}

fn triple_at(point: Point, outgoing: [Curve; 3]) -> TriplePoint {
    TriplePoint { point, directions: outgoing.map(|c| c.start_direction()) }
}

/// Central curved `(k−1)`-gon with vertices at distance `ℓ` from the disk's
/// centre, plus `k−1` outer cells cut by radial segments.
pub fn build_disk_partition(k: usize, ell: f64) -> Result<PartitionGeometry> {
    let spec = CurvedPolygonSpec::new(ShapeKind::Disk, k, ell)?;
    let m = k - 1;
    let theta = spec.theta;
    let (vertices, edges, extreme) = central_polygon((0.0, 0.0), m, ell, 0.0, spec.edge);
    if extreme.iter().any(|&e| e >= 1.0 || e <= 0.0) {
        return Err(Error::Parameter(format!("ℓ = {ell}: the central polygon leaves the disk")));
    }
    let mut cells = vec![Contour { curves: edges.clone() }];
    for i in 0..m {
        let j = (i + 1) % m;
        let out_i = polar((0.0, 0.0), 1.0, i as f64 * theta);
        let out_j = polar((0.0, 0.0), 1.0, (i + 1) as f64 * theta);
        cells.push(Contour {
            curves: vec![
                Curve::Segment { from: vertices[i], to: out_i },
                Curve::Arc { center: (0.0, 0.0), radius: 1.0, start: i as f64 * theta, sweep: theta },
                Curve::Segment { from: out_j, to: vertices[j] },
                edges[i].reversed(),
            ],
        });
    }
    let triple_points = (0..m)
        .map(|i| {
            let prev = (i + m - 1) % m;
            triple_at(
                vertices[i],
                [
                    Curve::Segment { from: vertices[i], to: polar((0.0, 0.0), 1.0, i as f64 * theta) },
                    edges[i],
                    edges[prev].reversed(),
                ],
            )
        })
        .collect();
    Ok(PartitionGeometry { shape: ShapeKind::Disk, cells, triple_points })
}

/// `k = 3`: a segment of length `ℓ` up the symmetry axis from the bottom
/// midpoint, continued by two unit-radius arcs centred on the side walls.
/// `k = 5`: a central curved square (vertices toward the side midpoints at
/// distance `ℓ/2` from the centre) joined to the side midpoints.
pub fn build_square_partition(k: usize, ell: f64) -> Result<PartitionGeometry> {
    let spec = CurvedPolygonSpec::new(ShapeKind::Square, k, ell)?;
    match k {
        3 => square_three(ell),
        _ => square_five(ell, spec.edge),
    }
}

fn square_three(ell: f64) -> Result<PartitionGeometry> {
    let s = 3f64.sqrt() / 2.0;
    if ell >= s {
        return Err(Error::Parameter(format!("ℓ = {ell}: the arcs leave the square (need ℓ < √3/2)")));
    }
    let a = (0.5, 0.0);
    let b = (0.5, ell);
    let cy = ell - s;
    let top = cy + 1.0;
    let right = Curve::arc_between((1.0, cy), b, (1.0, top));
    let left = Curve::arc_between((0.0, cy), b, (0.0, top));
    let upper = Contour {
        curves: vec![
            right,
            Curve::Segment { from: (1.0, top), to: (1.0, 1.0) },
            Curve::Segment { from: (1.0, 1.0), to: (0.0, 1.0) },
            Curve::Segment { from: (0.0, 1.0), to: (0.0, top) },
            left.reversed(),
        ],
    };
    let lower_left = Contour {
        curves: vec![
            Curve::Segment { from: a, to: b },
            left,
            Curve::Segment { from: (0.0, top), to: (0.0, 0.0) },
            Curve::Segment { from: (0.0, 0.0), to: a },
        ],
    };
    let lower_right = Contour {
        curves: vec![
            Curve::Segment { from: (1.0, 0.0), to: (1.0, top) },
            right.reversed(),
            Curve::Segment { from: b, to: a },
            Curve::Segment { from: a, to: (1.0, 0.0) },
        ],
    };
    let triple = triple_at(b, [Curve::Segment { from: b, to: a }, right, left]);
    Ok(PartitionGeometry { shape: ShapeKind::Square, cells: vec![upper, lower_left, lower_right], triple_points: vec![triple] })
}

fn square_five(ell: f64, edge: SineRule) -> Result<PartitionGeometry> {
    let c = (0.5, 0.5);
    let d = ell / 2.0;
    let (vertices, edges, extreme) = central_polygon(c, 4, d, 0.0, edge);
    // Arc midpoints lie on the diagonals, which reach the corners at √2/2.
    if extreme.iter().any(|&e| e >= std::f64::consts::FRAC_1_SQRT_2) {
        return Err(Error::Parameter(format!("ℓ = {ell}: the central polygon leaves the square")));
    }
    let mids = [(1.0, 0.5), (0.5, 1.0), (0.0, 0.5), (0.5, 0.0)];
    let corners = [(1.0, 1.0), (0.0, 1.0), (0.0, 0.0), (1.0, 0.0)];
    let mut cells = vec![Contour { curves: edges.clone() }];
    for i in 0..4 {
        let j = (i + 1) % 4;
        cells.push(Contour {
            curves: vec![
                Curve::Segment { from: vertices[i], to: mids[i] },
                Curve::Segment { from: mids[i], to: corners[i] },
                Curve::Segment { from: corners[i], to: mids[j] },
                Curve::Segment { from: mids[j], to: vertices[j] },
                edges[i].reversed(),
            ],
        });
    }
    let triple_points = (0..4)
        .map(|i| {
            let prev = (i + 3) % 4;
            triple_at(vertices[i], [Curve::Segment { from: vertices[i], to: mids[i] }, edges[i], edges[prev].reversed()])
        })
        .collect();
    Ok(PartitionGeometry { shape: ShapeKind::Square, cells, triple_points })
}

/// Dispatches on the shape.
pub fn build_partition(shape: ShapeKind, k: usize, ell: f64) -> Result<PartitionGeometry> {
    match shape {
        ShapeKind::Disk => build_disk_partition(k, ell),
        ShapeKind::Square => build_square_partition(k, ell),
        ShapeKind::Triangle => Err(Error::Parameter("no curved construction for the triangle".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_rule_examples() {
        assert_eq!(sine_rule(FRAC_PI_3, 0.4).unwrap(), SineRule::Straight);
        match sine_rule(2.0 * FRAC_PI_3, 1.0).unwrap() {
            SineRule::Arc { radius, arc_angle, outward, .. } => {
                assert!((radius - 3f64.sqrt()).abs() < 1e-12);
                assert!((arc_angle - FRAC_PI_3).abs() < 1e-15);
                assert!(outward);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(sine_rule(PI / 4.0, 0.4).unwrap(), SineRule::Arc { outward: false, .. }));
        assert!(sine_rule(0.0, 1.0).is_err());
    }

    fn identity_residual(theta: f64, ell: f64) -> f64 {
        let SineRule::Arc { radius, ac, .. } = sine_rule(theta, ell).unwrap() else { return 0.0 };
        let d = (theta / 2.0 - FRAC_PI_6).sin().abs();
        let a = ell / d;
        let b = radius / (theta / 2.0).sin();
        let c = ac / FRAC_PI_6.sin();
        (a - b).abs().max((a - c).abs()) / a
    }

    #[test]
    fn sine_rule_identity_pentagon() {
        assert!(identity_residual(2.0 * PI / 5.0, 0.411) < 1e-12);
    }

    #[test]
    fn arc_centre_distance_matches_sine_rule() {
        for (k, ell) in [(6usize, 0.411), (8, 0.3975), (9, 0.3981)] {
            let theta = 2.0 * PI / (k - 1) as f64;
            let edge = sine_rule(theta, ell).unwrap();
            let SineRule::Arc { ac, .. } = edge else { panic!() };
            assert!((center_offset(theta, ell, edge).unwrap().abs() - ac).abs() < 1e-12);
        }
    }

    #[test]
    fn disk_constructions_close_and_meet_at_equal_angles() {
        for (k, ell) in [(6usize, 0.411), (7, 0.4), (8, 0.3975), (9, 0.3981)] {
            let g = build_disk_partition(k, ell).unwrap();
            assert_eq!(g.k(), k);
            for c in &g.cells {
                assert!(c.closure_gap() <= 1e-10);
            }
            for t in &g.triple_points {
                assert!(t.angle_defect() < 1e-8, "k={k} defect {}", t.angle_defect());
            }
            let total: f64 = g.cells.iter().map(|c| c.area()).sum();
            assert!((total - PI).abs() < 1e-10, "k={k} total area {total}");
        }
    }

    #[test]
    fn heptagon_case_is_straight() {
        let g = build_disk_partition(7, 0.4).unwrap();
        assert!(g.cells[0].curves.iter().all(|c| matches!(c, Curve::Segment { .. })));
    }

    #[test]
    fn square_constructions() {
        for (k, ell) in [(3usize, 0.4781), (5, 0.5093)] {
            let g = build_square_partition(k, ell).unwrap();
            assert_eq!(g.k(), k);
            for c in &g.cells {
                assert!(c.closure_gap() <= 1e-10);
            }
            for t in &g.triple_points {
                assert!(t.angle_defect() < 1e-8);
            }
            let total: f64 = g.cells.iter().map(|c| c.area()).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
        assert!(build_square_partition(3, 0.95).is_err());
        assert!(build_square_partition(4, 0.5).is_err());
    }

    #[test]
    fn degenerate_parameters_rejected() {
        assert!(build_disk_partition(9, 0.005).is_err());
        assert!(build_disk_partition(6, 1.5).is_err());
        assert!(build_disk_partition(5, 0.4).is_err());
    }

    #[test]
    fn winding_classifies_points() {
        let g = build_disk_partition(6, 0.411).unwrap();
        assert!(g.cells[0].contains((0.0, 0.0)));
        assert!(!g.cells[1].contains((0.0, 0.0)));
        let inside_outer = polar((0.0, 0.0), 0.8, 0.5 * 2.0 * PI / 5.0);
        assert!(g.cells[1].contains(inside_outer));
        assert!(!g.cells[0].contains(inside_outer));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn sine_rule_identity(theta in 0.05f64..3.0, ell in 0.01f64..1.0) {
                prop_assume!((theta - FRAC_PI_3).abs() > 1e-6);
                prop_assert!(identity_residual(theta, ell) <= 1e-12);
            }

            #[test]
            fn equal_angles_across_parameters(k in 6usize..10, ell in 0.2f64..0.45) {
                if let Ok(g) = build_disk_partition(k, ell) {
                    for t in &g.triple_points {
                        prop_assert!(t.angle_defect() < 1e-8);
                    }
                }
            }

            #[test]
            fn cells_tile_the_disk(k in 6usize..10, ell in 0.2f64..0.45, r in 0.0f64..0.99, a in 0.0f64..6.28) {
                if let Ok(g) = build_disk_partition(k, ell) {
                    let p = polar((0.0, 0.0), r, a);
                    prop_assume!(g.cells.iter().all(|c| c.distance(p) > 1e-6));
                    let hits = g.cells.iter().filter(|c| c.contains(p)).count();
                    prop_assert_eq!(hits, 1);
                }
            }
        }
    }
}
