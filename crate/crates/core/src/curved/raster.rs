use rayon::prelude::*;

use super::geometry::{Point, PartitionGeometry};
use crate::error::Result;
use crate::grid::{rasterize_shape, GridSpec, LabelGrid};

/// Labels each interior node with the cell whose contour winds around it.
///
/// Nodes within `h/100` of the boundaries of two different cells, or not
/// claimed by exactly one cell, are labelled −1.
pub fn rasterize_partition(geometry: &PartitionGeometry, n: usize) -> Result<LabelGrid> {
    let spec = GridSpec::new(geometry.shape, n)?;
    let inside = rasterize_shape(&spec);
    let tol = spec.h() / 100.0;
    let boxes: Vec<(Point, Point)> = geometry
        .cells
        .iter()
        .map(|c| {
            let (lo, hi) = c.bounds();
            ((lo.0 - 2.0 * tol, lo.1 - 2.0 * tol), (hi.0 + 2.0 * tol, hi.1 + 2.0 * tol))
        })
        .collect();
    let labels: Vec<i32> = (0..spec.len())
        .into_par_iter()
        .map(|p| {
            if !inside.get(p) {
                return -1;
            }
            let q = spec.coords(p);
            let mut near = 0;
            let mut owner = None;
            let mut owners = 0;
            for (i, cell) in geometry.cells.iter().enumerate() {
                let (lo, hi) = boxes[i];
                if q.0 < lo.0 || q.0 > hi.0 || q.1 < lo.1 || q.1 > hi.1 {
                    continue;
                }
                if cell.distance(q) < tol {
                    near += 1;
                }
                if cell.contains(q) {
                    owners += 1;
                    owner = Some(i);
                }
            }
            match owner {
                Some(i) if owners == 1 && near < 2 => i as i32,
                _ => -1,
            }
        })
        .collect();
    LabelGrid::new(spec, geometry.k(), labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curved::geometry::{build_disk_partition, build_square_partition};
    use crate::grid::adjacency;

    #[test]
    fn square_three_structure() {
        let g = build_square_partition(3, 0.4781).unwrap();
        let part = rasterize_partition(&g, 64).unwrap();
        assert_eq!(part.k(), 3);
        assert_eq!(adjacency(&part), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn disk_six_structure() {
        let g = build_disk_partition(6, 0.411).unwrap();
        let part = rasterize_partition(&g, 64).unwrap();
        let adj = adjacency(&part);
        for i in 1..6 {
            assert!(adj.contains(&(0, i)));
            let j = if i == 5 { 1 } else { i + 1 };
            assert!(adj.contains(&(i.min(j), i.max(j))));
        }
        assert_eq!(adj.len(), 10);
        let h = part.spec().h();
        let central = part.cell_size(0) as f64 * h * h;
        assert!(central < std::f64::consts::PI / 6.0);
        assert!((central - g.cells[0].area()).abs() < 0.02);
    }

    #[test]
    fn nodes_cover_the_shape() {
        let g = build_disk_partition(9, 0.3981).unwrap();
        let part = rasterize_partition(&g, 48).unwrap();
        let inside = rasterize_shape(part.spec());
        let tol = part.spec().h() / 100.0;
        for p in inside.indices().filter(|&p| part.label(p) < 0) {
            let q = part.spec().coords(p);
            assert!(g.cells.iter().any(|c| c.distance(q) < tol), "node {q:?} unlabelled");
        }
    }
}
