//! Uniform grids over the reference shapes, node masks, labelled partitions
//! and connected components.
//!
//! Nodes are stored row-major: index `row * cols + col`, with `col` along
//! `x` and `row` along `y`. Every grid carries at least one layer of nodes
//! outside (or on the boundary of) its shape, so an interior node never sits
//! on the array edge.

mod components;
mod labels;

pub use components::{components, components_in};
pub use labels::{adjacency, cell_mask, union_mask, LabelGrid};
pub(crate) use labels::spec_from_dims;

use crate::error::{Error, Result};
use crate::shape::ShapeKind;

/// Smallest accepted resolution (points per unit length).
pub const MIN_RESOLUTION: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub shape: ShapeKind,
    /// Points per unit length; the spacing is `1/n`.
    pub n: usize,
    /// Coordinates of node `(0, 0)`.
    pub origin: (f64, f64),
    pub rows: usize,
    pub cols: usize,
}

impl GridSpec {
    pub fn new(shape: ShapeKind, n: usize) -> Result<Self> {
        if n < MIN_RESOLUTION {
            return Err(Error::Resolution { n, min: MIN_RESOLUTION });
        }
        let (origin, rows, cols) = match shape {
            ShapeKind::Square => ((0.0, 0.0), n + 1, n + 1),
            ShapeKind::Disk => ((-1.0, -1.0), 2 * n + 1, 2 * n + 1),
            ShapeKind::Triangle => ((0.0, 0.0), (3f64.sqrt() / 2.0 * n as f64).floor() as usize + 2, n + 1),
        };
        Ok(GridSpec { shape, n, origin, rows, cols })
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn row_col(&self, index: usize) -> (usize, usize) {
        (index / self.cols, index % self.cols)
    }

    pub fn coords(&self, index: usize) -> (f64, f64) {
        let (r, c) = self.row_col(index);
        let h = self.h();
        (self.origin.0 + c as f64 * h, self.origin.1 + r as f64 * h)
    }

    /// The 4-neighbours of a node that lie on the grid.
    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> {
        let (r, c) = self.row_col(index);
        let cols = self.cols;
        let rows = self.rows;
        [
            (r > 0).then(|| index - cols),
            (r + 1 < rows).then(|| index + cols),
            (c > 0).then(|| index - 1),
            (c + 1 < cols).then(|| index + 1),
        ]
        .into_iter()
        .flatten()
    }
}

/// Node indicator on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    pub spec: GridSpec,
    bits: Vec<bool>,
}

impl Mask {
    pub fn empty(spec: GridSpec) -> Self {
        Mask { spec, bits: vec![false; spec.len()] }
    }

    pub fn from_bits(spec: GridSpec, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != spec.len() {
            return Err(Error::Domain(format!("mask has {} nodes, grid has {}", bits.len(), spec.len())));
        }
        Ok(Mask { spec, bits })
    }

    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(usize) -> bool) -> Self {
        Mask { spec, bits: (0..spec.len()).map(&mut f).collect() }
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.bits[index] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    /// Node count times `h²`.
    pub fn area(&self) -> f64 {
        let h = self.spec.h();
        self.count() as f64 * h * h
    }

    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.bits.len() == other.bits.len() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn union(&self, other: &Mask) -> Mask {
        Mask { spec: self.spec, bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| a || b).collect() }
    }
}

/// Nodes strictly inside the grid's shape.
pub fn rasterize_shape(spec: &GridSpec) -> Mask {
    Mask::from_fn(*spec, |i| {
        let (x, y) = spec.coords(i);
        spec.shape.contains(x, y)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_n4_has_nine_interior_nodes() {
        let spec = GridSpec::new(ShapeKind::Square, 4).unwrap();
        let mask = rasterize_shape(&spec);
        assert_eq!(mask.count(), 9);
        for i in mask.indices() {
            let (r, c) = spec.row_col(i);
            assert!((1..=3).contains(&r) && (1..=3).contains(&c));
        }
    }

    #[test]
    fn low_resolution_rejected() {
        assert!(matches!(GridSpec::new(ShapeKind::Disk, 3), Err(Error::Resolution { n: 3, min: 4 })));
    }

    #[test]
    fn boundary_layer_is_exterior() {
        for shape in ShapeKind::ALL {
            let spec = GridSpec::new(shape, 37).unwrap();
            let mask = rasterize_shape(&spec);
            for i in mask.indices() {
                let (r, c) = spec.row_col(i);
                assert!(r > 0 && c > 0 && r + 1 < spec.rows && c + 1 < spec.cols, "{shape}");
            }
        }
    }

    #[test]
    fn areas_converge_linearly() {
        for shape in ShapeKind::ALL {
            let exact = shape.area();
            for n in [64, 128, 256] {
                let spec = GridSpec::new(shape, n).unwrap();
                let err = (rasterize_shape(&spec).area() - exact).abs();
                // Perimeter times h bounds the node-inclusion defect.
                assert!(err <= 7.0 / n as f64, "{shape} n={n} err={err}");
            }
        }
    }

    #[test]
    fn neighbors_stay_on_grid() {
        let spec = GridSpec::new(ShapeKind::Square, 4).unwrap();
        assert_eq!(spec.neighbors(0).count(), 2);
        assert_eq!(spec.neighbors(spec.index(2, 2)).count(), 4);
        assert_eq!(spec.neighbors(spec.index(0, 2)).count(), 3);
    }
}
