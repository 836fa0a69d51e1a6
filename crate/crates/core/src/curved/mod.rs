//! Explicit partitions built from curved regular polygons.

mod geometry;
mod raster;
mod search;
mod svg;

pub use geometry::*;
pub use raster::rasterize_partition;
pub use search::*;
pub use svg::{geometry_svg, labels_svg};
