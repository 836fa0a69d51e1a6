//! SVG drawings of curved constructions and of rasterized partitions.
//!
//! ```text
//! cargo run --release --example render_svg [out_dir]
//! ```

use std::path::PathBuf;

use specpart::curved::{build_partition, geometry_svg, labels_svg, rasterize_partition};
use specpart::ShapeKind;

fn main() -> specpart::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    let cases = [
        (ShapeKind::Disk, 6, 0.411),
        (ShapeKind::Disk, 8, 0.3975),
        (ShapeKind::Disk, 9, 0.3981),
        (ShapeKind::Square, 3, 0.4781),
        (ShapeKind::Square, 5, 0.5093),
    ];
    for (shape, k, ell) in cases {
        let geometry = build_partition(shape, k, ell)?;
        let name = format!("{}_{k}", shape.name());
        let curves = dir.join(format!("{name}.svg"));
        let raster = dir.join(format!("{name}_grid.svg"));
        std::fs::write(&curves, geometry_svg(&geometry))?;
        std::fs::write(&raster, labels_svg(&rasterize_partition(&geometry, 64)?))?;
        println!("{} and {}", curves.display(), raster.display());
    }
    Ok(())
}
