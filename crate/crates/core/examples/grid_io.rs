//! Grids, masks and label files: rasterization, connected components,
//! adjacency and the PLBL / PFUN text formats.
//!
//! ```text
//! cargo run --release --example grid_io
//! ```

use specpart::eigen::{from_pfun, to_pfun};
use specpart::grid::{adjacency, components_in, rasterize_shape, GridSpec, LabelGrid, Mask};
use specpart::ShapeKind;

fn main() -> specpart::Result<()> {
    for shape in ShapeKind::ALL {
        let spec = GridSpec::new(shape, 64)?;
        let mask = rasterize_shape(&spec);
        println!("{shape}: {}x{} nodes, {} interior, area {:.4} (exact {:.4})", spec.rows, spec.cols, mask.count(), mask.area(), shape.area());
    }

    // Two disks of nodes inside the square, then as a two-cell partition.
    let spec = GridSpec::new(ShapeKind::Square, 32)?;
    let blobs = Mask::from_fn(spec, |p| {
        let (x, y) = spec.coords(p);
        (x - 0.3).hypot(y - 0.5) < 0.15 || (x - 0.7).hypot(y - 0.5) < 0.15
    });
    let (count, labels) = components_in(&blobs);
    println!("\n{count} components in the two-blob mask");

    let inside = rasterize_shape(&spec);
    let halves: Vec<i32> = (0..spec.len()).map(|p| if inside.get(p) { (spec.coords(p).0 > 0.5) as i32 } else { -1 }).collect();
    let part = LabelGrid::new(spec, 2, halves)?;
    println!("halves: cell sizes {:?}, adjacent pairs {:?}", part.cell_sizes(), adjacency(&part));

    let text = part.to_plbl();
    let back = LabelGrid::from_plbl(&text)?;
    println!("PLBL round trip preserved labels: {}", back.labels() == part.labels());
    println!("PLBL header: {}", text.lines().next().unwrap_or(""));

    let field: Vec<f64> = (0..spec.len()).map(|p| labels.label(p) as f64).collect();
    let (spec_back, values) = from_pfun(&to_pfun(&spec, &field))?;
    println!("PFUN round trip: {}x{}, equal values: {}", spec_back.rows, spec_back.cols, values == field);
    Ok(())
}
