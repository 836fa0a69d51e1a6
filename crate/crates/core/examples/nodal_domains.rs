//! Nodal domains of discrete eigenfunctions and the numeric L_k, the
//! smallest eigenvalue whose eigenfunction has exactly k nodal domains.
//!
//! ```text
//! cargo run --release --example nodal_domains
//! ```

use specpart::eigen::{nodal_partition, numeric_lk, smallest_eigs, triangle_lk_column, SolverConfig};
use specpart::grid::{rasterize_shape, GridSpec};
use specpart::ShapeKind;

fn main() -> specpart::Result<()> {
    let mask = rasterize_shape(&GridSpec::new(ShapeKind::Disk, 48)?);
    let pairs = smallest_eigs(&mask, &SolverConfig::with_count(6))?;
    println!("disk, n = 48");
    for (i, pair) in pairs.iter().enumerate() {
        let (count, labels) = nodal_partition(pair, &mask);
        println!("  λ_{} = {:>7.3}: {count} nodal domains of sizes {:?}", i + 1, pair.value, labels.cell_sizes());
    }

    println!("\nsquare L_k at n = 64");
    for k in 1..=6 {
        match numeric_lk(ShapeKind::Square, k, 64, 24)?.value() {
            Some(v) => println!("  L_{k} ≈ {v:.2}"),
            None => println!("  L_{k}: no eigenfunction with {k} domains among the first 24"),
        }
    }

    println!("\ntriangle L_k at n = 96, snapped to exact eigenvalues");
    for (k, v) in triangle_lk_column(5, 96)?.into_iter().enumerate() {
        println!("  L_{} = {}", k + 1, v.map_or("not found".into(), |v| format!("{v:.2}")));
    }
    Ok(())
}
