//! The L²-mass test on an equalized curved partition and on a nodal
//! partition, where it must stay silent.
//!
//! ```text
//! cargo run --release --example mass_criterion [n]
//! ```

use specpart::criterion::{partition_test, DEFAULT_TOL_MASS};
use specpart::curved::{construct, equalize};
use specpart::eigen::{nodal_partition, smallest_eigs, SolverConfig};
use specpart::grid::{rasterize_shape, GridSpec};
use specpart::ShapeKind;

fn main() -> specpart::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(96);

    let eq = equalize(ShapeKind::Square, 3, n)?;
    let part = construct(ShapeKind::Square, 3, eq.ell, n)?;
    let report = partition_test(&part, DEFAULT_TOL_MASS)?;
    println!("square, k = 3, equalized at ℓ = {:.4}", eq.ell);
    for p in &report.pairs {
        println!("  cells {}-{}: masses {:.3} / {:.3} = {:.3}, nodal match {}", p.i, p.j, p.mass_i, p.mass_j, p.ratio(), p.nodal_match);
    }
    println!("  {}", report.verdict_line());

    // Four squares: the nodal partition of the (2,2) mode.
    let mask = rasterize_shape(&GridSpec::new(ShapeKind::Square, 64)?);
    let pairs = smallest_eigs(&mask, &SolverConfig::with_count(4))?;
    let (count, quads) = nodal_partition(&pairs[3], &mask);
    let report = partition_test(&quads, DEFAULT_TOL_MASS)?;
    let gap = report.pairs.iter().map(|p| (p.mass_i - p.mass_j).abs()).fold(0.0, f64::max);
    println!("\nsquare, nodal partition with {count} cells: largest mass gap {gap:.2e}");
    println!("  {}", report.verdict_line());
    Ok(())
}
