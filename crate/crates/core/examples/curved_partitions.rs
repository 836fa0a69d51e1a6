//! Curved-polygon partitions: the geometry at a given ℓ, the sweep over ℓ
//! minimizing the mean energy, and the ℓ equalizing the cells.
//!
//! ```text
//! cargo run --release --example curved_partitions [shape] [k] [n]
//! ```

use specpart::curved::{build_partition, cell_energies, default_bracket, equalize, sweep};
use specpart::ShapeKind;

fn main() -> specpart::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let shape: ShapeKind = args.first().map_or(Ok(ShapeKind::Disk), |s| s.parse())?;
    let k: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let n: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(96);

    let (lo, hi) = default_bracket(shape, k)?;
    let geometry = build_partition(shape, k, 0.5 * (lo + hi))?;
    println!("{shape}, k = {k}: {} cells, {} triple points", geometry.k(), geometry.triple_points.len());
    for (i, cell) in geometry.cells.iter().enumerate() {
        println!("  cell {i}: {} curves, area {:.4}", cell.curves.len(), cell.area());
    }
    let worst = geometry.triple_points.iter().map(|t| t.angle_defect()).fold(0.0, f64::max);
    println!("  largest deviation from 120° at a triple point: {worst:.2e} rad");

    let s = sweep(shape, k, lo, hi, n)?;
    println!("\nsweep on [{lo}, {hi}] at n = {n}: ℓ = {:.4}, mean energy {:.3} ({} evaluations)", s.ell, s.energy, s.trace.len());
    let energies = cell_energies(shape, k, s.ell, n)?;
    let listed: Vec<String> = energies.iter().map(|e| format!("{e:.2}")).collect();
    println!("  cell energies [{}]", listed.join(", "));

    let eq = equalize(shape, k, n)?;
    println!("\nequalized at ℓ = {:.4}: common λ_1 {:.3}, remaining gap {:.1e}", eq.ell, eq.lambda_common, eq.gap);
    Ok(())
}
