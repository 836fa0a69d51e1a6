//! Relaxed density optimization of a k-partition, sharpened by argmax.
//!
//! ```text
//! cargo run --release --example relaxed_optimizer [shape] [k] [n] [max]
//! ```
//!
//! Writes `optimized.plbl` and `optimized.csv` in the working directory.

use specpart::relaxed::{optimize, sharpen, OptimizerConfig};
use specpart::ShapeKind;

fn main() -> specpart::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let shape: ShapeKind = args.first().map_or(Ok(ShapeKind::Square), |s| s.parse())?;
    let k: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let n: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(64);

    let mut config = OptimizerConfig::new(shape, k);
    config.n = n;
    config.coarse_levels = vec![32];
    if args.get(3).is_some_and(|s| s == "max") {
        config = config.max_mode();
    }
    let (state, report) = optimize(&config, None)?;
    let part = sharpen(&state)?;

    println!("{shape}, k = {k}, n = {n}, {} iterations", report.history.len());
    println!("relaxed energy {:.4}", report.relaxed_energy);
    println!("sharpened: mean {:.4}, max {:.4}", report.sharp_mean, report.sharp_max);
    for (i, e) in report.sharp_energies.iter().enumerate() {
        println!("  cell {i}: λ_1 = {e:.4} ({} nodes)", part.cell_size(i));
    }
    std::fs::write("optimized.plbl", part.to_plbl())?;
    std::fs::write("optimized.csv", report.to_csv())?;
    Ok(())
}
