//! First Dirichlet eigenvalues by finite differences, compared with the
//! closed forms, and the ground state exported as PFUN.
//!
//! ```text
//! cargo run --release --example eigensolver [out.pfun]
//! ```

use std::f64::consts::PI;

use specpart::eigen::{smallest_eigs, to_pfun, SolverConfig};
use specpart::grid::{rasterize_shape, GridSpec};
use specpart::spectra::{eigenvalue, ModeIndex};
use specpart::ShapeKind;

fn main() -> specpart::Result<()> {
    let exact = 2.0 * PI * PI;
    let mut last = None;
    println!("square, λ_1 against 2π²");
    for n in [32, 64, 128, 256] {
        let mask = rasterize_shape(&GridSpec::new(ShapeKind::Square, n)?);
        let pair = &smallest_eigs(&mask, &SolverConfig::default())?[0];
        let err = (pair.value - exact).abs();
        let ratio = last.map_or(String::new(), |e: f64| format!("  ratio {:.2}", e / err));
        println!("  n = {n:>3}: {:.6}  error {err:.2e}{ratio}", pair.value);
        last = Some(err);
    }

    for shape in [ShapeKind::Disk, ShapeKind::Triangle] {
        let first = if shape == ShapeKind::Disk { ModeIndex::new(0, 1) } else { ModeIndex::new(1, 1) };
        let mask = rasterize_shape(&GridSpec::new(shape, 128)?);
        let pairs = smallest_eigs(&mask, &SolverConfig::with_count(4))?;
        let values: Vec<String> = pairs.iter().map(|p| format!("{:.3}", p.value)).collect();
        println!("{shape}, n = 128: [{}]  (exact λ_1 = {:.3})", values.join(", "), eigenvalue(shape, first)?);
    }

    if let Some(path) = std::env::args().nth(1) {
        let spec = GridSpec::new(ShapeKind::Disk, 64)?;
        let pair = &smallest_eigs(&rasterize_shape(&spec), &SolverConfig::default())?[0];
        std::fs::write(&path, to_pfun(&spec, &pair.vector))?;
        println!("wrote {path}");
    }
    Ok(())
}
