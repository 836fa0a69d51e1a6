//! Closed-form spectra, the lower and upper bounds on the optimal energies,
//! and the sector energies for odd k.
//!
//! ```text
//! cargo run --release --example spectra_tables [k_max]
//! ```

use specpart::spectra::{bounds_table, bounds_text, sector_eigenvalue, spectrum, NodalCount, TriangleLk};
use specpart::ShapeKind;

fn main() -> specpart::Result<()> {
    let k_max: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);

    for shape in ShapeKind::ALL {
        println!("{}", bounds_text(shape, &bounds_table(shape, k_max, TriangleLk::Skip)?));
    }

    println!("first disk modes");
    for e in spectrum(ShapeKind::Disk, 6)? {
        let nodal = match e.nodal_count {
            NodalCount::Known(c) => c.to_string(),
            NodalCount::Unknown => "?".into(),
        };
        println!("  j({},{})^2 = {:>8.4}  multiplicity {}  nodal domains {}", e.mode.m, e.mode.n, e.value, e.multiplicity, nodal);
    }

    println!("\nk equal sectors of the disk");
    for k in [3, 5, 7, 9] {
        println!("  k = {k}: {:.2}", sector_eigenvalue(k)?);
    }
    Ok(())
}
