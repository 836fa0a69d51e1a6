//! Relaxed density optimization of `k`-partitions.
//!
//! Each cell is a density `φ_i ∈ [0, 1]` with `Σ φ_i = 1`, and `λ_1(D_i)` is
//! replaced by the ground eigenvalue of `−Δ + C(1 − φ_i)`. The energy
//! `((1/k) Σ λ_i^p)^{1/p}` gives the mean at `p = 1` and approaches the max
//! as `p` grows.

mod config;
mod optimize;
mod state;

pub use config::{OptimizerConfig, MAX_MODE_SCHEDULE};
pub use optimize::{energy, gradient, optimize, optimize_seeds, p_norm, sharp_energies, EnergyReport};
pub use state::{project, project_point, sharpen, PartitionState};
