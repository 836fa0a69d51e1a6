use std::fmt::Write as _;

use rayon::prelude::*;

use super::geometry::build_partition;
use super::raster::rasterize_partition;
use crate::eigen::lambda1;
use crate::error::{Error, Result};
use crate::grid::{cell_mask, LabelGrid};
use crate::shape::ShapeKind;

/// Golden-section stopping width on `ℓ`.
pub const SWEEP_TOL: f64 = 1e-3;
/// Bisection stops once `|λ_1(D_1) − λ_1(D_2)|` falls below this.
pub const EQUALIZE_TOL: f64 = 1e-2;

const EIG_TOL: f64 = 1e-8;

/// Default search interval for `ℓ`.
pub fn default_bracket(shape: ShapeKind, k: usize) -> Result<(f64, f64)> {
    match (shape, k) {
        (ShapeKind::Disk, 6..=9) => Ok((0.3, 0.55)),
        (ShapeKind::Square, 3) => Ok((0.35, 0.65)),
        (ShapeKind::Square, 5) => Ok((0.4, 0.7)),
        _ => Err(Error::Parameter(format!("no curved construction for k = {k} on the {shape}"))),
    }
}

/// Default bracket for equalization, where the two cell classes cross.
pub fn default_equalize_bracket(shape: ShapeKind, k: usize) -> Result<(f64, f64)> {
    match (shape, k) {
        (ShapeKind::Disk, 6..=9) => Ok((0.3, 0.6)),
        (ShapeKind::Square, 3) => Ok((0.35, 0.7)),
        (ShapeKind::Square, 5) => Ok((0.4, 0.7)),
        _ => Err(Error::Parameter(format!("no curved construction for k = {k} on the {shape}"))),
    }
}

/// Rasterized construction at `ℓ`.
pub fn construct(shape: ShapeKind, k: usize, ell: f64, n: usize) -> Result<LabelGrid> {
    rasterize_partition(&build_partition(shape, k, ell)?, n)
}

fn cell_energy(part: &LabelGrid, i: usize) -> Result<f64> {
    lambda1(&cell_mask(part, i)?, EIG_TOL)
}

/// `λ_1` of every cell of the construction at `ℓ`.
pub fn cell_energies(shape: ShapeKind, k: usize, ell: f64, n: usize) -> Result<Vec<f64>> {
    let part = construct(shape, k, ell, n)?;
    (0..k).into_par_iter().map(|i| cell_energy(&part, i)).collect()
}

fn mean_energy(shape: ShapeKind, k: usize, ell: f64, n: usize) -> Result<f64> {
    Ok(cell_energies(shape, k, ell, n)?.iter().sum::<f64>() / k as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub ell: f64,
    pub energy: f64,
    /// Every evaluated `(ℓ, mean energy)`, in evaluation order.
    pub trace: Vec<(f64, f64)>,
    /// Final golden-section bracket.
    pub bracket: (f64, f64),
}

impl SweepResult {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("ell,energy\n");
        for (l, e) in &self.trace {
            let _ = writeln!(out, "{l:.6},{e:.6}");
        }
        out
    }
}

/// Minimizes `ℓ ↦ (1/k) Σ λ_1(cell_i(ℓ))` by golden-section search.
pub fn sweep(shape: ShapeKind, k: usize, lo: f64, hi: f64, n: usize) -> Result<SweepResult> {
    if !(lo < hi) {
        return Err(Error::Parameter(format!("empty bracket [{lo}, {hi}]")));
    }
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut trace = Vec::new();
    let eval = |ell: f64, trace: &mut Vec<(f64, f64)>| -> Result<f64> {
        let e = mean_energy(shape, k, ell, n)?;
        log::debug!("sweep {shape} k={k}: ℓ = {ell:.5} → {e:.5}");
        trace.push((ell, e));
        Ok(e)
    };
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = eval(x1, &mut trace)?;
    let mut f2 = eval(x2, &mut trace)?;
    while b - a > SWEEP_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = eval(x1, &mut trace)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = eval(x2, &mut trace)?;
        }
    }
    let (ell, energy) = trace
        .iter()
        .filter(|(l, _)| *l >= a && *l <= b)
        .cloned()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap_or(if f1 <= f2 { (x1, f1) } else { (x2, f2) });
    Ok(SweepResult { ell, energy, trace, bracket: (a, b) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EqualizeResult {
    pub ell: f64,
    /// Largest cell eigenvalue at `ell`: the max-energy candidate.
    pub lambda_common: f64,
    pub energies: Vec<f64>,
    /// `λ_1(D_1) − λ_1(D_2)` at `ell`.
    pub gap: f64,
}

/// Bisection on `ℓ` until the central cell `D_1` (label 0) and the repeated
/// cell `D_2` (label 1) have the same first eigenvalue.
pub fn equalize(shape: ShapeKind, k: usize, n: usize) -> Result<EqualizeResult> {
    let (lo, hi) = default_equalize_bracket(shape, k)?;
    equalize_in(shape, k, lo, hi, n)
}

pub fn equalize_in(shape: ShapeKind, k: usize, lo: f64, hi: f64, n: usize) -> Result<EqualizeResult> {
    let gap = |ell: f64| -> Result<f64> {
        let part = construct(shape, k, ell, n)?;
        let pair: Vec<f64> = [0usize, 1].par_iter().map(|&i| cell_energy(&part, i)).collect::<Result<_>>()?;
        Ok(pair[0] - pair[1])
    };
    let (mut a, mut b) = (lo, hi);
    let (ga, gb) = (gap(a)?, gap(b)?);
    if ga.signum() == gb.signum() {
        return Err(Error::NotBracketed(format!(
            "λ_1(D_1) − λ_1(D_2) is {ga:.4} at ℓ = {lo} and {gb:.4} at ℓ = {hi}"
        )));
    }
    let mut g_a = ga;
    let (mut best_ell, mut best_gap) = if ga.abs() < gb.abs() { (a, ga) } else { (b, gb) };
    while best_gap.abs() > EQUALIZE_TOL && b - a > 1e-9 {
        let m = 0.5 * (a + b);
        let gm = gap(m)?;
        if gm.abs() < best_gap.abs() {
            best_ell = m;
            best_gap = gm;
        }
        if gm.signum() == g_a.signum() {
            a = m;
            g_a = gm;
        } else {
            b = m;
        }
    }
    let energies = cell_energies(shape, k, best_ell, n)?;
    let lambda_common = energies.iter().cloned().fold(0.0, f64::max);
    Ok(EqualizeResult { ell: best_ell, lambda_common, energies, gap: best_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_bracket_holds_trace_minimum() {
        let r = sweep(ShapeKind::Square, 3, 0.35, 0.65, 32).unwrap();
        let best = r.trace.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
        assert_eq!(best, r.energy);
        assert!(r.trace.contains(&(r.ell, r.energy)));
        assert!(r.bracket.1 - r.bracket.0 <= SWEEP_TOL);
        assert!(r.trace_csv().starts_with("ell,energy\n"));
    }

    #[test]
    fn rejects_unknown_constructions() {
        assert!(default_bracket(ShapeKind::Triangle, 3).is_err());
        assert!(sweep(ShapeKind::Disk, 6, 0.5, 0.4, 32).is_err());
    }

    #[test]
    fn equalize_needs_a_sign_change() {
        assert!(matches!(equalize_in(ShapeKind::Disk, 6, 0.3, 0.31, 24), Err(Error::NotBracketed(_))));
    }

    #[test]
    fn outer_cells_agree() {
        let e = cell_energies(ShapeKind::Disk, 6, 0.411, 64).unwrap();
        let outer = &e[1..];
        let mean = outer.iter().sum::<f64>() / outer.len() as f64;
        assert!(outer.iter().all(|v| (v - mean).abs() < 0.01 * mean));
    }
}
