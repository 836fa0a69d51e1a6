//! The L²-mass test for sum-minimality.
//!
//! Take two neighbouring cells `D_i`, `D_j` of an equipartition and the
//! second eigenfunction `φ_2` of their union. If `D_i` and `D_j` are the
//! nodal domains of `φ_2` but `φ_2` carries different `L²` mass on them,
//! moving the common boundary lowers `λ_1(D_i) + λ_1(D_j)`, so the
//! partition cannot minimize the sum.

use std::fmt::Write as _;

use crate::eigen::{l2_mass, smallest_eigs, SolverConfig};
use crate::error::{Error, Result};
use crate::grid::{adjacency, cell_mask, union_mask, LabelGrid};
use crate::relaxed::sharp_energies;

pub const DEFAULT_TOL_MASS: f64 = 0.05;
/// Share of a cell's nodes that must carry one sign of `φ_2`.
pub const NODAL_MATCH_SHARE: f64 = 0.95;
/// Largest accepted spread of the cells' `λ_1`, relative to their mean.
pub const EQUIPARTITION_RTOL: f64 = 0.02;
const GAP_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairResult {
    pub i: usize,
    pub j: usize,
    /// Masses on `D_i` and `D_j`, normalized to sum to one.
    pub mass_i: f64,
    pub mass_j: f64,
    pub nodal_match: bool,
}

impl PairResult {
    pub fn ratio(&self) -> f64 {
        self.mass_i / self.mass_j
    }

    fn disqualifies(&self, tol: f64) -> bool {
        self.nodal_match && (self.mass_i - self.mass_j).abs() > tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Disqualified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub pairs: Vec<PairResult>,
    /// Pairs whose second eigenvalue was numerically degenerate.
    pub skipped: Vec<(usize, usize)>,
    pub verdict: Verdict,
    pub tolerance: f64,
}

impl CriterionReport {
    /// `i,j,mass_i,mass_j,nodal_match` rows followed by a verdict line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,mass_i,mass_j,nodal_match\n");
        for p in &self.pairs {
            let _ = writeln!(out, "{},{},{:.6},{:.6},{}", p.i, p.j, p.mass_i, p.mass_j, p.nodal_match);
        }
        out.push_str(&self.verdict_line());
        out.push('\n');
        out
    }

    pub fn verdict_line(&self) -> String {
        match self.verdict {
            Verdict::Disqualified => format!("# verdict: disqualified (mass gap above {})", self.tolerance),
            Verdict::Inconclusive => format!("# verdict: inconclusive (tolerance {})", self.tolerance),
        }
    }
}

/// Masses of the second eigenfunction of `Int(D̄_i ∪ D̄_j)` on both cells.
///
/// Returns `None` (with a warning) when the second eigenvalue is degenerate.
pub fn pair_test(part: &LabelGrid, i: usize, j: usize) -> Result<Option<PairResult>> {
    let union = union_mask(part, i, j)?;
    let count = 3.min(union.count());
    if count < 2 {
        return Err(Error::Domain(format!("union of cells {i} and {j} is too small")));
    }
    let pairs = smallest_eigs(&union, &SolverConfig::with_count(count))?;
    let l2 = pairs[1].value;
    let close = |v: f64| (v - l2).abs() <= GAP_RTOL * l2;
    if close(pairs[0].value) || pairs.get(2).is_some_and(|p| close(p.value)) {
        log::warn!("cells {i}, {j}: second eigenvalue {l2:.6} is degenerate; pair skipped");
        return Ok(None);
    }
    let phi = &pairs[1];
    let (di, dj) = (cell_mask(part, i)?, cell_mask(part, j)?);
    let side = |mask: &crate::grid::Mask| -> (f64, i8) {
        let (mut pos, mut neg) = (0usize, 0usize);
        for p in mask.indices() {
            if phi.vector[p] > 0.0 {
                pos += 1;
            } else if phi.vector[p] < 0.0 {
                neg += 1;
            }
        }
        let total = mask.count().max(1) as f64;
        if pos >= neg {
            (pos as f64 / total, 1)
        } else {
            (neg as f64 / total, -1)
        }
    };
    let (share_i, sign_i) = side(&di);
    let (share_j, sign_j) = side(&dj);
    let nodal_match = share_i >= NODAL_MATCH_SHARE && share_j >= NODAL_MATCH_SHARE && sign_i != sign_j;
    let (mi, mj) = (l2_mass(phi, &di)?, l2_mass(phi, &dj)?);
    let total = mi + mj;
    Ok(Some(PairResult { i, j, mass_i: mi / total, mass_j: mj / total, nodal_match }))
}

/// Runs [`pair_test`] on every adjacent pair of an equipartition.
pub fn partition_test(part: &LabelGrid, tol_mass: f64) -> Result<CriterionReport> {
    if !(tol_mass >= 0.0) {
        return Err(Error::Parameter(format!("mass tolerance {tol_mass} must be nonnegative")));
    }
    let energies = sharp_energies(part, 1e-8)?;
    let mean = energies.iter().sum::<f64>() / energies.len() as f64;
    let spread = energies.iter().cloned().fold(f64::MIN, f64::max) - energies.iter().cloned().fold(f64::MAX, f64::min);
    if spread > EQUIPARTITION_RTOL * mean {
        return Err(Error::Precondition(format!(
            "not an equipartition: λ_1 spread {spread:.4} exceeds {:.0}% of the mean {mean:.4}",
            EQUIPARTITION_RTOL * 100.0
        )));
    }
    let mut pairs = Vec::new();
    let mut skipped = Vec::new();
    for (i, j) in adjacency(part) {
        match pair_test(part, i, j)? {
            Some(r) => pairs.push(r),
            None => skipped.push((i, j)),
        }
    }
    let verdict = if pairs.iter().any(|p| p.disqualifies(tol_mass)) { Verdict::Disqualified } else { Verdict::Inconclusive };
    Ok(CriterionReport { pairs, skipped, verdict, tolerance: tol_mass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{rasterize_shape, GridSpec};
    use crate::shape::ShapeKind;

    /// Vertical strips split at the given node columns.
    fn strips(n: usize, cuts: &[usize]) -> LabelGrid {
        let spec = GridSpec::new(ShapeKind::Square, n).unwrap();
        let inside = rasterize_shape(&spec);
        let labels = (0..spec.len())
            .map(|p| if !inside.get(p) { -1 } else { cuts.iter().filter(|&&c| spec.row_col(p).1 >= c).count() as i32 })
            .collect();
        LabelGrid::new(spec, cuts.len() + 1, labels).unwrap()
    }

    fn quadrants(n: usize) -> LabelGrid {
        let spec = GridSpec::new(ShapeKind::Square, n).unwrap();
        let inside = rasterize_shape(&spec);
        let mid = n / 2 + 1;
        let labels = (0..spec.len())
            .map(|p| {
                let (r, c) = spec.row_col(p);
                if inside.get(p) { 2 * (r >= mid) as i32 + (c >= mid) as i32 } else { -1 }
            })
            .collect();
        LabelGrid::new(spec, 4, labels).unwrap()
    }

    #[test]
    fn equal_quadrants_are_inconclusive() {
        let part = quadrants(31);
        let r = pair_test(&part, 0, 1).unwrap().unwrap();
        assert!(r.nodal_match);
        assert!((r.mass_i - 0.5).abs() < 1e-6);
        assert!((r.mass_i + r.mass_j - 1.0).abs() < 1e-12);
        let report = partition_test(&part, DEFAULT_TOL_MASS).unwrap();
        assert_eq!(report.pairs.len(), 4);
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert!(report.to_csv().starts_with("i,j,mass_i,mass_j,nodal_match\n0,1,"));
    }

    #[test]
    fn whole_square_union_is_degenerate() {
        let part = strips(24, &[12]);
        assert_eq!(pair_test(&part, 0, 1).unwrap(), None);
    }

    #[test]
    fn pair_order_swaps_masses() {
        let part = strips(30, &[9, 21]);
        let a = pair_test(&part, 0, 1).unwrap().unwrap();
        let b = pair_test(&part, 1, 0).unwrap().unwrap();
        assert!((a.mass_i - b.mass_j).abs() < 1e-8);
        assert_eq!(a.nodal_match, b.nodal_match);
    }

    #[test]
    fn unequal_strips_fail_the_precondition() {
        assert!(matches!(partition_test(&strips(24, &[6]), DEFAULT_TOL_MASS), Err(Error::Precondition(_))));
    }
}
