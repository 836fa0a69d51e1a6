//! Closed-form Dirichlet spectra of the reference shapes and the eigenvalue
//! bounds built from them.
//!
//! | shape    | eigenvalue                     | indices             |
//! |----------|--------------------------------|---------------------|
//! | square   | `π²(m² + n²)`                  | `m, n ≥ 1`          |
//! | triangle | `(16/9)π²(m² + mn + n²)`       | `m, n ≥ 1`          |
//! | disk     | `j²_{m,n}`                     | `m ≥ 0, n ≥ 1`      |
//!
//! Disk modes with `m ≥ 1` are double (`cos mθ` and `sin mθ`). On the square
//! and triangle `(m, n)` and `(n, m)` are distinct eigenfunctions.
//!
//! For a `k`-partition, the optimal max energy `𝔏_k` and mean energy
//! `𝔏_{k,1}` satisfy `λ_k ≤ 𝔏_k ≤ L_k` and `(1/k)Σλ_i ≤ 𝔏_{k,1} ≤ L_k`,
//! where `L_k` is the smallest eigenvalue having an eigenfunction with `k`
//! nodal domains.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::bessel::{bessel_zero, bessel_zeros, BesselOrder};
use crate::error::{Error, Result};
use crate::shape::ShapeKind;

/// Number of canonical modes scanned when looking for `L_k`.
pub const LK_HORIZON: usize = 200;

/// Relative tolerance for grouping equal eigenvalues into one multiplicity class.
pub const MULTIPLICITY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub m: u32,
    pub n: u32,
}

impl ModeIndex {
    pub fn new(m: u32, n: u32) -> Self {
        ModeIndex { m, n }
    }

    fn validate(self, shape: ShapeKind) -> Result<()> {
        let ok = match shape {
            ShapeKind::Square | ShapeKind::Triangle => self.m >= 1 && self.n >= 1,
            ShapeKind::Disk => self.n >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("mode ({}, {}) is not valid for the {shape}", self.m, self.n)))
        }
    }
}

/// Number of nodal domains of a canonical eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodalCount {
    Known(u32),
    /// No closed-form rule; counted numerically by the eigensolver.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub value: f64,
    pub mode: ModeIndex,
    pub multiplicity: u32,
    pub nodal_count: NodalCount,
}

pub fn eigenvalue(shape: ShapeKind, mode: ModeIndex) -> Result<f64> {
    mode.validate(shape)?;
    let (m, n) = (mode.m as f64, mode.n as f64);
    Ok(match shape {
        ShapeKind::Square => PI * PI * (m * m + n * n),
        ShapeKind::Triangle => 16.0 / 9.0 * PI * PI * (m * m + m * n + n * n),
        ShapeKind::Disk => bessel_zero(BesselOrder::integer(mode.m), mode.n)?.powi(2),
    })
}

pub fn nodal_count(shape: ShapeKind, mode: ModeIndex) -> Result<NodalCount> {
    mode.validate(shape)?;
    Ok(match shape {
        ShapeKind::Square => NodalCount::Known(mode.m * mode.n),
        ShapeKind::Disk if mode.m == 0 => NodalCount::Known(mode.n),
        ShapeKind::Disk => NodalCount::Known(2 * mode.m * mode.n),
        ShapeKind::Triangle => NodalCount::Unknown,
    })
}

/// Lower bound on every eigenvalue whose index exceeds `limit` in either
/// direction, used to prove an enumeration box large enough.
fn outside_box_bound(shape: ShapeKind, limit: u32) -> f64 {
    let l = (limit + 1) as f64;
    match shape {
        ShapeKind::Square => PI * PI * (l * l + 1.0),
        ShapeKind::Triangle => 16.0 / 9.0 * PI * PI * (l * l + l + 1.0),
        // j_{m,n} > m and j_{m,n} ≥ j_{0,n} > (n - 1/4)π.
        ShapeKind::Disk => (l * l).min(((l - 0.25) * PI).powi(2)),
    }
}

/// Canonical modes (one entry per `(m, n)`) inside the index box `[0, limit]²`,
/// sorted by eigenvalue.
fn canonical_modes_in_box(shape: ShapeKind, limit: u32) -> Result<Vec<(f64, ModeIndex)>> {
    let m0 = if shape == ShapeKind::Disk { 0 } else { 1 };
    let mut modes = Vec::new();
    for m in m0..=limit {
        if shape == ShapeKind::Disk {
            let zeros = bessel_zeros(BesselOrder::integer(m), limit)?;
            modes.extend(zeros.iter().zip(1..).map(|(j, n)| (j * j, ModeIndex::new(m, n))));
            continue;
        }
        for n in 1..=limit {
            let mode = ModeIndex::new(m, n);
            modes.push((eigenvalue(shape, mode)?, mode));
        }
    }
    modes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(modes)
}

fn copies(shape: ShapeKind, mode: ModeIndex) -> usize {
    if shape == ShapeKind::Disk && mode.m >= 1 {
        2
    } else {
        1
    }
}

/// Smallest `count` canonical modes, each listed once; the enumeration box
/// is grown until every mode outside it is provably larger than the last one kept.
fn smallest_canonical_modes(shape: ShapeKind, count: usize, with_multiplicity: bool) -> Result<Vec<(f64, ModeIndex)>> {
    let mut limit = 4u32;
    loop {
        let modes = canonical_modes_in_box(shape, limit)?;
        let mut kept = Vec::new();
        let mut total = 0;
        for &(v, mode) in &modes {
            if total >= count {
                break;
            }
            kept.push((v, mode));
            total += if with_multiplicity { copies(shape, mode) } else { 1 };
        }
        if total >= count {
            let last = kept.last().map(|e| e.0).unwrap_or(0.0);
            if last < outside_box_bound(shape, limit) {
                return Ok(kept);
            }
        }
        limit *= 2;
    }
}

/// The first `count` eigenvalues, nondecreasing and repeated per multiplicity.
pub fn spectrum(shape: ShapeKind, count: usize) -> Result<Vec<SpectrumEntry>> {
    if count == 0 {
        return Err(Error::Domain("spectrum count must be >= 1".into()));
    }
    let modes = smallest_canonical_modes(shape, count, true)?;
    let mut values: Vec<(f64, ModeIndex)> = Vec::with_capacity(count + 1);
    for (v, mode) in modes {
        for _ in 0..copies(shape, mode) {
            values.push((v, mode));
        }
    }
    // Multiplicity from value-equality groups, computed before truncation so
    // a group cut by `count` still reports its full size.
    let mut entries = Vec::with_capacity(values.len());
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && (values[end].0 - values[start].0).abs() <= MULTIPLICITY_RTOL * values[start].0 {
            end += 1;
        }
        let mut mult = (end - start) as u32;
        if end == values.len() {
            // The group may continue past the enumerated range.
            let extra = smallest_canonical_modes(shape, values.len() + 4, true)?;
            let v0 = values[start].0;
            mult = extra
                .iter()
                .filter(|(v, _)| (v - v0).abs() <= MULTIPLICITY_RTOL * v0)
                .map(|(_, mode)| copies(shape, *mode) as u32)
                .sum();
        }
        for &(value, mode) in &values[start..end] {
            entries.push(SpectrumEntry { value, mode, multiplicity: mult, nodal_count: nodal_count(shape, mode)? });
        }
        start = end;
    }
    entries.truncate(count);
    Ok(entries)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBounds {
    /// `(1/k) Σ_{i ≤ k} λ_i`, the lower bound for the mean criterion.
    pub mean: f64,
    /// `λ_k`, the lower bound for the max criterion.
    pub kth: f64,
}

pub fn lower_bounds(shape: ShapeKind, k: usize) -> Result<LowerBounds> {
    let spec = spectrum(shape, k)?;
    let sum: f64 = spec.iter().map(|e| e.value).sum();
    Ok(LowerBounds { mean: sum / k as f64, kth: spec[k - 1].value })
}

/// Result of the `L_k` search over canonical modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperBound {
    Finite { value: f64, mode: ModeIndex },
    /// No canonical mode with `k` nodal domains among the first `horizon`.
    Infinite { horizon: usize },
}

impl UpperBound {
    pub fn value(&self) -> f64 {
        match self {
            UpperBound::Finite { value, .. } => *value,
            UpperBound::Infinite { .. } => f64::INFINITY,
        }
    }
}

/// `L_k` from canonical eigenfunctions (products on the square,
/// `J_m(j_{m,n} r) cos mθ` on the disk).
///
/// The triangle has no closed-form nodal count; use
/// [`crate::eigen::numeric_lk`] for it.
pub fn upper_bound_lk(shape: ShapeKind, k: u32) -> Result<UpperBound> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    if shape == ShapeKind::Triangle {
        return Err(Error::Domain("triangle nodal counts need the numeric path (eigen::numeric_lk)".into()));
    }
    lk_from_modes(shape, &smallest_canonical_modes(shape, LK_HORIZON, false)?, k)
}

fn lk_from_modes(shape: ShapeKind, modes: &[(f64, ModeIndex)], k: u32) -> Result<UpperBound> {
    for &(value, mode) in modes {
        if nodal_count(shape, mode)? == NodalCount::Known(k) {
            return Ok(UpperBound::Finite { value, mode });
        }
    }
    Ok(UpperBound::Infinite { horizon: LK_HORIZON })
}

/// First Dirichlet eigenvalue of the angular sector of opening `2π/k`
/// (unit radius): `j²_{k/2,1}`.
pub fn sector_eigenvalue(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    Ok(bessel_zero(BesselOrder::half(k), 1)?.powi(2))
}

/// One row of the bounds table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub k: u32,
    pub mean: f64,
    pub lambda_k: f64,
    pub l_k: LkEntry,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LkEntry {
    Value(f64),
    Infinite,
    /// Triangle entry left for the numeric path.
    Numeric,
}

impl LkEntry {
    fn render(&self) -> String {
        match self {
            LkEntry::Value(v) => format!("{v:.2}"),
            LkEntry::Infinite => "inf".into(),
            LkEntry::Numeric => "numeric".into(),
        }
    }
}

/// How to fill the triangle's `L_k` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleLk {
    /// Leave the column marked `numeric`.
    Skip,
    /// Count nodal domains of discrete eigenfunctions at resolution `n`.
    Numeric { n: usize },
}

pub fn bounds_table(shape: ShapeKind, k_max: u32, triangle: TriangleLk) -> Result<Vec<BoundsRow>> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be >= 1".into()));
    }
    let spec = spectrum(shape, k_max as usize)?;
    let triangle_column = match (shape, triangle) {
        (ShapeKind::Triangle, TriangleLk::Numeric { n }) => Some(crate::eigen::triangle_lk_column(k_max, n)?),
        _ => None,
    };
    let modes = match shape {
        ShapeKind::Triangle => Vec::new(),
        _ => smallest_canonical_modes(shape, LK_HORIZON, false)?,
    };
    let mut rows = Vec::with_capacity(k_max as usize);
    let mut sum = 0.0;
    for k in 1..=k_max {
        sum += spec[k as usize - 1].value;
        let l_k = match shape {
            ShapeKind::Triangle => match &triangle_column {
                Some(col) => col[k as usize - 1].map_or(LkEntry::Infinite, LkEntry::Value),
                None => LkEntry::Numeric,
            },
            _ => match lk_from_modes(shape, &modes, k)? {
                UpperBound::Finite { value, .. } => LkEntry::Value(value),
                UpperBound::Infinite { .. } => LkEntry::Infinite,
            },
        };
        rows.push(BoundsRow { k, mean: sum / k as f64, lambda_k: spec[k as usize - 1].value, l_k });
    }
    Ok(rows)
}

pub const BOUNDS_CSV_HEADER: &str = "k,mean,lambda_k,L_k";

pub fn bounds_csv(rows: &[BoundsRow]) -> String {
    let mut out = String::from(BOUNDS_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{:.2},{:.2},{}", r.k, r.mean, r.lambda_k, r.l_k.render());
    }
    out
}

/// Aligned text block for one shape: `k | mean | λ_k | L_k`.
pub fn bounds_text(shape: ShapeKind, rows: &[BoundsRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:^38}", shape.name());
    let _ = writeln!(out, "{:>3} | {:>10} | {:>10} | {:>10}", "k", "mean", "lambda_k", "L_k");
    let _ = writeln!(out, "{}", "-".repeat(42));
    for r in rows {
        let _ = writeln!(out, "{:>3} | {:>10.2} | {:>10.2} | {:>10}", r.k, r.mean, r.lambda_k, r.l_k.render());
    }
    out
}

/// Sector energies `j²_{k/2,1}` for the given `k` values, as CSV (`k,energy`).
pub fn sector_csv(ks: &[u32]) -> Result<String> {
    let mut out = String::from("k,energy\n");
    for &k in ks {
        let _ = writeln!(out, "{},{:.2}", k, sector_eigenvalue(k)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 0.005 + 1e-12
    }

    #[test]
    fn table_one_values() {
        assert!(close(eigenvalue(ShapeKind::Square, ModeIndex::new(1, 1)).unwrap(), 19.74));
        assert!(close(eigenvalue(ShapeKind::Triangle, ModeIndex::new(1, 1)).unwrap(), 52.64));
        assert!(close(eigenvalue(ShapeKind::Disk, ModeIndex::new(0, 1)).unwrap(), 5.78));
    }

    #[test]
    fn invalid_modes() {
        assert!(eigenvalue(ShapeKind::Square, ModeIndex::new(0, 1)).is_err());
        assert!(eigenvalue(ShapeKind::Triangle, ModeIndex::new(1, 0)).is_err());
        assert!(eigenvalue(ShapeKind::Disk, ModeIndex::new(0, 0)).is_err());
        assert!(eigenvalue(ShapeKind::Disk, ModeIndex::new(0, 1)).is_ok());
    }

    #[test]
    fn spectrum_examples() {
        let sq: Vec<f64> = spectrum(ShapeKind::Square, 4).unwrap().iter().map(|e| e.value).collect();
        for (a, b) in sq.iter().zip([19.74, 49.35, 49.35, 78.96]) {
            assert!(close(*a, b));
        }
        let disk: Vec<f64> = spectrum(ShapeKind::Disk, 3).unwrap().iter().map(|e| e.value).collect();
        for (a, b) in disk.iter().zip([5.78, 14.68, 14.68]) {
            assert!(close(*a, b));
        }
        let tri = spectrum(ShapeKind::Triangle, 1).unwrap();
        assert_eq!(tri.len(), 1);
        assert!(close(tri[0].value, 52.64));
    }

    #[test]
    fn multiplicities() {
        let disk = spectrum(ShapeKind::Disk, 6).unwrap();
        assert_eq!(disk[0].multiplicity, 1);
        assert!(disk.iter().filter(|e| e.mode.m >= 1).all(|e| e.multiplicity == 2));
        // 50π² = (1,7) = (7,1) = (5,5): accidental triple.
        let sq = spectrum(ShapeKind::Square, 40).unwrap();
        let fifty: Vec<_> = sq.iter().filter(|e| (e.value / (PI * PI) - 50.0).abs() < 1e-9).collect();
        assert_eq!(fifty.len(), 3);
        assert!(fifty.iter().all(|e| e.multiplicity == 3));
        // A group cut by the requested count still reports its full size.
        let two = spectrum(ShapeKind::Square, 2).unwrap();
        assert_eq!(two[1].multiplicity, 2);
    }

    #[test]
    fn nodal_counts() {
        assert_eq!(nodal_count(ShapeKind::Square, ModeIndex::new(1, 3)).unwrap(), NodalCount::Known(3));
        assert_eq!(nodal_count(ShapeKind::Disk, ModeIndex::new(2, 1)).unwrap(), NodalCount::Known(4));
        assert_eq!(nodal_count(ShapeKind::Disk, ModeIndex::new(0, 3)).unwrap(), NodalCount::Known(3));
        assert_eq!(nodal_count(ShapeKind::Triangle, ModeIndex::new(1, 2)).unwrap(), NodalCount::Unknown);
    }

    #[test]
    fn disk_nodal_count_of_m2_mode_by_grid_counting() {
        // Oracle: count sign components of J_2(j_{2,1} r) cos 2θ on a fine polar-free grid.
        let j21 = bessel_zero(BesselOrder::integer(2), 1).unwrap();
        let n = 201;
        let h = 2.0 / (n - 1) as f64;
        let mut sign = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (-1.0 + j as f64 * h, -1.0 + i as f64 * h);
                let r = (x * x + y * y).sqrt();
                if r >= 1.0 {
                    continue;
                }
                let v = crate::bessel::bessel_j(BesselOrder::integer(2), j21 * r).unwrap() * (2.0 * y.atan2(x)).cos();
                sign[i * n + j] = if v > 1e-9 { 1 } else if v < -1e-9 { -1 } else { 0 };
            }
        }
        let mut seen = vec![false; n * n];
        let mut count = 0;
        for start in 0..n * n {
            if sign[start] == 0 || seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(p) = stack.pop() {
                let (i, j) = (p / n, p % n);
                let mut nb = Vec::new();
                if i > 0 { nb.push(p - n) }
                if i + 1 < n { nb.push(p + n) }
                if j > 0 { nb.push(p - 1) }
                if j + 1 < n { nb.push(p + 1) }
                for q in nb {
                    if !seen[q] && sign[q] == sign[p] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        assert_eq!(NodalCount::Known(count), nodal_count(ShapeKind::Disk, ModeIndex::new(2, 1)).unwrap());
    }

    #[test]
    fn upper_bound_examples() {
        assert!(close(upper_bound_lk(ShapeKind::Square, 4).unwrap().value(), 78.96));
        assert!(close(upper_bound_lk(ShapeKind::Disk, 3).unwrap().value(), 74.89));
        assert!(close(upper_bound_lk(ShapeKind::Disk, 8).unwrap().value(), 57.58));
        assert!(upper_bound_lk(ShapeKind::Triangle, 2).is_err());
    }

    #[test]
    fn upper_bound_reports_horizon() {
        // A prime beyond every product m·n reachable in the horizon.
        match upper_bound_lk(ShapeKind::Square, 1009).unwrap() {
            UpperBound::Infinite { horizon } => assert_eq!(horizon, LK_HORIZON),
            other => panic!("expected infinite, got {other:?}"),
        }
    }

    #[test]
    fn lower_bound_examples() {
        let b = lower_bounds(ShapeKind::Square, 3).unwrap();
        assert!(close(b.mean, 39.48) && close(b.kth, 49.35));
        let b = lower_bounds(ShapeKind::Triangle, 10).unwrap();
        assert!(close(b.mean, 236.87) && (b.kth - 368.465).abs() < 1e-3);
        let b = lower_bounds(ShapeKind::Disk, 1).unwrap();
        assert_eq!(b.mean, b.kth);
        assert!(close(b.mean, 5.78));
    }

    #[test]
    fn sector_values() {
        assert!(close(sector_eigenvalue(3).unwrap(), 20.19));
        assert!(close(sector_eigenvalue(5).unwrap(), 33.22));
        assert!(close(sector_eigenvalue(9).unwrap(), 66.95));
        let half_disk = eigenvalue(ShapeKind::Disk, ModeIndex::new(1, 1)).unwrap();
        assert!((sector_eigenvalue(2).unwrap() - half_disk).abs() < 1e-10);
    }

    #[test]
    fn bounds_table_examples() {
        let sq = bounds_table(ShapeKind::Square, 2, TriangleLk::Skip).unwrap();
        assert_eq!(sq.len(), 2);
        assert!(close(sq[0].mean, 19.74) && close(sq[0].lambda_k, 19.74));
        assert_eq!(sq[0].l_k.render(), "19.74");
        assert!(close(sq[1].mean, 34.54) && close(sq[1].lambda_k, 49.35));
        assert_eq!(sq[1].l_k.render(), "49.35");
        let disk = bounds_table(ShapeKind::Disk, 1, TriangleLk::Skip).unwrap();
        assert_eq!(bounds_csv(&disk), "k,mean,lambda_k,L_k\n1,5.78,5.78,5.78\n");
        let tri = bounds_table(ShapeKind::Triangle, 2, TriangleLk::Skip).unwrap();
        assert!(close(tri[1].mean, 87.73) && close(tri[1].lambda_k, 122.82));
        assert_eq!(tri[1].l_k, LkEntry::Numeric);
    }

    #[test]
    fn courant_sharp_indices_have_matching_bounds() {
        for shape in [ShapeKind::Square, ShapeKind::Disk] {
            for k in [1u32, 2, 4] {
                let lk = upper_bound_lk(shape, k).unwrap().value();
                let kth = lower_bounds(shape, k as usize).unwrap().kth;
                assert!((lk - kth).abs() < 1e-9 * lk, "{shape} k={k}");
            }
        }
    }

    #[test]
    fn text_table_has_one_line_per_row() {
        let rows = bounds_table(ShapeKind::Square, 10, TriangleLk::Skip).unwrap();
        let text = bounds_text(ShapeKind::Square, &rows);
        assert_eq!(text.lines().count(), 13);
        assert!(text.contains("  98.70"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn spectrum_sorted_positive(shape_ix in 0usize..3, count in 1usize..60) {
                let shape = ShapeKind::ALL[shape_ix];
                let spec = spectrum(shape, count).unwrap();
                prop_assert_eq!(spec.len(), count);
                prop_assert!(spec[0].value > 0.0);
                for w in spec.windows(2) {
                    prop_assert!(w[0].value <= w[1].value);
                }
            }

            #[test]
            fn mean_sandwich(shape_ix in 0usize..3, k in 1usize..40) {
                let shape = ShapeKind::ALL[shape_ix];
                let b = lower_bounds(shape, k).unwrap();
                prop_assert!(b.kth / k as f64 <= b.mean + 1e-12);
                prop_assert!(b.mean <= b.kth + 1e-12);
                if shape != ShapeKind::Triangle {
                    let lk = upper_bound_lk(shape, k as u32).unwrap().value();
                    prop_assert!(b.mean <= lk);
                }
            }

            #[test]
            fn square_symmetry(m in 1u32..30, n in 1u32..30) {
                let a = eigenvalue(ShapeKind::Square, ModeIndex::new(m, n)).unwrap();
                let b = eigenvalue(ShapeKind::Square, ModeIndex::new(n, m)).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }
}
