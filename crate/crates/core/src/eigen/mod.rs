//! Smallest eigenpairs of the 5-point Dirichlet Laplacian on masked grids.
//!
//! The discrete problem is `−Δ_h u = λ u` on the nodes of a mask, with
//! every node outside the mask held at zero. Eigenvectors are returned on
//! the full grid and normalized so that `Σ u² h² = 1`.

mod krylov;
mod nodal;
mod operator;
mod penalized;

pub use nodal::{nodal_partition, numeric_lk, triangle_lk_column, LkSearch};
pub use penalized::{penalized_lambda1, PenalizedSolver};

use std::fmt::Write as _;
use std::sync::Arc;


use crate::error::{Error, Result};
use crate::grid::{components_in, GridSpec, Mask};
use operator::Operator;

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    /// One value per grid node, zero outside the solve mask.
    pub vector: Vec<f64>,
    /// `‖A u − λ u‖₂ / λ` for the unit-Euclidean eigenvector.
    pub residual: f64,
    pub mask: Arc<Mask>,
}

impl EigenPair {
    pub fn spec(&self) -> &GridSpec {
        &self.mask.spec
    }

    /// Discrete inner product `Σ u v h²`.
    pub fn inner(&self, other: &EigenPair) -> f64 {
        let h = self.spec().h();
        self.vector.iter().zip(&other.vector).map(|(a, b)| a * b).sum::<f64>() * h * h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub count: usize,
    /// Relative residual tolerance.
    pub tol: f64,
    /// Restart cap.
    pub max_iterations: usize,
    /// Spectral shift used for the inner factorization; must stay below `λ_1`.
    pub shift: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { count: 1, tol: 1e-8, max_iterations: 100, shift: 0.0 }
    }
}

impl SolverConfig {
    pub fn with_count(count: usize) -> Self {
        SolverConfig { count, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Parameter("eigenpair count must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Parameter(format!("tolerance {} must be positive", self.tol)));
        }
        Ok(())
    }
}

/// Flips `v` so its largest-magnitude entry is positive.
fn fix_sign(v: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best * (1.0 + 1e-9) {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Raw solve on one operator: values, unit-Euclidean vectors over the
/// operator's unknowns, residuals.
pub(crate) struct RawPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn solve_operator(
    op: &Operator,
    factor: Option<&faer::sparse::linalg::solvers::Llt<usize, f64>>,
    config: &SolverConfig,
    warm: Option<&[Vec<f64>]>,
) -> Result<RawPairs> {
    let sol = match factor {
        Some(f) if !krylov::use_dense(op.len(), config.count) => {
            krylov::solve_iterative(op, f, config.count, config.tol, config.max_iterations, warm)
        }
        _ if krylov::use_dense(op.len(), config.count) => krylov::solve_dense(op, config.count),
        _ => {
            let (a, _) = op.to_sparse(config.shift)?;
            let sym = operator::symbolic(&a)?;
            let f = operator::factor(&sym, &a)?;
            krylov::solve_iterative(op, &f, config.count, config.tol, config.max_iterations, warm)
        }
    };
    let vectors = (0..sol.vectors.ncols()).map(|j| {
        let mut v = sol.vectors.col_as_slice(j).to_vec();
        fix_sign(&mut v);
        v
    });
    Ok(RawPairs {
        values: sol.values.clone(),
        vectors: vectors.collect(),
        residuals: sol.residuals.clone(),
        iterations: sol.iterations,
        converged: sol.converged,
    })
}

fn to_pairs(op: &Operator, raw: &RawPairs, mask: &Arc<Mask>) -> Vec<EigenPair> {
    let scale = 1.0 / mask.spec.h();
    raw.values
        .iter()
        .zip(&raw.vectors)
        .zip(&raw.residuals)
        .map(|((&value, v), &residual)| {
            let mut vector = vec![0.0; mask.spec.len()];
            for (d, &p) in op.dofs.iter().enumerate() {
                vector[p] = v[d] * scale;
            }
            EigenPair { value, vector, residual, mask: Arc::clone(mask) }
        })
        .collect()
}

/// The `count` smallest eigenpairs on `mask`, sorted by value.
///
/// Disconnected masks are solved one component at a time and merged.
pub fn smallest_eigs(mask: &Mask, config: &SolverConfig) -> Result<Vec<EigenPair>> {
    config.validate()?;
    let total = mask.count();
    if total == 0 {
        return Err(Error::Domain("cannot solve on an empty mask".into()));
    }
    if config.count > total {
        return Err(Error::Domain(format!("{} eigenpairs requested on a mask of {total} nodes", config.count)));
    }
    let shared = Arc::new(mask.clone());
    let (ncomp, labels) = components_in(mask);
    let parts: Vec<Mask> = if ncomp == 1 {
        vec![mask.clone()]
    } else {
        (0..ncomp).map(|c| Mask::from_fn(mask.spec, |p| labels.label(p) == c as i32)).collect()
    };
    let mut pairs = Vec::new();
    let mut failure: Option<(usize, f64)> = None;
    for part in &parts {
        let op = Operator::laplacian(part);
        let sub = SolverConfig { count: config.count.min(op.len()), ..*config };
        let raw = solve_operator(&op, None, &sub, None)?;
        if !raw.converged {
            let worst = raw.residuals.iter().cloned().fold(0.0, f64::max);
            let prev = failure.map_or(0, |f| f.0);
            failure = Some((raw.iterations.max(prev), worst.max(failure.map_or(0.0, |f| f.1))));
        }
        pairs.extend(to_pairs(&op, &raw, &shared));
    }
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    pairs.truncate(config.count);
    match failure {
        Some((iterations, residual)) => Err(Error::Convergence { iterations, residual, best: pairs }),
        None => Ok(pairs),
    }
}

pub fn lambda1(mask: &Mask, tol: f64) -> Result<f64> {
    let config = SolverConfig { tol, ..Default::default() };
    Ok(smallest_eigs(mask, &config)?[0].value)
}

/// `Σ_{region} u² h²`.
pub fn l2_mass(pair: &EigenPair, region: &Mask) -> Result<f64> {
    if !region.is_subset_of(&pair.mask) {
        return Err(Error::Domain("mass region is not contained in the solve mask".into()));
    }
    let h = pair.spec().h();
    Ok(region.indices().map(|p| pair.vector[p] * pair.vector[p]).sum::<f64>() * h * h)
}

/// PFUN text: header `PFUN rows cols h`, then one line of values per grid row.
pub fn to_pfun(spec: &GridSpec, values: &[f64]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "PFUN {} {} {}", spec.rows, spec.cols, spec.h());
    for row in values.chunks(spec.cols) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn from_pfun(text: &str) -> Result<(GridSpec, Vec<f64>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty PFUN input".into()))?;
    let f: Vec<&str> = header.split_whitespace().collect();
    if f.len() != 4 || f[0] != "PFUN" {
        return Err(Error::Format(format!("bad PFUN header '{header}'")));
    }
    let rows: usize = f[1].parse().map_err(|_| Error::Format(format!("bad rows '{}'", f[1])))?;
    let cols: usize = f[2].parse().map_err(|_| Error::Format(format!("bad cols '{}'", f[2])))?;
    let h: f64 = f[3].parse().map_err(|_| Error::Format(format!("bad h '{}'", f[3])))?;
    let spec = crate::grid::spec_from_dims(rows, cols, h)?;
    let mut values = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let line = lines.next().ok_or_else(|| Error::Format(format!("PFUN ends after {r} rows")))?;
        let before = values.len();
        for tok in line.split_whitespace() {
            values.push(tok.parse::<f64>().map_err(|_| Error::Format(format!("bad value '{tok}'")))?);
        }
        if values.len() - before != cols {
            return Err(Error::Format(format!("row {r} has {} values, expected {cols}", values.len() - before)));
        }
    }
    Ok((spec, values))
}
