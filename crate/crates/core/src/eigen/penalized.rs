use std::sync::Arc;

use faer::sparse::linalg::solvers::SymbolicLlt;
use faer::sparse::SparseColMat;

use super::operator::{self, Operator};
use super::{solve_operator, to_pairs, EigenPair, SolverConfig};
use crate::error::{Error, Result};
use crate::grid::{rasterize_shape, GridSpec, Mask};

/// Ground state of `−Δ_h + C(1 − φ)` on a shape's interior nodes.
///
/// The sparsity pattern and its symbolic factorization depend only on the
/// grid, so one solver serves every density on that grid.
pub struct PenalizedSolver {
    mask: Arc<Mask>,
    base: Operator,
    matrix: SparseColMat<usize, f64>,
    diag_pos: Vec<usize>,
    symbolic: SymbolicLlt<usize>,
    c: f64,
    config: SolverConfig,
}

impl PenalizedSolver {
    pub fn new(spec: &GridSpec, c: f64) -> Result<Self> {
        Self::with_config(spec, c, SolverConfig::default())
    }

    pub fn with_config(spec: &GridSpec, c: f64, config: SolverConfig) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Parameter(format!("penalization constant {c} must be positive")));
        }
        let mask = rasterize_shape(spec);
        if mask.is_empty() {
            return Err(Error::Domain("shape has no interior nodes".into()));
        }
        let base = Operator::laplacian(&mask);
        let (matrix, diag_pos) = base.to_sparse(0.0)?;
        let symbolic = operator::symbolic(&matrix)?;
        Ok(PenalizedSolver {
            mask: Arc::new(mask),
            base,
            matrix,
            diag_pos,
            symbolic,
            c,
            config: SolverConfig { count: 1, ..config },
        })
    }

    pub fn mask(&self) -> &Arc<Mask> {
        &self.mask
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `density` holds one value per grid node; only interior nodes are read.
    pub fn solve(&self, density: &[f64], warm: Option<&EigenPair>) -> Result<EigenPair> {
        let spec = &self.mask.spec;
        if density.len() != spec.len() {
            return Err(Error::Domain(format!("density has {} values, grid has {}", density.len(), spec.len())));
        }
        let mut op = self.base.clone();
        let mut matrix = self.matrix.clone();
        let vals = matrix.val_mut();
        for (d, &p) in self.base.dofs.iter().enumerate() {
            let extra = self.c * (1.0 - density[p]);
            op.diag[d] += extra;
            vals[self.diag_pos[d]] += extra;
        }
        let factor = operator::factor(&self.symbolic, &matrix)?;
        let warm_cols = warm.map(|w| vec![self.base.dofs.iter().map(|&p| w.vector[p]).collect::<Vec<f64>>()]);
        let raw = solve_operator(&op, Some(&factor), &self.config, warm_cols.as_deref())?;
        let mut pairs = to_pairs(&op, &raw, &self.mask);
        if !raw.converged {
            return Err(Error::Convergence { iterations: raw.iterations, residual: raw.residuals[0], best: pairs });
        }
        Ok(pairs.swap_remove(0))
    }
}

/// One-shot form of [`PenalizedSolver::solve`].
pub fn penalized_lambda1(spec: &GridSpec, density: &[f64], c: f64) -> Result<EigenPair> {
    PenalizedSolver::new(spec, c)?.solve(density, None)
}
