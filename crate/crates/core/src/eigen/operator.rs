use faer::sparse::linalg::solvers::{Llt, SymbolicLlt};
use faer::sparse::{SparseColMat, Triplet};
use faer::Side;

use crate::error::{Error, Result};
use crate::grid::Mask;

const NONE: u32 = u32::MAX;

/// 5-point Dirichlet Laplacian restricted to the nodes of a mask, plus an
/// optional diagonal potential.
#[derive(Debug, Clone)]
pub(crate) struct Operator {
    /// Grid index of each unknown.
    pub dofs: Vec<usize>,
    nbr: Vec<[u32; 4]>,
    pub diag: Vec<f64>,
    inv_h2: f64,
}

impl Operator {
    pub fn laplacian(mask: &Mask) -> Self {
        let spec = mask.spec;
        let dofs: Vec<usize> = mask.indices().collect();
        let mut dof_of = vec![NONE; spec.len()];
        for (d, &p) in dofs.iter().enumerate() {
            dof_of[p] = d as u32;
        }
        let nbr = dofs
            .iter()
            .map(|&p| {
                let mut out = [NONE; 4];
                for (slot, q) in spec.neighbors(p).enumerate() {
                    out[slot] = dof_of[q];
                }
                out
            })
            .collect();
        let inv_h2 = 1.0 / (spec.h() * spec.h());
        Operator { diag: vec![4.0 * inv_h2; dofs.len()], dofs, nbr, inv_h2 }
    }

    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for d in 0..self.dofs.len() {
            let mut s = self.diag[d] * x[d];
            for &q in &self.nbr[d] {
                if q != NONE {
                    s -= self.inv_h2 * x[q as usize];
                }
            }
            y[d] = s;
        }
    }

    /// Lower triangle of `A − shift·I` in compressed-column form, and the
    /// position of each diagonal entry in the value array.
    pub fn to_sparse(&self, shift: f64) -> Result<(SparseColMat<usize, f64>, Vec<usize>)> {
        let mut trip = Vec::with_capacity(3 * self.len());
        for d in 0..self.len() {
            trip.push(Triplet::new(d, d, self.diag[d] - shift));
            for &q in &self.nbr[d] {
                if q != NONE && (q as usize) > d {
                    trip.push(Triplet::new(q as usize, d, -self.inv_h2));
                }
            }
        }
        let a = SparseColMat::try_new_from_triplets(self.len(), self.len(), &trip)
            .map_err(|e| Error::Factorization(format!("assembly failed: {e:?}")))?;
        // Columns hold the diagonal first since rows are sorted and only the lower part is stored.
        let diag_pos = a.symbolic().col_ptr()[..self.len()].to_vec();
        Ok((a, diag_pos))
    }

    pub fn dense(&self, shift: f64) -> faer::Mat<f64> {
        let n = self.len();
        let mut m = faer::Mat::<f64>::zeros(n, n);
        for d in 0..n {
            m[(d, d)] = self.diag[d] - shift;
            for &q in &self.nbr[d] {
                if q != NONE {
                    m[(d, q as usize)] = -self.inv_h2;
                }
            }
        }
        m
    }
}

pub(crate) fn symbolic(a: &SparseColMat<usize, f64>) -> Result<SymbolicLlt<usize>> {
    SymbolicLlt::try_new(a.symbolic(), Side::Lower).map_err(|e| Error::Factorization(format!("{e:?}")))
}

pub(crate) fn factor(sym: &SymbolicLlt<usize>, a: &SparseColMat<usize, f64>) -> Result<Llt<usize, f64>> {
    Llt::try_new_with_symbolic(sym.clone(), a.as_ref(), Side::Lower)
        .map_err(|e| Error::Factorization(format!("{e:?} (matrix not positive definite at the chosen shift?)")))
}
