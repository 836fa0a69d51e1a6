//! Restarted block shift-invert Krylov iteration with Rayleigh–Ritz
//! extraction against the original operator.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Llt;
use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operator::Operator;

/// Below this many unknowns the problem is solved densely.
const DENSE_LIMIT: usize = 400;
/// Inverse applications per restart.
const KRYLOV_STEPS: usize = 2;
const START_SEED: u64 = 0x5eed;

pub(crate) struct Solution {
    pub values: Vec<f64>,
    /// Unit Euclidean columns.
    pub vectors: Mat<f64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn block_size(count: usize, n: usize) -> usize {
    (count + (count / 2).max(3)).min(n)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Appends the columns of `block` to `basis` after two passes of
/// Gram–Schmidt; columns that lose almost all their norm are dropped.
fn extend_orthonormal(basis: &mut Vec<Vec<f64>>, block: Vec<Vec<f64>>) -> usize {
    let mut added = 0;
    for mut v in block {
        let before = dot(&v, &v).sqrt();
        if before == 0.0 || !before.is_finite() {
            continue;
        }
        for _ in 0..2 {
            for b in basis.iter() {
                let c = dot(b, &v);
                axpy(-c, b, &mut v);
            }
        }
        let after = dot(&v, &v).sqrt();
        if after <= 1e-10 * before {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= after);
        basis.push(v);
        added += 1;
    }
    added
}

fn to_mat(cols: &[Vec<f64>], n: usize) -> Mat<f64> {
    let mut m = Mat::<f64>::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.col_as_slice_mut(j).copy_from_slice(c);
    }
    m
}

fn residual(op: &Operator, value: f64, v: &[f64], scratch: &mut [f64]) -> f64 {
    op.apply(v, scratch);
    let r: f64 = scratch.iter().zip(v).map(|(a, b)| (a - value * b).powi(2)).sum();
    r.sqrt() / value.abs().max(f64::MIN_POSITIVE)
}

pub(crate) fn solve_dense(op: &Operator, count: usize) -> Solution {
    let n = op.len();
    let a = op.dense(0.0);
    let eig = a.self_adjoint_eigen(Side::Lower).expect("dense symmetric eigensolver failed");
    let s = eig.S().column_vector();
    let u = eig.U();
    let count = count.min(n);
    let mut vectors = Mat::<f64>::zeros(n, count);
    let mut values = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    let mut scratch = vec![0.0; n];
    for j in 0..count {
        values.push(s[j]);
        for i in 0..n {
            vectors[(i, j)] = u[(i, j)];
        }
        residuals.push(residual(op, s[j], vectors.col_as_slice(j), &mut scratch));
    }
    Solution { values, vectors, residuals, iterations: 1, converged: true }
}

/// Smallest `count` eigenpairs of `op`, with `factor` the Cholesky factor of
/// `op − shift·I`.
pub(crate) fn solve_iterative(
    op: &Operator,
    factor: &Llt<usize, f64>,
    count: usize,
    tol: f64,
    max_iterations: usize,
    warm: Option<&[Vec<f64>]>,
) -> Solution {
    let n = op.len();
    let b = block_size(count, n);
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut start: Vec<Vec<f64>> = warm.map(|w| w.iter().take(b).cloned().collect()).unwrap_or_default();
    while start.len() < b {
        start.push((0..n).map(|_| rng.random::<f64>() - 0.5).collect());
    }

    let mut scratch = vec![0.0; n];
    let mut best = Solution {
        values: vec![f64::NAN; count],
        vectors: Mat::zeros(n, count),
        residuals: vec![f64::INFINITY; count],
        iterations: 0,
        converged: false,
    };
    for it in 1..=max_iterations.max(1) {
        let mut basis = Vec::with_capacity((KRYLOV_STEPS + 1) * b);
        let mut added = extend_orthonormal(&mut basis, start);
        let mut from = 0;
        for _ in 0..KRYLOV_STEPS {
            if added == 0 {
                break;
            }
            let mut w = to_mat(&basis[from..from + added], n);
            factor.solve_in_place(w.as_mut());
            let block = (0..w.ncols()).map(|j| w.col_as_slice(j).to_vec()).collect();
            from = basis.len();
            added = extend_orthonormal(&mut basis, block);
        }
        let m = basis.len();
        let v = to_mat(&basis, n);
        let mut av = Mat::<f64>::zeros(n, m);
        for j in 0..m {
            op.apply(&basis[j], av.col_as_slice_mut(j));
        }
        drop(basis);
        let mut h = v.transpose() * &av;
        for i in 0..m {
            for j in 0..i {
                let s = 0.5 * (h[(i, j)] + h[(j, i)]);
                h[(i, j)] = s;
                h[(j, i)] = s;
            }
        }
        let eig = h.self_adjoint_eigen(Side::Lower).expect("projected eigenproblem failed");
        let keep = b.min(m);
        let z = eig.U().subcols(0, keep).to_owned();
        let theta: Vec<f64> = (0..keep).map(|j| eig.S().column_vector()[j]).collect();
        let y = &v * &z;
        let ay = &av * &z;
        let mut residuals = Vec::with_capacity(keep);
        for j in 0..keep {
            let norm = dot(y.col_as_slice(j), y.col_as_slice(j)).sqrt();
            let r: f64 = ay
                .col_as_slice(j)
                .iter()
                .zip(y.col_as_slice(j))
                .map(|(a, x)| (a - theta[j] * x).powi(2))
                .sum();
            residuals.push(r.sqrt() / (norm * theta[j].abs().max(f64::MIN_POSITIVE)));
        }
        let got = count.min(keep);
        let worst = residuals[..got].iter().cloned().fold(0.0, f64::max);
        let best_worst = best.residuals.iter().cloned().fold(0.0, f64::max);
        if got == count && worst < best_worst {
            best.values = theta[..count].to_vec();
            best.vectors = y.subcols(0, count).to_owned();
            best.residuals = residuals[..count].to_vec();
        }
        best.iterations = it;
        if got == count && worst <= tol {
            best.converged = true;
            break;
        }
        start = (0..keep).map(|j| y.col_as_slice(j).to_vec()).collect();
    }
    // Recompute residuals from the operator directly for the reported pairs.
    for j in 0..count.min(best.vectors.ncols()) {
        if best.values[j].is_finite() {
            let col = best.vectors.col_as_slice(j).to_vec();
            let norm = dot(&col, &col).sqrt();
            let unit: Vec<f64> = col.iter().map(|x| x / norm).collect();
            best.vectors.col_as_slice_mut(j).copy_from_slice(&unit);
            best.residuals[j] = residual(op, best.values[j], &unit, &mut scratch);
        }
    }
    best
}

pub(crate) fn use_dense(n: usize, count: usize) -> bool {
    n <= DENSE_LIMIT || 3 * block_size(count, n) >= n
}
