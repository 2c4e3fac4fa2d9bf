//! Smallest eigenpair and linear solves for sparse symmetric positive
//! definite matrices.
//!
//! Small problems go through a dense symmetric eigendecomposition. Larger
//! ones use block inverse iteration on a sparse LDL^T factorisation with
//! Rayleigh-Ritz on the block.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sprs::{CsMat, FillInReduction, TriMat};
use sprs_ldl::{Ldl, LdlNumeric};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenOptions {
    /// Max-norm bound on `A v - lambda v` for a unit vector `v`.
    pub tol: f64,
    pub max_iter: usize,
    pub block: usize,
    pub seed: u64,
    /// Problems up to this size are solved densely.
    pub dense_threshold: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { tol: 1e-10, max_iter: 500, block: 4, seed: 0x5eed, dense_threshold: 150 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit 2-norm; the entry of largest magnitude is positive.
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Symmetric matrix in compressed sparse row form, assembled from triplets
/// (duplicates are summed).
#[derive(Clone, Debug)]
pub struct SymMatrix {
    csr: CsMat<f64>,
}

impl SymMatrix {
    pub fn from_triplets(n: usize, entries: &[(usize, usize, f64)]) -> Self {
        let mut tri = TriMat::with_capacity((n, n), entries.len());
        for &(i, j, v) in entries {
            tri.add_triplet(i, j, v);
        }
        SymMatrix { csr: tri.to_csr() }
    }

    pub fn dim(&self) -> usize {
        self.csr.rows()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for (i, row) in self.csr.outer_iterator().enumerate() {
            y[i] = row.iter().map(|(j, &a)| a * x[j]).sum();
        }
        y
    }

    fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.csr.outer_iterator().enumerate() {
            for (j, &a) in row.iter() {
                m[(i, j)] += a;
            }
        }
        m
    }

    fn factor(&self) -> Result<LdlNumeric<f64, usize>> {
        let csc = self.csr.to_csc();
        Ldl::new()
            .fill_in_reduction(FillInReduction::ReverseCuthillMcKee)
            .numeric(csc.view())
            .map_err(|e| Error::Precondition(format!("factorisation failed: {e:?}")))
    }
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn residual(a: &SymMatrix, lambda: f64, v: &[f64]) -> f64 {
    let av = a.mul_vec(v);
    max_abs(av.iter().zip(v).map(|(x, y)| x - lambda * y))
}

fn normalise_sign(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let mut k = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[k].abs() * (1.0 + 1e-12) {
            k = i;
        }
    }
    if v.get(k).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Smallest eigenpair of a symmetric positive definite matrix. Iterative
/// solves that stall fall back to the dense solver up to a size limit.
pub fn smallest_eigenpair(a: &SymMatrix, opts: &EigenOptions) -> Result<EigenPair> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::Precondition("empty matrix".into()));
    }
    if n <= opts.dense_threshold {
        return dense_smallest(a, opts);
    }
    match block_inverse_iteration(a, opts) {
        // Tightly clustered low spectra stall the iteration.
        Err(Error::NoConvergence { .. }) if n <= DENSE_FALLBACK_MAX => dense_smallest(a, opts),
        r => r,
    }
}

/// Largest size handed to the dense solver when iteration stalls.
const DENSE_FALLBACK_MAX: usize = 3000;

fn block_inverse_iteration(a: &SymMatrix, opts: &EigenOptions) -> Result<EigenPair> {
    let n = a.dim();
    let ldl = a.factor()?;
    let s = opts.block.clamp(1, n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = DMatrix::<f64>::from_fn(n, s, |_, j| if j == 0 { 1.0 } else { rng.random::<f64>() - 0.5 });
    let mut best = (f64::INFINITY, 0.0, Vec::new());
    for it in 1..=opts.max_iter {
        for j in 0..s {
            let col: Vec<f64> = x.column(j).iter().copied().collect();
            let sol = ldl.solve(&col);
            x.set_column(j, &DVector::from_vec(sol));
        }
        let q = x.clone().qr().q();
        let mut aq = DMatrix::zeros(n, s);
        for j in 0..s {
            let col: Vec<f64> = q.column(j).iter().copied().collect();
            aq.set_column(j, &DVector::from_vec(a.mul_vec(&col)));
        }
        let h = q.transpose() * &aq;
        let h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..s).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let mut ritz = DMatrix::zeros(n, s);
        for (k, &i) in order.iter().enumerate() {
            ritz.set_column(k, &(&q * eig.eigenvectors.column(i)));
        }
        let theta = eig.eigenvalues[order[0]];
        let v: Vec<f64> = ritz.column(0).iter().copied().collect();
        let r = residual(a, theta, &v);
        if r < best.0 {
            best = (r, theta, v);
        }
        if r <= opts.tol {
            let (_, value, mut vector) = best;
            normalise_sign(&mut vector);
            let residual = residual(a, value, &vector);
            return Ok(EigenPair { value, vector, residual, iterations: it });
        }
        x = ritz;
    }
    Err(Error::NoConvergence { residual: best.0, iterations: opts.max_iter })
}

fn dense_smallest(a: &SymMatrix, opts: &EigenOptions) -> Result<EigenPair> {
    let eig = SymmetricEigen::new(a.to_dense());
    let k = eig.eigenvalues.imin();
    let value = eig.eigenvalues[k];
    let mut vector: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    normalise_sign(&mut vector);
    let r = residual(a, value, &vector);
    if r > opts.tol {
        return Err(Error::NoConvergence { residual: r, iterations: 1 });
    }
    Ok(EigenPair { value, vector, residual: r, iterations: 1 })
}

/// Systems up to this size are solved by dense Cholesky.
const DENSE_SOLVE_MAX: usize = 150;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub x: Vec<f64>,
    pub residual: f64,
}

/// Solves `A x = b` for symmetric positive definite `A`, with one step of
/// iterative refinement.
pub fn solve_spd(a: &SymMatrix, b: &[f64], tol: f64) -> Result<LinearSolution> {
    type Solver = Box<dyn Fn(&[f64]) -> Vec<f64>>;
    let solve: Solver = if a.dim() <= DENSE_SOLVE_MAX {
        let chol = a
            .to_dense()
            .cholesky()
            .ok_or_else(|| Error::Precondition("matrix is not positive definite".into()))?;
        Box::new(move |r: &[f64]| chol.solve(&DVector::from_column_slice(r)).as_slice().to_vec())
    } else {
        let ldl = a.factor()?;
        Box::new(move |r: &[f64]| ldl.solve(r))
    };
    let mut x = solve(b);
    let r: Vec<f64> = a.mul_vec(&x).iter().zip(b).map(|(ax, bi)| bi - ax).collect();
    let dx = solve(&r);
    x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
    let res = max_abs(a.mul_vec(&x).iter().zip(b).map(|(ax, bi)| ax - bi));
    if res > tol {
        return Err(Error::NoConvergence { residual: res, iterations: 2 });
    }
    Ok(LinearSolution { x, residual: res })
}
