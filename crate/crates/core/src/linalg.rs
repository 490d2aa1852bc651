//! Dense complex matrix helpers built on nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};

pub use nalgebra::Complex;

pub type Complex64 = Complex<f64>;
pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn real_diagonal(values: &[f64]) -> CMatrix {
    let n = values.len();
    let mut m = CMatrix::zeros(n, n);
    for (k, &v) in values.iter().enumerate() {
        m[(k, k)] = c(v);
    }
    m
}

pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, values.iter().map(|&v| c(v)))
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Entrywise hermiticity defect `max |m - m*|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Operator norm (largest singular value), computed from the smaller Gram matrix.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = if m.nrows() >= m.ncols() {
        m.adjoint() * m
    } else {
        m * m.adjoint()
    };
    let top = gram
        .symmetric_eigenvalues()
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v));
    top.max(0.0).sqrt()
}

/// Operator norm of a Hermitian matrix as its spectral radius.
pub fn hermitian_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.symmetric_eigenvalues()
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v.abs()))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Maximum column 2-norm, a lower bound for the operator norm.
pub fn max_column_norm(m: &CMatrix) -> f64 {
    m.column_iter().fold(0.0_f64, |acc, col| acc.max(col.norm()))
}

/// Dense Hermitian eigensolver with a reproducible output convention.
///
/// Eigenvalues ascend. Inside a cluster of (numerically) equal eigenvalues
/// the basis is rebuilt by pivoted Gram-Schmidt on the cluster projector
/// applied to the standard basis, and every column is rotated so its first
/// non-negligible component is real and positive.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let herm = hermitian_part(m);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    let scale = 1.0 + values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let cluster_tol = 1e-10 * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            canonicalize_cluster(&mut vectors, start, end);
        }
        start = end;
    }
    for k in 0..n {
        fix_phase(&mut vectors, k);
    }
    (values, vectors)
}

fn canonicalize_cluster(vectors: &mut CMatrix, start: usize, end: usize) {
    let n = vectors.nrows();
    let block = vectors.columns(start, end - start).into_owned();
    let proj = &block * block.adjoint();
    let mut residuals: Vec<nalgebra::DVector<Complex64>> =
        (0..n).map(|j| proj.column(j).into_owned()).collect();
    let mut used = vec![false; n];
    for slot in start..end {
        let top = (0..n)
            .filter(|&j| !used[j])
            .map(|j| residuals[j].norm())
            .fold(0.0_f64, f64::max);
        if top < 1e-12 {
            break;
        }
        // lowest index among near-maximal residuals, so ties resolve deterministically
        let Some(pick) = (0..n).find(|&j| !used[j] && residuals[j].norm() >= top * (1.0 - 1e-9))
        else {
            break;
        };
        let norm = residuals[pick].norm();
        used[pick] = true;
        let q = &residuals[pick] / c(norm);
        for (j, r) in residuals.iter_mut().enumerate() {
            if !used[j] {
                let overlap = q.dotc(r);
                *r -= &q * overlap;
            }
        }
        vectors.set_column(slot, &q);
    }
}

fn fix_phase(vectors: &mut CMatrix, k: usize) {
    let col = vectors.column(k);
    let pivot = col.iter().copied().find(|z| z.norm() > 1e-10);
    if let Some(z) = pivot {
        let phase = z.conj() / c(z.norm());
        let mut colm = vectors.column_mut(k);
        colm *= phase;
    }
}

/// `U diag(g(lambda)) U*` for an eigenpair set.
pub fn spectral_apply<F>(values: &[f64], vectors: &CMatrix, g: F) -> CMatrix
where
    F: Fn(f64) -> Complex64,
{
    let mut scaled = vectors.clone();
    for (k, &lam) in values.iter().enumerate() {
        let w = g(lam);
        let mut col = scaled.column_mut(k);
        col *= w;
    }
    scaled * vectors.adjoint()
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Negative round-off eigenvalues are clipped to zero; the magnitude of the
/// most negative clipped eigenvalue is returned as the defect.
pub fn sqrt_psd(m: &CMatrix) -> (CMatrix, f64) {
    let (values, vectors) = eigh(m);
    let defect = values.iter().fold(0.0_f64, |a, &v| a.max(-v));
    let root = spectral_apply(&values, &vectors, |v| c(v.max(0.0).sqrt()));
    (root, defect)
}

/// `||u* u - 1||` in operator norm.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    op_norm(&(u.adjoint() * u - identity(n)))
}

/// `||m^2 - m||` and `||m - m*||` combined into one projection defect.
pub fn projection_defect(m: &CMatrix) -> f64 {
    let idem = op_norm(&(m * m - m));
    let herm = op_norm(&(m - m.adjoint()));
    idem.max(herm)
}

/// Exponential `exp(i H)` of a Hermitian matrix.
pub fn unitary_exp(h: &CMatrix) -> CMatrix {
    let (values, vectors) = eigh(h);
    spectral_apply(&values, &vectors, |v| Complex64::new(v.cos(), v.sin()))
}
