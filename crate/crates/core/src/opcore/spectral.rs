use crate::config::Tolerances;
use crate::linalg::{self, c, CMatrix, Complex64};
use crate::opcore::operator::TruncatedOperator;
use crate::{Error, Result};

/// Ascending eigenvalues with an orthonormal eigenbasis (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    /// Assumes `m` is Hermitian; only its Hermitian part is used.
    pub fn from_hermitian(m: &CMatrix) -> Self {
        let (eigenvalues, eigenvectors) = linalg::eigh(m);
        SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    pub fn min_abs(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, v| a.min(v.abs()))
    }

    /// `U g(Lambda) U*`.
    pub fn apply<F: Fn(f64) -> Complex64>(&self, g: F) -> CMatrix {
        linalg::spectral_apply(&self.eigenvalues, &self.eigenvectors, g)
    }

    pub fn apply_real<F: Fn(f64) -> f64>(&self, g: F) -> CMatrix {
        self.apply(|v| c(g(v)))
    }

    /// Orthogonal projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn projector<F: Fn(f64) -> bool>(&self, keep: F) -> CMatrix {
        let n = self.dim();
        let idx: Vec<usize> = (0..n).filter(|&k| keep(self.eigenvalues[k])).collect();
        let mut block = CMatrix::zeros(n, idx.len());
        for (j, &k) in idx.iter().enumerate() {
            block.set_column(j, &self.eigenvectors.column(k));
        }
        &block * block.adjoint()
    }

    /// Eigenvector columns selected by `keep`, in ascending eigenvalue order.
    pub fn columns_where<F: Fn(f64) -> bool>(&self, keep: F) -> (Vec<f64>, CMatrix) {
        let n = self.dim();
        let idx: Vec<usize> = (0..n).filter(|&k| keep(self.eigenvalues[k])).collect();
        let mut block = CMatrix::zeros(n, idx.len());
        for (j, &k) in idx.iter().enumerate() {
            block.set_column(j, &self.eigenvectors.column(k));
        }
        (idx.iter().map(|&k| self.eigenvalues[k]).collect(), block)
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_real(|v| v)
    }

    pub fn shifted(&self, x: f64) -> SpectralDecomposition {
        SpectralDecomposition {
            eigenvalues: self.eigenvalues.iter().map(|v| v + x).collect(),
            eigenvectors: self.eigenvectors.clone(),
        }
    }

    /// Fails if an eigenvalue lies within `tol` of `endpoint`.
    pub fn check_endpoint(&self, endpoint: f64, tol: f64) -> Result<()> {
        if !endpoint.is_finite() {
            return Ok(());
        }
        match self
            .eigenvalues
            .iter()
            .find(|&&v| (v - endpoint).abs() <= tol)
        {
            Some(&eigenvalue) => Err(Error::EndpointCollision {
                endpoint,
                eigenvalue,
                tolerance: tol,
            }),
            None => Ok(()),
        }
    }

    /// Checks `+-r` lie in the resolvent set up to the gap tolerance.
    pub fn check_cutoff(&self, r: f64, tol: &Tolerances) -> Result<()> {
        self.check_endpoint(r, tol.gap)?;
        self.check_endpoint(-r, tol.gap)
    }

    /// `max |U*U - 1|` entrywise.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.dim();
        linalg::max_abs(&(self.eigenvectors.adjoint() * &self.eigenvectors - linalg::identity(n)))
    }
}

/// Eigendecomposition of a truncated operator (cached on the operator).
pub fn eig(a: &TruncatedOperator) -> SpectralDecomposition {
    a.eig().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::operator::TailDescriptor;
    use crate::random::{random_hermitian, rng};

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let a = TruncatedOperator::from_real_diagonal(&[3.0, -2.0, 1.0], TailDescriptor::positive())
            .unwrap();
        assert_eq!(eig(&a).eigenvalues(), &[-2.0, 1.0, 3.0]);
    }

    #[test]
    fn zero_matrix_gives_identity_basis() {
        let a = TruncatedOperator::from_real_diagonal(&[0.0, 0.0], TailDescriptor::positive())
            .unwrap();
        let d = eig(&a);
        assert_eq!(d.eigenvalues(), &[0.0, 0.0]);
        assert!(linalg::max_abs(&(d.eigenvectors() - linalg::identity(2))) < 1e-15);
    }

    #[test]
    fn random_reconstruction() {
        let mut g = rng(7);
        let m = random_hermitian(&mut g, 8, 1.0);
        let a = TruncatedOperator::new(m.clone(), TailDescriptor::positive()).unwrap();
        let d = eig(&a);
        let scale = 1.0 + a.norm();
        assert!(linalg::max_abs(&(d.reconstruct() - m)) < 1e-8 * scale);
        assert!(d.orthonormality_defect() < 1e-10);
        assert!(d.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn endpoint_collision_reported() {
        let a = TruncatedOperator::from_real_diagonal(&[-2.0, 1.0, 3.0], TailDescriptor::positive())
            .unwrap();
        let err = a.eig().check_cutoff(1.0, &Tolerances::default()).unwrap_err();
        assert_eq!(err.reason(), "endpoint_collision");
        assert!(a.eig().check_cutoff(1.5, &Tolerances::default()).is_ok());
    }
}
