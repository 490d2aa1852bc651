use crate::config::Tolerances;
use crate::linalg::{self, c, CMatrix};
use crate::opcore::{SpectralDecomposition, TailDescriptor, TruncatedOperator};
use crate::{Error, Result};

/// A symmetry `sigma` (Hermitian, `sigma^2 = 1`) splitting the model space.
#[derive(Debug, Clone, PartialEq)]
pub struct Grading {
    sigma: CMatrix,
    plus_dim: usize,
    minus_dim: usize,
    /// Orthonormal bases of the `+1` and `-1` eigenspaces.
    plus_basis: CMatrix,
    minus_basis: CMatrix,
}

impl Grading {
    pub fn new(sigma: CMatrix) -> Result<Self> {
        if !sigma.is_square() || sigma.nrows() == 0 {
            return Err(Error::DimensionMismatch("grading must be a nonempty square matrix".into()));
        }
        let n = sigma.nrows();
        let herm = linalg::op_norm(&(&sigma - sigma.adjoint()));
        let square = linalg::op_norm(&(&sigma * &sigma - linalg::identity(n)));
        let defect = herm.max(square);
        if defect > 1e-10 {
            return Err(Error::NotSymmetry { defect });
        }
        let sigma = linalg::hermitian_part(&sigma);
        let dec = SpectralDecomposition::from_hermitian(&sigma);
        let (_, plus_basis) = dec.columns_where(|v| v > 0.0);
        let (_, minus_basis) = dec.columns_where(|v| v < 0.0);
        Ok(Grading {
            plus_dim: plus_basis.ncols(),
            minus_dim: minus_basis.ncols(),
            sigma,
            plus_basis,
            minus_basis,
        })
    }

    /// `diag(1_k, -1_k')`.
    pub fn standard(plus: usize, minus: usize) -> Self {
        let mut v = vec![1.0; plus];
        v.extend(std::iter::repeat_n(-1.0, minus));
        Grading::new(linalg::real_diagonal(&v)).expect("diagonal symmetry")
    }

    pub fn sigma(&self) -> &CMatrix {
        &self.sigma
    }

    pub fn plus_dim(&self) -> usize {
        self.plus_dim
    }

    pub fn minus_dim(&self) -> usize {
        self.minus_dim
    }

    pub fn dim(&self) -> usize {
        self.plus_dim + self.minus_dim
    }

    pub fn plus_basis(&self) -> &CMatrix {
        &self.plus_basis
    }

    pub fn minus_basis(&self) -> &CMatrix {
        &self.minus_basis
    }

    /// `sigma m sigma`.
    pub fn conjugate(&self, m: &CMatrix) -> CMatrix {
        &self.sigma * m * &self.sigma
    }

    /// `||sigma m + m sigma||`.
    pub fn anticommutator(&self, m: &CMatrix) -> f64 {
        linalg::op_norm(&(&self.sigma * m + m * &self.sigma))
    }

    /// Odd part `(m - sigma m sigma) / 2`.
    pub fn odd_part(&self, m: &CMatrix) -> CMatrix {
        (m - self.conjugate(m)) * c(0.5)
    }
}

/// An operator anticommuting with a grading.
#[derive(Debug, Clone, PartialEq)]
pub struct OddOperator {
    base: TruncatedOperator,
    grading: Grading,
}

impl OddOperator {
    pub fn new(base: TruncatedOperator, grading: Grading) -> Result<Self> {
        Self::with_tolerance(base, grading, &Tolerances::default())
    }

    pub fn with_tolerance(base: TruncatedOperator, grading: Grading, tol: &Tolerances) -> Result<Self> {
        if base.dim() != grading.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator of dimension {} with grading of dimension {}",
                base.dim(),
                grading.dim()
            )));
        }
        let defect = grading.anticommutator(base.entries());
        if defect > tol.oddness * (1.0 + base.norm()) {
            return Err(Error::NotOdd { defect });
        }
        Ok(OddOperator { base, grading })
    }

    /// Odd operator from a matrix, with the alternating tail of odd operators.
    pub fn from_matrix(entries: CMatrix, grading: Grading) -> Result<Self> {
        Self::new(TruncatedOperator::new(entries, TailDescriptor::alternating())?, grading)
    }

    pub fn base(&self) -> &TruncatedOperator {
        &self.base
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn sigma(&self) -> &CMatrix {
        self.grading.sigma()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Largest `|lambda_k + lambda_{N-1-k}|` over the ascending spectrum.
    pub fn pairing_defect(&self) -> f64 {
        let v = self.base.eig().eigenvalues();
        let n = v.len();
        (0..n).fold(0.0_f64, |a, k| a.max((v[k] + v[n - 1 - k]).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real;

    #[test]
    fn standard_grading() {
        let g = Grading::standard(2, 1);
        assert_eq!((g.plus_dim(), g.minus_dim()), (2, 1));
        assert_eq!(g.plus_basis().ncols(), 2);
        let x = from_real(3, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert!(g.anticommutator(&x) < 1e-15);
    }

    #[test]
    fn rejects_non_symmetry() {
        let err = Grading::new(linalg::real_diagonal(&[1.0, 2.0])).unwrap_err();
        assert_eq!(err.reason(), "not_symmetry");
    }

    #[test]
    fn odd_operator_needs_anticommutation() {
        let g = Grading::standard(1, 1);
        assert!(OddOperator::from_matrix(from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]), g.clone()).is_ok());
        let err = OddOperator::from_matrix(linalg::identity(2), g).unwrap_err();
        assert_eq!(err.reason(), "not_odd");
    }
}
