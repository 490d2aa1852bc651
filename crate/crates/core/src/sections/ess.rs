use crate::linalg::{self, CMatrix, I};
use crate::{Error, Result};

/// Unitary `u = b + i sqrt(1 - b^2)` built from `b = (a + a*)/2`.
#[derive(Debug, Clone)]
pub struct EssUnitary {
    pub u: CMatrix,
    pub b: CMatrix,
    /// `||u - a||`.
    pub deformation: f64,
    /// `||a - a*||/2 + ||sqrt(1 - b^2)||`.
    pub bound: f64,
    /// Clipped negative eigenvalue of `1 - b^2`.
    pub sqrt_defect: f64,
}

pub fn ess_sa_unitary(a: &CMatrix) -> Result<EssUnitary> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("matrix must be square".into()));
    }
    let norm = linalg::op_norm(a);
    if norm > 1.0 + 1e-12 {
        return Err(Error::NormTooLarge { norm });
    }
    let n = a.nrows();
    let b = linalg::hermitian_part(a);
    let (root, sqrt_defect) = linalg::sqrt_psd(&(linalg::identity(n) - &b * &b));
    let u = &b + &root * I;
    let deformation = linalg::op_norm(&(&u - a));
    let bound = linalg::op_norm(&(a - a.adjoint())) / 2.0 + linalg::hermitian_norm(&root);
    Ok(EssUnitary {
        u,
        b,
        deformation,
        bound,
        sqrt_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real, real_diagonal};

    #[test]
    fn self_adjoint_input() {
        let a = real_diagonal(&[0.6, -0.8]);
        let out = ess_sa_unitary(&a).unwrap();
        let expect = &a + real_diagonal(&[0.8, 0.6]) * I;
        assert!(linalg::max_abs(&(out.u - expect)) < 1e-14);
    }

    #[test]
    fn symmetry_is_fixed() {
        let a = from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let out = ess_sa_unitary(&a).unwrap();
        assert!(linalg::max_abs(&(out.u - &a)) < 1e-12);
    }

    #[test]
    fn nilpotent_input() {
        let a = from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let out = ess_sa_unitary(&a).unwrap();
        assert!(linalg::max_abs(&(&out.b - from_real(2, 2, &[0.0, 0.5, 0.5, 0.0]))) < 1e-15);
        assert!(linalg::unitarity_defect(&out.u) < 1e-10);
        assert!(out.deformation <= out.bound + 1e-12);
    }

    #[test]
    fn rejects_large_norm() {
        let err = ess_sa_unitary(&real_diagonal(&[1.5])).unwrap_err();
        assert_eq!(err.reason(), "norm_too_large");
    }
}
