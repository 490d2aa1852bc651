use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::graded::grading::OddOperator;
use crate::linalg::{self, CMatrix};
use crate::opcore::SpectralDecomposition;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSignature {
    pub kernel_dim: usize,
    pub signature: i64,
    /// Signature of `sigma` on the range of `1_(-r,r)(A)`, when a cutoff was supplied.
    pub window_signature: Option<i64>,
}

/// Separation factor between round-off kernel modes and genuine eigenvalues.
const AMBIGUITY_BAND: f64 = 100.0;

/// Orthonormal basis of `ker A`, failing when an eigenvalue sits too close
/// to the kernel threshold to classify.
pub fn kernel_basis(a: &OddOperator, tol: &Tolerances) -> Result<CMatrix> {
    let thr = a.base().kernel_threshold(tol);
    let dec = a.base().eig();
    if let Some(&v) = dec
        .eigenvalues()
        .iter()
        .find(|v| v.abs() > thr / AMBIGUITY_BAND && v.abs() <= thr * AMBIGUITY_BAND)
    {
        return Err(Error::KernelAmbiguity {
            eigenvalue: v,
            threshold: thr,
        });
    }
    Ok(dec.columns_where(|v| v.abs() <= thr).1)
}

/// Signature of `xi -> <xi, sigma xi>` on the span of `basis`.
pub fn signature_on(sigma: &CMatrix, basis: &CMatrix) -> i64 {
    if basis.ncols() == 0 {
        return 0;
    }
    let form = linalg::hermitian_part(&(basis.adjoint() * sigma * basis));
    let dec = SpectralDecomposition::from_hermitian(&form);
    let pos = dec.eigenvalues().iter().filter(|&&v| v > 0.5).count() as i64;
    let neg = dec.eigenvalues().iter().filter(|&&v| v < -0.5).count() as i64;
    pos - neg
}

/// Signature of the grading on `ker A`, and on the window `(-r, r)` if `r` is given.
pub fn kernel_signature(a: &OddOperator, r: Option<f64>, tol: &Tolerances) -> Result<KernelSignature> {
    let kernel = kernel_basis(a, tol)?;
    let signature = signature_on(a.sigma(), &kernel);
    let window_signature = match r {
        Some(r) => {
            a.base().eig().check_cutoff(r, tol)?;
            let window = a.base().eig().columns_where(|v| v.abs() < r).1;
            let w = signature_on(a.sigma(), &window);
            if w != signature {
                return Err(Error::InvariantViolation(format!(
                    "window signature {w} differs from kernel signature {signature}"
                )));
            }
            Some(w)
        }
        None => None,
    };
    Ok(KernelSignature {
        kernel_dim: kernel.ncols(),
        signature,
        window_signature,
    })
}
