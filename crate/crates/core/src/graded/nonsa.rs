use serde::Serialize;

use crate::config::Tolerances;
use crate::graded::cl1::{kernel_cl1_section, odd_gamma};
use crate::graded::hat::{hat, off_diagonal_block};
use crate::graded::signature::kernel_signature;
use crate::linalg::{self, CMatrix};
use crate::opcore::SpectralDecomposition;
use crate::sections::CutoffProfile;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct NonSaCorrection {
    #[serde(skip)]
    pub correction: CMatrix,
    /// Smallest singular value of `A + C`.
    pub min_singular: f64,
    /// `||(1 - 1_[0,r)(AA*)) C||`.
    pub range_defect: f64,
    /// `||C 1_[r,inf)(A*A)||`.
    pub kernel_defect: f64,
    pub norm: f64,
}

/// Correction `C` of a `k' x k` matrix with `A + C` invertible, supported on
/// the spectral windows `[0, r)` of `AA*` and `A*A`.
///
/// The cutoff `r` refers to `AA*`; on the graded operator `A-hat` it is `sqrt(r)`.
pub fn nonsa_correction(a: &CMatrix, r: f64, profile: CutoffProfile, tol: &Tolerances) -> Result<NonSaCorrection> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("cutoff must be positive, got {r}")));
    }
    let ahat = hat(a)?;
    let sig = kernel_signature(&ahat, None, tol)?;
    if sig.signature != 0 {
        return Err(Error::IndexObstruction {
            signature: sig.signature,
        });
    }
    let cutoff = r.sqrt();
    let p = kernel_cl1_section(&ahat, tol)?;
    let big = odd_gamma(&ahat, &p, cutoff, profile, tol)?;
    let k = a.ncols();
    let correction = off_diagonal_block(&big, k);

    let sum = a + &correction;
    let sv = sum.clone().singular_values();
    let min_singular = sv.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let aa = SpectralDecomposition::from_hermitian(&(a * a.adjoint()));
    let outside_range = aa.projector(|v| v >= r);
    let range_defect = linalg::op_norm(&(outside_range * &correction));
    let ata = SpectralDecomposition::from_hermitian(&(a.adjoint() * a));
    let outside_kernel = ata.projector(|v| v >= r);
    let kernel_defect = linalg::op_norm(&(&correction * outside_kernel));
    let norm = linalg::op_norm(&correction);
    Ok(NonSaCorrection {
        correction,
        min_singular,
        range_defect,
        kernel_defect,
        norm,
    })
}
