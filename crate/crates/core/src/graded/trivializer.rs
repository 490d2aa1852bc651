use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::graded::grading::OddOperator;
use crate::linalg::{self, CMatrix};
use crate::opcore::{ProjectionMatrix, SpectralDecomposition};
use crate::sections::{is_spectral_section, SectionCheck};
use crate::{Error, Result};

/// Even profile supported in `[-r, r]` and nonzero at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvenProfile {
    /// `max(0, 1 - (t/r)^2) * r`.
    #[default]
    Bump,
    /// `max(0, 1 - |t|/r) * r`.
    Tent,
}

impl EvenProfile {
    pub fn eval(self, t: f64, r: f64) -> f64 {
        let s = (t / r).abs();
        match self {
            EvenProfile::Bump => (1.0 - s * s).max(0.0) * r,
            EvenProfile::Tent => (1.0 - s).max(0.0) * r,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OddTrivializer {
    /// `C = sigma psi(A)`.
    pub correction: CMatrix,
    /// `chi+(A + C)`.
    pub projection: ProjectionMatrix,
    /// `||(A + C)^2 - A^2 - psi(A)^2||`.
    pub identity_defect: f64,
    pub min_abs_eigenvalue: f64,
    pub section: SectionCheck,
}

/// `C = sigma psi(A)`, so that `(A + C)^2 = A^2 + psi(A)^2`.
pub fn odd_trivializer(
    a: &OddOperator,
    r: f64,
    profile: EvenProfile,
    tol: &Tolerances,
) -> Result<OddTrivializer> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("cutoff must be positive, got {r}")));
    }
    let dec = a.base().eig();
    let worst = dec
        .eigenvalues()
        .iter()
        .map(|&l| l * l + profile.eval(l, r).powi(2))
        .fold(f64::INFINITY, f64::min);
    if worst < 1e-12 {
        return Err(Error::ProfileTooSmall { value: worst });
    }
    let psi = dec.apply_real(|l| profile.eval(l, r));
    let correction = linalg::hermitian_part(&(a.sigma() * &psi));
    let am = a.base().entries();
    let sum = am + &correction;
    let identity_defect = linalg::op_norm(&(&sum * &sum - am * am - &psi * &psi));
    let sum_dec = SpectralDecomposition::from_hermitian(&sum);
    let threshold = a.base().invertibility_threshold(tol);
    if sum_dec.min_abs() <= threshold {
        return Err(Error::Singular {
            min_abs: sum_dec.min_abs(),
            threshold,
        });
    }
    let projection = ProjectionMatrix::with_tolerance(
        linalg::hermitian_part(&sum_dec.projector(|v| v > 0.0)),
        a.base().tail().positive_tail_type(),
        tol.idempotency,
    )?;
    let section = is_spectral_section(a.base(), &projection, r, tol)?;
    Ok(OddTrivializer {
        correction,
        projection,
        identity_defect,
        min_abs_eigenvalue: sum_dec.min_abs(),
        section,
    })
}
