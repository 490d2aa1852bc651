use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::linalg::{self, c, CMatrix};
use crate::opcore::{ProjectionMatrix, SpectralDecomposition, TailType, TruncatedOperator};
use crate::sections::verify::{is_spectral_section, SpectralSplit};
use crate::{Error, Result};

/// Continuous cutoff `psi` with `psi = 1` on `(-inf, 0]`, `psi = 0` on `[1, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffProfile {
    /// `2t^3 - 3t^2 + 1` on `[0, 1]`.
    #[default]
    Smoothstep,
    /// `1 - t` on `[0, 1]`.
    Linear,
}

impl CutoffProfile {
    pub fn eval(self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        if t >= 1.0 {
            return 0.0;
        }
        match self {
            CutoffProfile::Smoothstep => 2.0 * t * t * t - 3.0 * t * t + 1.0,
            CutoffProfile::Linear => 1.0 - t,
        }
    }

    pub fn all() -> [CutoffProfile; 2] {
        [CutoffProfile::Smoothstep, CutoffProfile::Linear]
    }
}

/// Minimum of `t + psi(t)` over `samples` equispaced points of `(-1 + 1e-6, 10]`.
pub fn psi_positivity(profile: CutoffProfile, samples: usize) -> f64 {
    let lo = -1.0 + 1e-6;
    let hi = 10.0;
    let n = samples.max(2);
    (0..n)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            t + profile.eval(t)
        })
        .fold(f64::INFINITY, f64::min)
}

fn apply_profile(m: &CMatrix, scale: f64, profile: CutoffProfile) -> CMatrix {
    SpectralDecomposition::from_hermitian(m).apply_real(|v| profile.eval(v * scale))
}

/// Trivializing operator `C = C' + C''` of an `r`-spectral section `P`:
/// `C' = -PAQ - QAP` and `C'' = r (P psi(A+/r) P - Q psi(-A-/r) Q)` with
/// `Q = 1 - P`, `A+ = PAP`, `A- = QAQ`.
pub fn gamma(
    a: &TruncatedOperator,
    p: &ProjectionMatrix,
    r: f64,
    profile: CutoffProfile,
    tol: &Tolerances,
) -> Result<CMatrix> {
    let check = is_spectral_section(a, p, r, tol)?;
    if !check.holds {
        let which = if !check.tail_consistent {
            "tail type differs from 1_[r,inf)(A)".to_string()
        } else if check.upper_defect > tol.inclusion {
            format!("1_[r,inf)(A) <= P fails by {:.3e}", check.upper_defect)
        } else {
            format!("P <= 1_(-r,inf)(A) fails by {:.3e}", check.lower_defect)
        };
        return Err(Error::PreconditionFailed(format!("not an {r}-spectral section: {which}")));
    }
    Ok(gamma_unchecked(a.entries(), p.entries(), r, profile))
}

pub(crate) fn gamma_unchecked(a: &CMatrix, p: &CMatrix, r: f64, profile: CutoffProfile) -> CMatrix {
    let n = a.nrows();
    let q = linalg::identity(n) - p;
    let paq = p * a * &q;
    let c1 = -(&paq + paq.adjoint());
    let a_plus = linalg::hermitian_part(&(p * a * p));
    let a_minus = linalg::hermitian_part(&(&q * a * &q));
    let up = p * apply_profile(&a_plus, 1.0 / r, profile) * p;
    let down = &q * apply_profile(&a_minus, -1.0 / r, profile) * &q;
    linalg::hermitian_part(&(c1 + (up - down) * c(r)))
}

/// Measured trivializer contract for one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrivializerCheck {
    pub holds: bool,
    pub norm: f64,
    pub bound: f64,
    pub min_abs_eigenvalue: f64,
    pub invertibility_threshold: f64,
    /// `||chi+(A + C) - P||`.
    pub agreement_defect: f64,
    /// `||(1 - S0) C||`.
    pub window_defect: f64,
    pub tail_consistent: bool,
}

/// Window-range defect `||(1 - 1_(-r,r)(A)) C||`.
pub fn window_defect(a: &TruncatedOperator, corr: &CMatrix, r: f64, tol: &Tolerances) -> f64 {
    let split = SpectralSplit::closed(a, r, tol.gap);
    let outside = linalg::identity(a.dim()) - &split.window;
    linalg::op_norm(&(outside * corr))
}

/// Checks `||C|| < 2r`, invertibility of `A + C`, `chi+(A + C) = P` and the window condition.
pub fn check_trivializer(
    a: &TruncatedOperator,
    corr: &CMatrix,
    p: &ProjectionMatrix,
    r: f64,
    tol: &Tolerances,
) -> Result<TrivializerCheck> {
    if corr.shape() != (a.dim(), a.dim()) || p.dim() != a.dim() {
        return Err(Error::DimensionMismatch("trivializer data of mismatched size".into()));
    }
    let norm = linalg::op_norm(corr);
    let sum = SpectralDecomposition::from_hermitian(&(a.entries() + corr));
    let min_abs_eigenvalue = sum.min_abs();
    let invertibility_threshold = a.invertibility_threshold(tol);
    let chi = sum.projector(|v| v > 0.0);
    let agreement_defect = linalg::hermitian_norm(&(chi - p.entries()));
    let window_defect = window_defect(a, corr, r, tol);
    let tail_consistent = p.tail_type() == a.tail().positive_tail_type();
    let holds = norm < 2.0 * r
        && min_abs_eigenvalue > invertibility_threshold
        && agreement_defect < tol.inclusion
        && window_defect < tol.inclusion
        && tail_consistent;
    Ok(TrivializerCheck {
        holds,
        norm,
        bound: 2.0 * r,
        min_abs_eigenvalue,
        invertibility_threshold,
        agreement_defect,
        window_defect,
        tail_consistent,
    })
}

/// `tau(A, C, r) = (chi+(A + C), r)`.
pub fn tau(
    a: &TruncatedOperator,
    corr: &CMatrix,
    r: f64,
    tol: &Tolerances,
) -> Result<(ProjectionMatrix, f64)> {
    if corr.shape() != (a.dim(), a.dim()) {
        return Err(Error::DimensionMismatch("correction has the wrong size".into()));
    }
    let defect = linalg::hermiticity_defect(corr);
    if defect > tol.hermiticity {
        return Err(Error::NotHermitian {
            defect,
            tolerance: tol.hermiticity,
        });
    }
    let w = window_defect(a, corr, r, tol);
    if w > tol.inclusion {
        return Err(Error::PreconditionFailed(format!(
            "range of C leaves the window (-{r}, {r}) by {w:.3e}"
        )));
    }
    let sum = SpectralDecomposition::from_hermitian(&(a.entries() + corr));
    let threshold = tol.invertibility * (1.0 + a.norm());
    if sum.min_abs() <= threshold {
        return Err(Error::Singular {
            min_abs: sum.min_abs(),
            threshold,
        });
    }
    let tail: TailType = a.tail().positive_tail_type();
    let p = ProjectionMatrix::with_tolerance(
        linalg::hermitian_part(&sum.projector(|v| v > 0.0)),
        tail,
        tol.idempotency,
    )?;
    let check = is_spectral_section(a, &p, r, tol)?;
    if !check.holds {
        return Err(Error::InvariantViolation(format!(
            "chi+(A + C) is not an {r}-spectral section (violation {:.3e})",
            check.violation()
        )));
    }
    Ok((p, r))
}

/// One trivializing operator and cutoff per family sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TrivializerRecord {
    pub corrections: Vec<CMatrix>,
    pub cutoffs: Vec<f64>,
    /// `min_x (2 r_x - ||C_x||)`.
    pub norm_margin: f64,
    pub checks: Vec<TrivializerCheck>,
}

impl TrivializerRecord {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Applies `gamma` samplewise to a family of sections and records the checks.
pub fn trivialize_family(
    operators: &[TruncatedOperator],
    sections: &[ProjectionMatrix],
    cutoffs: &[f64],
    profile: CutoffProfile,
    tol: &Tolerances,
) -> Result<TrivializerRecord> {
    use rayon::prelude::*;
    if operators.len() != sections.len() || operators.len() != cutoffs.len() {
        return Err(Error::DimensionMismatch(
            "operators, sections and cutoffs differ in length".into(),
        ));
    }
    let results: Vec<Result<(CMatrix, TrivializerCheck)>> = (0..operators.len())
        .into_par_iter()
        .map(|i| {
            let corr = gamma(&operators[i], &sections[i], cutoffs[i], profile, tol)?;
            let check = check_trivializer(&operators[i], &corr, &sections[i], cutoffs[i], tol)?;
            Ok((corr, check))
        })
        .collect();
    let mut corrections = Vec::with_capacity(results.len());
    let mut checks = Vec::with_capacity(results.len());
    for r in results {
        let (corr, check) = r?;
        corrections.push(corr);
        checks.push(check);
    }
    let norm_margin = checks
        .iter()
        .map(|c| c.bound - c.norm)
        .fold(f64::INFINITY, f64::min);
    Ok(TrivializerRecord {
        corrections,
        cutoffs: cutoffs.to_vec(),
        norm_margin,
        checks,
    })
}
