use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::linalg::{self, CMatrix};
use crate::opcore::{positive_projection_lenient, ProjectionMatrix, TailType, TruncatedOperator};
use crate::{Error, Result};

/// The three spectral projections `S- = 1_(-inf,-r]`, `S0 = 1_(-r,r)`,
/// `S+ = 1_[r,inf)` of an operator.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    pub minus: CMatrix,
    pub window: CMatrix,
    pub plus: CMatrix,
}

impl SpectralSplit {
    /// Requires `+-r` in the resolvent set up to the gap tolerance.
    pub fn new(a: &TruncatedOperator, r: f64, tol: &Tolerances) -> Result<Self> {
        check_cutoff(a, r, tol)?;
        Ok(Self::split(a, r, 0.0))
    }

    /// Split that tolerates eigenvalues at `+-r`; eigenvalues within `slack`
    /// of `r` count as `>= r` and those within `slack` of `-r` as `<= -r`.
    pub fn closed(a: &TruncatedOperator, r: f64, slack: f64) -> Self {
        Self::split(a, r, slack)
    }

    fn split(a: &TruncatedOperator, r: f64, slack: f64) -> Self {
        let dec = a.eig();
        SpectralSplit {
            minus: dec.projector(|v| v <= -r + slack),
            window: dec.projector(|v| v > -r + slack && v < r - slack),
            plus: dec.projector(|v| v >= r - slack),
        }
    }
}

pub(crate) fn check_positive_below_tail(a: &TruncatedOperator, r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("cutoff must be positive, got {r}")));
    }
    let threshold = a.tail().threshold(a.dim());
    if r >= threshold {
        return Err(Error::CutoffBeyondTail {
            cutoff: r,
            threshold,
        });
    }
    Ok(())
}

/// `r` must be positive, below the tail threshold, and `+-r` must avoid the spectrum.
pub fn check_cutoff(a: &TruncatedOperator, r: f64, tol: &Tolerances) -> Result<()> {
    check_positive_below_tail(a, r)?;
    a.eig().check_cutoff(r, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionCheck {
    pub holds: bool,
    /// `||(1 - P) S+||`.
    pub upper_defect: f64,
    /// `||P S-||`.
    pub lower_defect: f64,
    pub tail_consistent: bool,
}

impl SectionCheck {
    pub fn violation(&self) -> f64 {
        self.upper_defect.max(self.lower_defect)
    }
}

/// Checks `1_[r,inf)(A) <= P <= 1_(-r,inf)(A)` on the window and on the tail.
///
/// `r` may be an eigenvalue. Eigenvalues within the gap tolerance of `+-r`
/// are held to the stricter of the two possible requirements.
pub fn is_spectral_section(
    a: &TruncatedOperator,
    p: &ProjectionMatrix,
    r: f64,
    tol: &Tolerances,
) -> Result<SectionCheck> {
    if p.dim() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {} with projection of dimension {}",
            a.dim(),
            p.dim()
        )));
    }
    check_positive_below_tail(a, r)?;
    let split = SpectralSplit::closed(a, r, tol.gap);
    Ok(section_check_with_split(a, p, &split, tol))
}

pub(crate) fn section_check_with_split(
    a: &TruncatedOperator,
    p: &ProjectionMatrix,
    split: &SpectralSplit,
    tol: &Tolerances,
) -> SectionCheck {
    let q = linalg::identity(p.dim()) - p.entries();
    let upper_defect = linalg::op_norm(&(q * &split.plus));
    let lower_defect = linalg::op_norm(&(p.entries() * &split.minus));
    // beyond the window the cutoff sits below every tail magnitude, so the
    // tail of a section is exactly that of 1_[r,inf)(A)
    let tail_consistent = p.tail_type() == a.tail().positive_tail_type();
    SectionCheck {
        holds: tail_consistent && upper_defect <= tol.inclusion && lower_defect <= tol.inclusion,
        upper_defect,
        lower_defect,
        tail_consistent,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GssCheck {
    pub holds: bool,
    pub tail_consistent: bool,
    /// Singular value of `P - chi+(A)` at position `rank_budget` (0 if none).
    pub residual: f64,
    pub rank_budget: usize,
}

/// Default rank budget `N / 2`.
pub fn default_rank_budget(dim: usize) -> usize {
    dim / 2
}

/// Finite-model compactness of `P - chi+(A)`: tail agreement plus singular
/// values beyond `rank_budget` at most `eps`.
pub fn is_generalized_section(
    a: &TruncatedOperator,
    p: &ProjectionMatrix,
    rank_budget: usize,
    eps: f64,
    tol: &Tolerances,
) -> Result<GssCheck> {
    if p.dim() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {} with projection of dimension {}",
            a.dim(),
            p.dim()
        )));
    }
    let chi = positive_projection_lenient(a, tol);
    let tail_consistent = chi.tail_type() == p.tail_type();
    let diff = p.entries() - chi.entries();
    let mut sv: Vec<f64> = diff
        .symmetric_eigenvalues()
        .iter()
        .map(|v| v.abs())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    let residual = sv.get(rank_budget).copied().unwrap_or(0.0);
    Ok(GssCheck {
        holds: tail_consistent && residual <= eps,
        tail_consistent,
        residual,
        rank_budget,
    })
}

/// Tail type of the positive projection, used to compare samples.
pub fn chi_plus_tail(a: &TruncatedOperator) -> TailType {
    a.tail().positive_tail_type()
}
