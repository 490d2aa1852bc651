use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::linalg::{self, c, CMatrix};
use crate::opcore::projection::IntervalSpec;
use crate::opcore::spectral::SpectralDecomposition;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Asymptotic sign structure of the spectrum beyond the truncation window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailKind {
    PositiveGrowth,
    NegativeGrowth,
    /// Tail mode `n` (1-based) has sign `pattern[(n - 1) % pattern.len()]`.
    MixedSigned { pattern: Vec<Sign> },
}

/// Which asymptotic tail modes a projection contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailType {
    Zero,
    Identity,
    /// Only the positively signed tail modes of a mixed tail.
    PositiveModes,
    /// Only the negatively signed tail modes of a mixed tail.
    NegativeModes,
}

impl TailType {
    /// Tail type of `1 - P`.
    pub fn complement(self) -> TailType {
        match self {
            TailType::Zero => TailType::Identity,
            TailType::Identity => TailType::Zero,
            TailType::PositiveModes => TailType::NegativeModes,
            TailType::NegativeModes => TailType::PositiveModes,
        }
    }
}

/// Stand-in for the unbounded discrete spectrum a truncation cuts off.
///
/// Tail mode `n > dim` carries the eigenvalue `sign(n) * scale * n^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailDescriptor {
    kind: TailKind,
    exponent: f64,
    scale: f64,
}

impl TailDescriptor {
    pub fn new(kind: TailKind, exponent: f64, scale: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tail exponent must be positive so the rate increases, got {exponent}"
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tail scale must be positive, got {scale}"
            )));
        }
        if let TailKind::MixedSigned { pattern } = &kind {
            if pattern.is_empty() {
                return Err(Error::InvalidInput("empty tail sign pattern".into()));
            }
        }
        Ok(TailDescriptor {
            kind,
            exponent,
            scale,
        })
    }

    /// Linear positive tail `n -> n`.
    pub fn positive() -> Self {
        TailDescriptor {
            kind: TailKind::PositiveGrowth,
            exponent: 1.0,
            scale: 1.0,
        }
    }

    pub fn negative() -> Self {
        TailDescriptor {
            kind: TailKind::NegativeGrowth,
            exponent: 1.0,
            scale: 1.0,
        }
    }

    /// Alternating `+, -` tail, the natural tail of an odd operator.
    pub fn alternating() -> Self {
        TailDescriptor {
            kind: TailKind::MixedSigned {
                pattern: vec![Sign::Plus, Sign::Minus],
            },
            exponent: 1.0,
            scale: 1.0,
        }
    }

    pub fn with_rate(mut self, exponent: f64, scale: f64) -> Result<Self> {
        self = TailDescriptor::new(self.kind, exponent, scale)?;
        Ok(self)
    }

    pub fn kind(&self) -> &TailKind {
        &self.kind
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn magnitude(&self, index: usize) -> f64 {
        self.scale * (index as f64).powf(self.exponent)
    }

    pub fn sign(&self, index: usize) -> Sign {
        match &self.kind {
            TailKind::PositiveGrowth => Sign::Plus,
            TailKind::NegativeGrowth => Sign::Minus,
            TailKind::MixedSigned { pattern } => pattern[(index.max(1) - 1) % pattern.len()],
        }
    }

    pub fn eigenvalue(&self, index: usize) -> f64 {
        self.sign(index).value() * self.magnitude(index)
    }

    /// Smallest tail magnitude for a window of size `dim`; cutoffs must stay below it.
    pub fn threshold(&self, dim: usize) -> f64 {
        self.magnitude(dim + 1)
    }

    fn has_sign(&self, sign: Sign) -> bool {
        match &self.kind {
            TailKind::PositiveGrowth => sign == Sign::Plus,
            TailKind::NegativeGrowth => sign == Sign::Minus,
            TailKind::MixedSigned { pattern } => pattern.contains(&sign),
        }
    }

    /// Tail type of the spectral projection onto `interval`, judged by
    /// whether the interval reaches `+inf` and `-inf`.
    pub fn tail_type_for(&self, interval: &IntervalSpec) -> TailType {
        let pos = self.has_sign(Sign::Plus) && interval.upper() == f64::INFINITY;
        let neg = self.has_sign(Sign::Minus) && interval.lower() == f64::NEG_INFINITY;
        let covers_pos = pos || !self.has_sign(Sign::Plus);
        let covers_neg = neg || !self.has_sign(Sign::Minus);
        match (pos || neg, covers_pos && covers_neg) {
            (false, _) => TailType::Zero,
            (true, true) => TailType::Identity,
            (true, false) if pos => TailType::PositiveModes,
            (true, false) => TailType::NegativeModes,
        }
    }

    /// Tail type of the positive spectral projection `1_[0,inf)`.
    pub fn positive_tail_type(&self) -> TailType {
        self.tail_type_for(&IntervalSpec::at_least(0.0))
    }
}

/// Finite Hermitian model of a self-adjoint operator with compact resolvent.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    entries: CMatrix,
    tail: TailDescriptor,
    spectrum: OnceLock<SpectralDecomposition>,
}

impl PartialEq for TruncatedOperator {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.tail == other.tail
    }
}

impl TruncatedOperator {
    pub fn new(entries: CMatrix, tail: TailDescriptor) -> Result<Self> {
        Self::with_tolerance(entries, tail, &Tolerances::default())
    }

    pub fn with_tolerance(entries: CMatrix, tail: TailDescriptor, tol: &Tolerances) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidInput("operator dimension must be at least 1".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("operator has non-finite entries".into()));
        }
        let defect = linalg::hermiticity_defect(&entries);
        if defect > tol.hermiticity {
            return Err(Error::NotHermitian {
                defect,
                tolerance: tol.hermiticity,
            });
        }
        Ok(TruncatedOperator {
            entries: linalg::hermitian_part(&entries),
            tail,
            spectrum: OnceLock::new(),
        })
    }

    pub fn from_real_diagonal(values: &[f64], tail: TailDescriptor) -> Result<Self> {
        Self::new(linalg::real_diagonal(values), tail)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn tail(&self) -> &TailDescriptor {
        &self.tail
    }

    /// Cached eigendecomposition.
    pub fn eig(&self) -> &SpectralDecomposition {
        self.spectrum
            .get_or_init(|| SpectralDecomposition::from_hermitian(&self.entries))
    }

    pub fn norm(&self) -> f64 {
        self.eig().spectral_radius()
    }

    /// `A + x`.
    pub fn shifted(&self, x: f64) -> TruncatedOperator {
        let n = self.dim();
        let entries = &self.entries + linalg::identity(n) * c(x);
        let spectrum = OnceLock::new();
        if let Some(dec) = self.spectrum.get() {
            let _ = spectrum.set(dec.shifted(x));
        }
        TruncatedOperator {
            entries,
            tail: self.tail.clone(),
            spectrum,
        }
    }

    /// Replace the matrix, keeping the tail.
    pub fn with_entries(&self, entries: CMatrix) -> Result<TruncatedOperator> {
        TruncatedOperator::new(entries, self.tail.clone())
    }

    pub fn compatible_with(&self, other: &TruncatedOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operators of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        if self.tail != other.tail {
            return Err(Error::TailMismatch(format!(
                "{:?} vs {:?}",
                self.tail.kind(),
                other.tail.kind()
            )));
        }
        Ok(())
    }

    /// Invertibility threshold `invertibility * (1 + ||A||)`.
    pub fn invertibility_threshold(&self, tol: &Tolerances) -> f64 {
        tol.invertibility * (1.0 + self.norm())
    }

    /// Kernel threshold `kernel * (1 + ||A||)`.
    pub fn kernel_threshold(&self, tol: &Tolerances) -> f64 {
        tol.kernel * (1.0 + self.norm())
    }

    pub fn is_invertible(&self, tol: &Tolerances) -> bool {
        self.eig().min_abs() > self.invertibility_threshold(tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let m = linalg::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let err = TruncatedOperator::new(m, TailDescriptor::positive()).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { defect, .. } if (defect - 1.0).abs() < 1e-12));
    }

    #[test]
    fn rejects_empty_operator() {
        let err = TruncatedOperator::new(CMatrix::zeros(0, 0), TailDescriptor::positive());
        assert!(err.is_err());
    }

    #[test]
    fn tail_types_follow_interval_ends() {
        let pos = TailDescriptor::positive();
        let neg = TailDescriptor::negative();
        let mixed = TailDescriptor::alternating();
        let up = IntervalSpec::at_least(0.0);
        let down = IntervalSpec::at_most(0.0);
        let window = IntervalSpec::closed(-1.0, 2.0);
        assert_eq!(pos.tail_type_for(&up), TailType::Identity);
        assert_eq!(pos.tail_type_for(&down), TailType::Zero);
        assert_eq!(neg.tail_type_for(&up), TailType::Zero);
        assert_eq!(neg.tail_type_for(&down), TailType::Identity);
        assert_eq!(mixed.tail_type_for(&up), TailType::PositiveModes);
        assert_eq!(mixed.tail_type_for(&down), TailType::NegativeModes);
        assert_eq!(mixed.tail_type_for(&window), TailType::Zero);
        assert_eq!(mixed.tail_type_for(&IntervalSpec::all()), TailType::Identity);
    }

    #[test]
    fn tail_rate_is_monotone() {
        let t = TailDescriptor::positive().with_rate(2.0, 3.0).unwrap();
        assert_eq!(t.threshold(4), 75.0);
        assert!(t.magnitude(6) > t.magnitude(5));
        assert!(TailDescriptor::positive().with_rate(0.0, 1.0).is_err());
        assert_eq!(TailDescriptor::alternating().eigenvalue(2), -2.0);
    }
}
