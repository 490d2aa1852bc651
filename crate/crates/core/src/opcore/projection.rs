use crate::config::Tolerances;
use crate::linalg::{self, c, CMatrix};
use crate::opcore::operator::{TailType, TruncatedOperator};
use crate::{Error, Result};

/// Real interval with optional infinite ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSpec {
    lower: f64,
    upper: f64,
    closed_lower: bool,
    closed_upper: bool,
}

impl IntervalSpec {
    pub fn new(lower: f64, upper: f64, closed_lower: bool, closed_upper: bool) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::InvalidInput(format!(
                "interval needs lower <= upper, got [{lower}, {upper}]"
            )));
        }
        Ok(IntervalSpec {
            lower,
            upper,
            closed_lower: closed_lower && lower.is_finite(),
            closed_upper: closed_upper && upper.is_finite(),
        })
    }

    fn raw(lower: f64, upper: f64, closed_lower: bool, closed_upper: bool) -> Self {
        IntervalSpec::new(lower, upper, closed_lower, closed_upper).expect("well-ordered interval")
    }

    pub fn closed(lower: f64, upper: f64) -> Self {
        Self::raw(lower, upper, true, true)
    }

    pub fn open(lower: f64, upper: f64) -> Self {
        Self::raw(lower, upper, false, false)
    }

    /// `[a, inf)`.
    pub fn at_least(a: f64) -> Self {
        Self::raw(a, f64::INFINITY, true, false)
    }

    /// `(a, inf)`.
    pub fn above(a: f64) -> Self {
        Self::raw(a, f64::INFINITY, false, false)
    }

    /// `(-inf, b]`.
    pub fn at_most(b: f64) -> Self {
        Self::raw(f64::NEG_INFINITY, b, false, true)
    }

    /// `(-inf, b)`.
    pub fn below(b: f64) -> Self {
        Self::raw(f64::NEG_INFINITY, b, false, false)
    }

    pub fn all() -> Self {
        Self::raw(f64::NEG_INFINITY, f64::INFINITY, false, false)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn closed_lower(&self) -> bool {
        self.closed_lower
    }

    pub fn closed_upper(&self) -> bool {
        self.closed_upper
    }

    pub fn contains(&self, v: f64) -> bool {
        let lo = if self.closed_lower {
            v >= self.lower
        } else {
            v > self.lower
        };
        let hi = if self.closed_upper {
            v <= self.upper
        } else {
            v < self.upper
        };
        lo && hi
    }

    pub fn is_subset_of(&self, other: &IntervalSpec) -> bool {
        let lo = self.lower > other.lower
            || (self.lower == other.lower && (other.closed_lower || !self.closed_lower));
        let hi = self.upper < other.upper
            || (self.upper == other.upper && (other.closed_upper || !self.closed_upper));
        lo && hi
    }
}

impl std::fmt::Display for IntervalSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l = if self.closed_lower { '[' } else { '(' };
        let u = if self.closed_upper { ']' } else { ')' };
        write!(f, "{l}{}, {}{u}", self.lower, self.upper)
    }
}

/// Orthogonal projection together with the tail modes it contains.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    entries: CMatrix,
    tail_type: TailType,
    tolerance: f64,
}

impl ProjectionMatrix {
    pub fn new(entries: CMatrix, tail_type: TailType) -> Result<Self> {
        Self::with_tolerance(entries, tail_type, Tolerances::default().idempotency)
    }

    /// Validates `max |P^2 - P|` and `max |P - P*|` against `tolerance`.
    pub fn with_tolerance(entries: CMatrix, tail_type: TailType, tolerance: f64) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "projection must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("projection has non-finite entries".into()));
        }
        let defect = entrywise_projection_defect(&entries);
        if defect > tolerance {
            return Err(Error::NotProjection { defect, tolerance });
        }
        Ok(ProjectionMatrix {
            entries: linalg::hermitian_part(&entries),
            tail_type,
            tolerance,
        })
    }

    pub fn from_real_diagonal(values: &[f64], tail_type: TailType) -> Result<Self> {
        Self::new(linalg::real_diagonal(values), tail_type)
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn tail_type(&self) -> TailType {
        self.tail_type
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn rank(&self) -> usize {
        self.entries.trace().re.round().max(0.0) as usize
    }

    pub fn complement(&self) -> ProjectionMatrix {
        ProjectionMatrix {
            entries: linalg::identity(self.dim()) - &self.entries,
            tail_type: self.tail_type.complement(),
            tolerance: self.tolerance,
        }
    }

    /// `2P - 1`.
    pub fn reflection(&self) -> CMatrix {
        &self.entries * c(2.0) - linalg::identity(self.dim())
    }

    /// Operator-norm distance `||P - Q||`.
    pub fn distance(&self, other: &ProjectionMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "projections of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(linalg::hermitian_norm(&(&self.entries - &other.entries)))
    }

    pub fn projection_defect(&self) -> f64 {
        entrywise_projection_defect(&self.entries)
    }
}

/// `max(max |P^2 - P|, max |P - P*|)`.
pub fn entrywise_projection_defect(m: &CMatrix) -> f64 {
    let idem = linalg::max_abs(&(m * m - m));
    idem.max(linalg::hermiticity_defect(m))
}

/// `1_J(A)` with the tail type the interval picks up from the tail descriptor.
pub fn spectral_projection(a: &TruncatedOperator, interval: &IntervalSpec) -> Result<ProjectionMatrix> {
    spectral_projection_with(a, interval, &Tolerances::default())
}

pub fn spectral_projection_with(
    a: &TruncatedOperator,
    interval: &IntervalSpec,
    tol: &Tolerances,
) -> Result<ProjectionMatrix> {
    let dec = a.eig();
    dec.check_endpoint(interval.lower(), tol.gap)?;
    dec.check_endpoint(interval.upper(), tol.gap)?;
    let entries = dec.projector(|v| interval.contains(v));
    Ok(ProjectionMatrix {
        entries: linalg::hermitian_part(&entries),
        tail_type: a.tail().tail_type_for(interval),
        tolerance: tol.idempotency,
    })
}

/// `chi+(A) = 1_[0,inf)(A)`.
pub fn positive_projection(a: &TruncatedOperator, tol: &Tolerances) -> Result<ProjectionMatrix> {
    spectral_projection_with(a, &IntervalSpec::at_least(0.0), tol)
}

/// Positive projection without the endpoint check: eigenvalues above
/// `-kernel * (1 + ||A||)` count as nonnegative.
pub fn positive_projection_lenient(a: &TruncatedOperator, tol: &Tolerances) -> ProjectionMatrix {
    let thr = a.kernel_threshold(tol);
    let entries = a.eig().projector(|v| v > -thr);
    ProjectionMatrix {
        entries: linalg::hermitian_part(&entries),
        tail_type: a.tail().positive_tail_type(),
        tolerance: tol.idempotency,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::operator::TailDescriptor;

    fn sample() -> TruncatedOperator {
        TruncatedOperator::from_real_diagonal(&[-2.0, 1.0, 3.0], TailDescriptor::positive()).unwrap()
    }

    fn assert_diag(p: &ProjectionMatrix, values: &[f64]) {
        assert!(linalg::max_abs(&(p.entries() - linalg::real_diagonal(values))) < 1e-14);
    }

    #[test]
    fn half_line_projection() {
        let p = spectral_projection(&sample(), &IntervalSpec::at_least(0.0)).unwrap();
        assert_diag(&p, &[0.0, 1.0, 1.0]);
        assert_eq!(p.tail_type(), TailType::Identity);
    }

    #[test]
    fn window_projection() {
        let p = spectral_projection(&sample(), &IntervalSpec::closed(-1.0, 2.0)).unwrap();
        assert_diag(&p, &[0.0, 1.0, 0.0]);
        assert_eq!(p.tail_type(), TailType::Zero);
    }

    #[test]
    fn lower_half_line_projection() {
        let p = spectral_projection(&sample(), &IntervalSpec::at_most(0.0)).unwrap();
        assert_diag(&p, &[1.0, 0.0, 0.0]);
        assert_eq!(p.tail_type(), TailType::Zero);
    }

    #[test]
    fn collision_at_endpoint() {
        let err = spectral_projection(&sample(), &IntervalSpec::at_least(1.0)).unwrap_err();
        assert_eq!(err.reason(), "endpoint_collision");
    }

    #[test]
    fn rejects_non_projection() {
        let err = ProjectionMatrix::from_real_diagonal(&[0.5, 1.0], TailType::Zero).unwrap_err();
        assert_eq!(err.reason(), "not_projection");
    }

    #[test]
    fn subset_relation() {
        assert!(IntervalSpec::closed(0.0, 1.0).is_subset_of(&IntervalSpec::at_least(0.0)));
        assert!(!IntervalSpec::closed(0.0, 1.0).is_subset_of(&IntervalSpec::above(0.0)));
        assert!(IntervalSpec::open(0.0, 1.0).is_subset_of(&IntervalSpec::above(0.0)));
        assert!(IntervalSpec::new(2.0, 1.0, true, true).is_err());
    }
}
