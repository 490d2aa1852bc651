use thiserror::Error;

/// Failures raised by the operator toolkit.
///
/// Every variant maps to a stable snake_case code through [`Error::reason`],
/// which the command-line front end writes into its machine-readable reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("matrix is not a projection: defect {defect:.3e} exceeds {tolerance:.3e}")]
    NotProjection { defect: f64, tolerance: f64 },

    #[error("matrix is not unitary: defect {defect:.3e}")]
    NotUnitary { defect: f64 },

    #[error("matrix is not a symmetry: defect {defect:.3e}")]
    NotSymmetry { defect: f64 },

    #[error("operator is not odd: anticommutator norm {defect:.3e}")]
    NotOdd { defect: f64 },

    #[error("projection is not Cl(1)-compatible: ||sPs - (1-P)|| = {defect:.3e}")]
    NotCl1Compatible { defect: f64 },

    #[error("endpoint collision: eigenvalue {eigenvalue} lies within {tolerance:.1e} of endpoint {endpoint}")]
    EndpointCollision {
        endpoint: f64,
        eigenvalue: f64,
        tolerance: f64,
    },

    #[error(
        "outside the image of the bounded transform: spectral radius {radius} reaches 1 - {margin:.1e}, so 1 - a*a is not injective"
    )]
    OutsideBoundedImage { radius: f64, margin: f64 },

    #[error("incompatible tail descriptors: {0}")]
    TailMismatch(String),

    #[error("point {value} is off the lower unit arc by {defect:.3e}")]
    NotOnArc { value: String, defect: f64 },

    #[error("norm {norm} exceeds 1")]
    NormTooLarge { norm: f64 },

    #[error("cutoff {cutoff} is not below the tail threshold {threshold}")]
    CutoffBeyondTail { cutoff: f64, threshold: f64 },

    #[error("delta {0} must lie in (0, 1/2): the rounding gap closes otherwise")]
    InvalidDelta(f64),

    #[error("sample {sample}: generalized section rejected ({reason})")]
    GssRejected { sample: usize, reason: String },

    #[error("sample {sample}: GSS too far from spectral data, no admissible cutoff below {r_max}")]
    GssTooFar { sample: usize, r_max: f64 },

    #[error(
        "required cutoffs grow without bound toward the infinity marker (last finite sample needs {last_cutoff}, marker needs {marker_cutoff})"
    )]
    CutoffUnboundedAtInfinity {
        last_cutoff: f64,
        marker_cutoff: f64,
    },

    #[error("projections are too far apart for the rounding homotopy: ||P0 - P1|| = {distance}")]
    ProjectionsTooFar { distance: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("operator is singular: min |eigenvalue| {min_abs:.3e} below threshold {threshold:.3e}")]
    Singular { min_abs: f64, threshold: f64 },

    #[error("profile too small at a kernel mode: lambda^2 + psi(lambda)^2 = {value:.3e}")]
    ProfileTooSmall { value: f64 },

    #[error("eigenvalue {eigenvalue:.3e} straddles the kernel threshold {threshold:.3e}")]
    KernelAmbiguity { eigenvalue: f64, threshold: f64 },

    #[error("index obstruction: signature of the grading on the kernel is {signature}")]
    IndexObstruction { signature: i64 },

    #[error("symbol violates the orthogonal anticommutation condition at {point}: residual {residual:.3e}")]
    WConditionViolated { point: String, residual: f64 },

    #[error("symbol square is not positive definite at {point}: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveDefinite { point: String, min_eigenvalue: f64 },

    #[error("bisection failed: {0}")]
    Bisection(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code for the failure.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::NotProjection { .. } => "not_projection",
            Error::NotUnitary { .. } => "not_unitary",
            Error::NotSymmetry { .. } => "not_symmetry",
            Error::NotOdd { .. } => "not_odd",
            Error::NotCl1Compatible { .. } => "not_cl1_compatible",
            Error::EndpointCollision { .. } => "endpoint_collision",
            Error::OutsideBoundedImage { .. } => "outside_bounded_image",
            Error::TailMismatch(_) => "tail_mismatch",
            Error::NotOnArc { .. } => "not_on_arc",
            Error::NormTooLarge { .. } => "norm_too_large",
            Error::CutoffBeyondTail { .. } => "cutoff_beyond_tail",
            Error::InvalidDelta(_) => "invalid_delta",
            Error::GssRejected { .. } => "gss_rejected",
            Error::GssTooFar { .. } => "gss_too_far",
            Error::CutoffUnboundedAtInfinity { .. } => "cutoff_unbounded_at_infinity",
            Error::ProjectionsTooFar { .. } => "projections_too_far",
            Error::PreconditionFailed(_) => "precondition_failed",
            Error::Singular { .. } => "singular",
            Error::ProfileTooSmall { .. } => "profile_too_small",
            Error::KernelAmbiguity { .. } => "kernel_ambiguity",
            Error::IndexObstruction { .. } => "index_obstruction",
            Error::WConditionViolated { .. } => "w_condition_violated",
            Error::NotPositiveDefinite { .. } => "not_positive_definite",
            Error::Bisection(_) => "bisection_failed",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::Parse(_) => "parse_error",
        }
    }

    /// Whether the failure reflects bad input rather than a failed mathematical check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::DimensionMismatch(_)
                | Error::Parse(_)
                | Error::NotHermitian { .. }
                | Error::InvalidDelta(_)
                | Error::TailMismatch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
