pub mod examples;
pub mod family;
pub mod rellich;
pub mod report;

pub use examples::{
    constant_family, fuglede_family, negative_to_positive_path, perturbed_gss,
    random_linear_family, semibounded_no_gss_family, shift_family,
};
pub use family::{Grid, SampledFamily};
pub use rellich::{
    convergence_order, rellich_eigenvalue, rellich_family, rellich_matrix, rellich_reference,
    RellichFamily, RellichTridiagonal,
};
pub use report::{
    continuity_report, gss_obstruction, lower_bound_report, section_implies_riesz_check,
    ContinuityReport, GssObstruction, LowerBoundCurve, PairStep, RieszCheck,
};
