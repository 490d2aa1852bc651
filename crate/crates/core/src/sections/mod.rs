//! Spectral sections, generalized sections and trivializing operators.

pub mod average;
pub mod construct;
pub mod deform;
pub mod ess;
pub mod gamma;
pub mod homotopy;
pub mod verify;

pub use average::{round_half, t_average};
pub use construct::{
    construct_section, verify_certificate, CertificateCheck, ConstructOptions, SectionCertificate,
};
pub use deform::{compact_weight, deform_to_invertible, squeezed_symmetry, DeformationTable};
pub use ess::{ess_sa_unitary, EssUnitary};
pub use gamma::{
    check_trivializer, gamma, psi_positivity, tau, trivialize_family, window_defect, CutoffProfile,
    TrivializerCheck, TrivializerRecord,
};
pub use homotopy::homotopy_projections;
pub use verify::{
    check_cutoff, chi_plus_tail, default_rank_budget, is_generalized_section, is_spectral_section, GssCheck,
    SectionCheck, SpectralSplit,
};
