//! Truncated operators and their functional calculus.

pub mod metrics;
pub mod operator;
pub mod projection;
pub mod spectral;
pub mod transforms;

pub use metrics::{graph_distance, riesz_distance};
pub use operator::{Sign, TailDescriptor, TailKind, TailType, TruncatedOperator};
pub use projection::{
    positive_projection, positive_projection_lenient, spectral_projection,
    spectral_projection_with, IntervalSpec, ProjectionMatrix,
};
pub use spectral::{eig, SpectralDecomposition};
pub use transforms::{
    bounded_scalar, bounded_transform, cayley, cayley_scalar, inverse_bounded_scalar,
    inverse_bounded_transform, inverse_bounded_transform_with, kat, kat_matrix, phi, phi_matrix, phi_modulus,
};
