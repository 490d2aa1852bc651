//! Z/2-graded operators, Cl(1) sections and symbol algebra.

pub mod cl1;
pub mod grading;
pub mod hat;
pub mod nonsa;
pub mod nu;
pub mod signature;
pub mod supersym;
pub mod symbol;
pub mod trivializer;

pub use cl1::{construct_cl1_section, is_cl1_section, kernel_cl1_section, odd_gamma, Cl1Check};
pub use grading::{Grading, OddOperator};
pub use hat::{hat, hat_with_tail, off_diagonal_block};
pub use nonsa::{nonsa_correction, NonSaCorrection};
pub use nu::{cl1_defect, nu, nu_inverse};
pub use signature::{kernel_basis, kernel_signature, signature_on, KernelSignature};
pub use supersym::{
    ess_odd_projection, sigma_trick, supersymmetrize, EssOddProjection, SigmaTrick,
    SigmaTrickSummary, Supersymmetrized,
};
pub use symbol::{
    factor_point, factor_w_symbol, pauli_symbol, PointFactor, SymbolFactorization, SymbolPoint,
    SymbolSample,
};
pub use trivializer::{odd_trivializer, EvenProfile, OddTrivializer};
