use crate::linalg;
use crate::opcore::operator::TruncatedOperator;
use crate::opcore::transforms::{bounded_transform, cayley};
use crate::Result;

/// `||f(A) - f(B)||`.
pub fn riesz_distance(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<f64> {
    a.compatible_with(b)?;
    Ok(linalg::hermitian_norm(&(bounded_transform(a) - bounded_transform(b))))
}

/// `||kappa(A) - kappa(B)||`.
pub fn graph_distance(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<f64> {
    a.compatible_with(b)?;
    Ok(linalg::op_norm(&(cayley(a) - cayley(b))))
}
