use crate::graded::grading::{Grading, OddOperator};
use crate::linalg::CMatrix;
use crate::opcore::{TailDescriptor, TruncatedOperator};
use crate::Result;

/// `A-hat = [[0, A*], [A, 0]]` for a `k' x k` matrix `A`, graded by `diag(1_k, -1_k')`.
pub fn hat(a: &CMatrix) -> Result<OddOperator> {
    hat_with_tail(a, TailDescriptor::alternating())
}

pub fn hat_with_tail(a: &CMatrix, tail: TailDescriptor) -> Result<OddOperator> {
    let (kp, k) = a.shape();
    let n = k + kp;
    let mut m = CMatrix::zeros(n, n);
    m.view_mut((k, 0), (kp, k)).copy_from(a);
    m.view_mut((0, k), (k, kp)).copy_from(&a.adjoint());
    OddOperator::new(TruncatedOperator::new(m, tail)?, Grading::standard(k, kp))
}

/// Lower-left `k' x k` block of a matrix on `C^k + C^k'`.
pub fn off_diagonal_block(m: &CMatrix, k: usize) -> CMatrix {
    let n = m.nrows();
    m.view((k, 0), (n - k, k)).into_owned()
}
