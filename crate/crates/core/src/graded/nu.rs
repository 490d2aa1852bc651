use crate::graded::grading::Grading;
use crate::linalg::{self, c, CMatrix};
use crate::opcore::{ProjectionMatrix, TailType};
use crate::{Error, Result};

/// `||sigma P sigma - (1 - P)||`.
pub fn cl1_defect(p: &CMatrix, grading: &Grading) -> f64 {
    let n = p.nrows();
    linalg::op_norm(&(grading.conjugate(p) - (linalg::identity(n) - p)))
}

/// Unitary `v : H0 -> H1` with `2P - 1 = [[0, v*], [v, 0]]` in the grading's eigenbases.
pub fn nu(p: &ProjectionMatrix, grading: &Grading) -> Result<CMatrix> {
    if p.dim() != grading.dim() {
        return Err(Error::DimensionMismatch(format!(
            "projection of dimension {} with grading of dimension {}",
            p.dim(),
            grading.dim()
        )));
    }
    let defect = cl1_defect(p.entries(), grading);
    if defect > 1e-8 {
        return Err(Error::NotCl1Compatible { defect });
    }
    let refl = p.reflection();
    let v = grading.minus_basis().adjoint() * refl * grading.plus_basis();
    let udef = linalg::unitarity_defect(&v).max(linalg::unitarity_defect(&v.adjoint()));
    if udef > 1e-8 {
        return Err(Error::NotUnitary { defect: udef });
    }
    Ok(v)
}

/// Projection `P = (1 + [[0, v*], [v, 0]]) / 2` for a unitary `v : H0 -> H1`.
pub fn nu_inverse(v: &CMatrix, grading: &Grading, tail_type: TailType) -> Result<ProjectionMatrix> {
    if v.shape() != (grading.minus_dim(), grading.plus_dim()) {
        return Err(Error::DimensionMismatch(format!(
            "v must be {}x{}, got {}x{}",
            grading.minus_dim(),
            grading.plus_dim(),
            v.nrows(),
            v.ncols()
        )));
    }
    let udef = linalg::unitarity_defect(v).max(linalg::unitarity_defect(&v.adjoint()));
    if udef > 1e-8 {
        return Err(Error::NotUnitary { defect: udef });
    }
    let bp = grading.plus_basis();
    let bm = grading.minus_basis();
    let block = bm * v * bp.adjoint();
    let refl = &block + block.adjoint();
    let p = (linalg::identity(grading.dim()) + refl) * c(0.5);
    ProjectionMatrix::new(linalg::hermitian_part(&p), tail_type)
}
