use crate::config::Tolerances;
use crate::linalg::{self, c, CMatrix};
use crate::opcore::{ProjectionMatrix, TruncatedOperator};
use crate::sections::verify::{check_positive_below_tail, SpectralSplit};
use crate::{Error, Result};

/// `T_r(A, P) = S+ + S0 P S0`.
///
/// Eigenvalues at `+-r` (within the gap tolerance) go to `S+` and `S-`.
pub fn t_average(
    a: &TruncatedOperator,
    p: &ProjectionMatrix,
    r: f64,
    tol: &Tolerances,
) -> Result<CMatrix> {
    if p.dim() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {} with projection of dimension {}",
            a.dim(),
            p.dim()
        )));
    }
    check_positive_below_tail(a, r)?;
    let split = SpectralSplit::closed(a, r, tol.gap);
    Ok(t_average_with_split(p, &split))
}

pub(crate) fn t_average_with_split(p: &ProjectionMatrix, split: &SpectralSplit) -> CMatrix {
    let middle = &split.window * p.entries() * &split.window;
    linalg::hermitian_part(&(&split.plus + middle))
}

/// `1_[1/2,inf)(T)` for a Hermitian `T`, with the distance from `1/2` to the spectrum.
pub fn round_half(t: &CMatrix) -> (CMatrix, f64) {
    let (values, vectors) = linalg::eigh(t);
    let gap = values
        .iter()
        .fold(f64::INFINITY, |g, v| g.min((v - 0.5).abs()));
    let q = linalg::spectral_apply(&values, &vectors, |v| c(if v >= 0.5 { 1.0 } else { 0.0 }));
    (linalg::hermitian_part(&q), gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::{positive_projection, TailDescriptor, TailType};

    #[test]
    fn hand_example() {
        let a = TruncatedOperator::from_real_diagonal(&[-2.0, 1.0, 3.0], TailDescriptor::positive())
            .unwrap();
        let p = ProjectionMatrix::from_real_diagonal(&[0.0, 0.0, 1.0], TailType::Identity).unwrap();
        let t = t_average(&a, &p, 2.0, &Tolerances::default()).unwrap();
        assert!(linalg::max_abs(&(t - linalg::real_diagonal(&[0.0, 0.0, 1.0]))) < 1e-15);
    }

    #[test]
    fn positive_projection_is_fixed() {
        let a = TruncatedOperator::from_real_diagonal(&[-2.0, 1.0, 3.0], TailDescriptor::positive())
            .unwrap();
        let tol = Tolerances::default();
        let chi = positive_projection(&a, &tol).unwrap();
        for r in [0.5, 1.5, 2.5, 3.5] {
            let t = t_average(&a, &chi, r, &tol).unwrap();
            assert!(linalg::max_abs(&(t - chi.entries())) < 1e-14, "r = {r}");
        }
    }

    #[test]
    fn rounding_gap() {
        let (q, gap) = round_half(&linalg::real_diagonal(&[0.1, 0.8]));
        assert!(linalg::max_abs(&(q - linalg::real_diagonal(&[0.0, 1.0]))) < 1e-15);
        assert!((gap - 0.3).abs() < 1e-15);
    }
}
