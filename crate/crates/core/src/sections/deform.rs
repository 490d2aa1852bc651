use rayon::prelude::*;

use crate::config::Tolerances;
use crate::families::SampledFamily;
use crate::linalg::{self, c, CMatrix};
use crate::opcore::{
    bounded_transform, inverse_bounded_transform_with, ProjectionMatrix, SpectralDecomposition,
    TruncatedOperator,
};
use crate::sections::verify::{default_rank_budget, is_generalized_section};
use crate::{Error, Result};

/// `h_t(x) = f^{-1}((1 - t) f(A_x) + t T'_x)` on a time grid.
#[derive(Debug, Clone)]
pub struct DeformationTable {
    pub times: Vec<f64>,
    /// `slices[k][x]` is the operator at time `times[k]` and sample `x`.
    pub slices: Vec<Vec<TruncatedOperator>>,
    /// Spectral radius of `a_t(x)`, same layout as `slices`.
    pub radii: Vec<Vec<f64>>,
    /// `min |eig(T'_x)|`, the invertibility margin of the endpoint.
    pub endpoint_margins: Vec<f64>,
}

impl DeformationTable {
    pub fn max_radius(&self) -> f64 {
        self.radii
            .iter()
            .flatten()
            .fold(0.0_f64, |a, &b| a.max(b))
    }

    pub fn endpoint(&self) -> &[TruncatedOperator] {
        self.slices.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// `K = diag(1/2, 1/3, ..., 1/(N+1))`.
pub fn compact_weight(n: usize) -> CMatrix {
    let v: Vec<f64> = (0..n).map(|k| 1.0 / (k as f64 + 2.0)).collect();
    linalg::real_diagonal(&v)
}

/// `T' = (1 - K)(2P - 1)(1 - K)`.
pub fn squeezed_symmetry(p: &ProjectionMatrix) -> CMatrix {
    let n = p.dim();
    let one_minus_k = linalg::identity(n) - compact_weight(n);
    linalg::hermitian_part(&(&one_minus_k * p.reflection() * &one_minus_k))
}

/// Straight-line deformation in the bounded picture from a family to an
/// invertible one whose positive projections are the given sections.
pub fn deform_to_invertible(
    family: &SampledFamily,
    gss: &[ProjectionMatrix],
    steps: usize,
    tol: &Tolerances,
) -> Result<DeformationTable> {
    if gss.len() != family.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} sections for {} samples",
            gss.len(),
            family.len()
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidInput("at least one time step is needed".into()));
    }
    for (i, (a, p)) in family.operators().iter().zip(gss).enumerate() {
        let check = is_generalized_section(a, p, default_rank_budget(a.dim()), 1e-6, tol)?;
        if !check.holds {
            return Err(Error::GssRejected {
                sample: i,
                reason: if check.tail_consistent {
                    format!("residual {:.3e}", check.residual)
                } else {
                    "tail type differs from chi+(A)".into()
                },
            });
        }
    }
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 / steps as f64).collect();
    let images: Vec<CMatrix> = family.operators().par_iter().map(bounded_transform).collect();
    let targets: Vec<CMatrix> = gss.par_iter().map(squeezed_symmetry).collect();
    let endpoint_margins: Vec<f64> = targets
        .iter()
        .map(|t| SpectralDecomposition::from_hermitian(t).min_abs())
        .collect();

    let mut slices = Vec::with_capacity(times.len());
    let mut radii = Vec::with_capacity(times.len());
    for &t in &times {
        let row: Vec<Result<(TruncatedOperator, f64)>> = (0..family.len())
            .into_par_iter()
            .map(|i| {
                let a = family.operator(i);
                if t == 0.0 {
                    return Ok((a.clone(), linalg::hermitian_norm(&images[i])));
                }
                let at = linalg::hermitian_part(&(&images[i] * c(1.0 - t) + &targets[i] * c(t)));
                let radius = linalg::hermitian_norm(&at);
                if radius >= 1.0 - tol.bounded_margin {
                    return Err(Error::InvariantViolation(format!(
                        "bounded path leaves the unit ball at sample {i}, t = {t}: radius {radius}"
                    )));
                }
                let h = inverse_bounded_transform_with(&at, a.tail().clone(), tol)?;
                Ok((h, radius))
            })
            .collect();
        let mut ops = Vec::with_capacity(row.len());
        let mut rs = Vec::with_capacity(row.len());
        for item in row {
            let (h, radius) = item?;
            ops.push(h);
            rs.push(radius);
        }
        slices.push(ops);
        radii.push(rs);
    }
    Ok(DeformationTable {
        times,
        slices,
        radii,
        endpoint_margins,
    })
}
