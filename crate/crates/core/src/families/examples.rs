use crate::families::family::{Grid, SampledFamily};
use crate::linalg::{self, c, CMatrix};
use crate::opcore::{
    bounded_scalar, inverse_bounded_scalar, positive_projection_lenient, ProjectionMatrix,
    TailDescriptor, TruncatedOperator,
};
use crate::random::{random_hermitian, SeededRng};
use crate::{Error, Result};

/// `A + x` over the grid; the marker node (if any) is rejected.
pub fn shift_family(a: &TruncatedOperator, grid: Grid) -> Result<SampledFamily> {
    let mut ops = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let x = grid
            .point(i)
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::InvalidInput("shift family needs finite grid points".into()))?;
        ops.push(a.shifted(x));
    }
    SampledFamily::new(grid, ops, a.tail().clone(), "shift")
}

fn fuglede_diag(dim: usize, flip: Option<usize>) -> Vec<f64> {
    (1..=dim)
        .map(|n| if Some(n) == flip { -(n as f64) } else { n as f64 })
        .collect()
}

/// `A_x e_n = n` except `A_x e_x = -x`, for `x = 1..dim-1`, and `A_inf e_n = n`.
pub fn fuglede_family(dim: usize) -> Result<SampledFamily> {
    if dim < 3 {
        return Err(Error::InvalidInput(format!("fuglede family needs dim >= 3, got {dim}")));
    }
    let mut points: Vec<f64> = (1..dim).map(|x| x as f64).collect();
    points.push(f64::INFINITY);
    let tail = TailDescriptor::positive();
    let mut ops = Vec::with_capacity(dim);
    for x in 1..dim {
        ops.push(TruncatedOperator::from_real_diagonal(&fuglede_diag(dim, Some(x)), tail.clone())?);
    }
    ops.push(TruncatedOperator::from_real_diagonal(&fuglede_diag(dim, None), tail.clone())?);
    SampledFamily::new(Grid::interval(points)?, ops, tail, "fuglede")
}

/// `A_x e_n = -n` for `n < x` and `n` for `n >= x`; `A_inf e_n = -n`.
///
/// Finite samples carry a positive tail and the marker a negative one.
pub fn semibounded_no_gss_family(dim: usize, points: &[f64]) -> Result<SampledFamily> {
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let mut grid: Vec<f64> = points.to_vec();
    if grid.last() != Some(&f64::INFINITY) {
        grid.push(f64::INFINITY);
    }
    let grid = Grid::interval(grid)?;
    let mut ops = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let x = grid.point(i).expect("interval grid");
        let values: Vec<f64> = (1..=dim)
            .map(|n| if x.is_infinite() || (n as f64) < x { -(n as f64) } else { n as f64 })
            .collect();
        let tail = if x.is_infinite() {
            TailDescriptor::negative()
        } else {
            TailDescriptor::positive()
        };
        ops.push(TruncatedOperator::from_real_diagonal(&values, tail)?);
    }
    SampledFamily::with_varying_tails(grid, ops, "semibounded_no_gss")
}

/// Path `f^{-1}((1 - t) f(-D) + t f(D))` with `D = diag(1..dim)`.
///
/// The middle `t = 1/2` passes through 0, which has no inverse bounded
/// transform with a discrete tail, so it is dropped from the grid.
pub fn negative_to_positive_path(dim: usize, steps: usize) -> Result<SampledFamily> {
    if dim == 0 || steps < 2 {
        return Err(Error::InvalidInput("path needs dim >= 1 and steps >= 2".into()));
    }
    let times: Vec<f64> = (0..=steps)
        .map(|k| k as f64 / steps as f64)
        .filter(|t| (t - 0.5).abs() > 1e-12)
        .collect();
    let mut ops = Vec::with_capacity(times.len());
    for &t in &times {
        let values: Vec<f64> = (1..=dim)
            .map(|n| inverse_bounded_scalar((2.0 * t - 1.0) * bounded_scalar(n as f64)))
            .collect();
        let tail = if t < 0.5 {
            TailDescriptor::negative()
        } else {
            TailDescriptor::positive()
        };
        ops.push(TruncatedOperator::from_real_diagonal(&values, tail)?);
    }
    SampledFamily::with_varying_tails(Grid::interval(times)?, ops, "negative_to_positive")
}

/// Constant family with every sample equal to `a`.
pub fn constant_family(a: &TruncatedOperator, grid: Grid) -> Result<SampledFamily> {
    let ops = vec![a.clone(); grid.len()];
    SampledFamily::new(grid, ops, a.tail().clone(), "constant")
}

/// `H0 + x H1` on `samples` points of `[-1, 1]`, with `||H0|| = scale`,
/// `||H1|| = scale / 4` and a linear positive tail above `2 scale`.
pub fn random_linear_family(
    rng: &mut SeededRng,
    dim: usize,
    samples: usize,
    scale: f64,
) -> Result<SampledFamily> {
    let h0 = random_hermitian(rng, dim, scale);
    let h1 = random_hermitian(rng, dim, scale / 4.0);
    let grid = Grid::linspace(-1.0, 1.0, samples)?;
    let tail = TailDescriptor::positive().with_rate(1.0, 2.0 * scale / (dim + 1) as f64)?;
    let mut ops = Vec::with_capacity(samples);
    for i in 0..samples {
        let x = grid.point(i).expect("interval grid");
        ops.push(TruncatedOperator::new(&h0 + &h1 * c(x), tail.clone())?);
    }
    SampledFamily::new(grid, ops, tail, "random_linear")
}

/// `W_x chi+(A_x) W_x*`, where `W_x` applies one fixed `exp(iH)`, `||H|| = angle`,
/// in the basis of the `k` eigenvectors of `A_x` nearest 0.
pub fn perturbed_gss(
    family: &SampledFamily,
    rng: &mut SeededRng,
    k: usize,
    angle: f64,
) -> Vec<ProjectionMatrix> {
    let k = k.min(family.dim()).max(1);
    let w = linalg::unitary_exp(&random_hermitian(rng, k, angle));
    let tol = crate::Tolerances::default();
    family
        .operators()
        .iter()
        .map(|a| {
            let chi = positive_projection_lenient(a, &tol);
            let dec = a.eig();
            let mut order: Vec<usize> = (0..a.dim()).collect();
            order.sort_by(|&i, &j| {
                dec.eigenvalues()[i].abs().total_cmp(&dec.eigenvalues()[j].abs())
            });
            let mut basis = CMatrix::zeros(a.dim(), k);
            for (col, &idx) in order.iter().take(k).enumerate() {
                basis.set_column(col, &dec.eigenvectors().column(idx));
            }
            let rot = &basis * (&w - linalg::identity(k)) * basis.adjoint()
                + linalg::identity(a.dim());
            let p = &rot * chi.entries() * rot.adjoint();
            ProjectionMatrix::with_tolerance(p, chi.tail_type(), 1e-8)
                .expect("unitary conjugate of a projection")
        })
        .collect()
}
