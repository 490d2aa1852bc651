use serde::Serialize;

use crate::families::family::{Grid, SampledFamily};
use crate::linalg::CMatrix;
use crate::opcore::{TailDescriptor, TruncatedOperator};
use crate::{Error, Result};

/// Symmetric tridiagonal finite-difference model of `-d^2/dt^2` on `[0, 1]`
/// with `psi(0) = 0` and `psi(1) = x psi'(1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RellichTridiagonal {
    pub x: f64,
    pub mesh: usize,
    pub h: f64,
    pub diag: Vec<f64>,
    /// `off[i]` couples unknowns `i` and `i + 1`.
    pub off: Vec<f64>,
}

pub const MIN_MESH: usize = 100;

/// Centered differences on `t_j = j h`, `h = 1/(M + 1)`, unknowns `psi_1..psi_M`.
///
/// The boundary value `psi_{M+1}` is eliminated through
/// `psi_{M+1} = x (3 psi_{M+1} - 4 psi_M + psi_{M-1}) / (2h)`, which leaves a
/// last row `((2 + 4c) psi_M - (1 + c) psi_{M-1}) / h^2` with `c = x/(2h - 3x)`.
/// A diagonal similarity makes the matrix symmetric; it needs `1 + c > 0`,
/// which fails exactly for `x` in `[2h/3, h]`.
pub fn rellich_matrix(x: f64, mesh: usize) -> Result<RellichTridiagonal> {
    if mesh < MIN_MESH {
        return Err(Error::InvalidInput(format!("mesh must be at least {MIN_MESH}, got {mesh}")));
    }
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("boundary parameter must be finite, got {x}")));
    }
    let h = 1.0 / (mesh + 1) as f64;
    let denom = 2.0 * h - 3.0 * x;
    let cc = x / denom;
    if !cc.is_finite() || 1.0 + cc <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "boundary parameter {x} lies in the degenerate band [{}, {}] of the one-sided stencil",
            2.0 * h / 3.0,
            h
        )));
    }
    let inv = 1.0 / (h * h);
    let mut diag = vec![2.0 * inv; mesh];
    let mut off = vec![-inv; mesh - 1];
    diag[mesh - 1] = (2.0 + 4.0 * cc) * inv;
    off[mesh - 2] = -(1.0 + cc).sqrt() * inv;
    Ok(RellichTridiagonal {
        x,
        mesh,
        h,
        diag,
        off,
    })
}

impl RellichTridiagonal {
    /// Number of eigenvalues strictly below `lambda` (Sturm count).
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - lambda - coupling / d;
            if d == 0.0 {
                d = -f64::EPSILON * (1.0 + lambda.abs());
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut rad = 0.0;
            if i > 0 {
                rad += self.off[i - 1].abs();
            }
            if i + 1 < n {
                rad += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - rad);
            hi = hi.max(self.diag[i] + rad);
        }
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue (0-based) by bisection on the Sturm count.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.diag.len() {
            return Err(Error::InvalidInput(format!("eigenvalue index {k} out of range")));
        }
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
                return Ok(0.5 * (lo + hi));
            }
        }
        Err(Error::Bisection(format!("eigenvalue {k} did not converge")))
    }

    /// Dense Hermitian copy.
    pub fn dense(&self) -> CMatrix {
        let n = self.diag.len();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)].re = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)].re = self.off[i];
                m[(i + 1, i)].re = self.off[i];
            }
        }
        m
    }
}

/// Smallest eigenvalue of the discretization.
pub fn rellich_eigenvalue(x: f64, mesh: usize) -> Result<f64> {
    rellich_matrix(x, mesh)?.eigenvalue(0)
}

/// Negative eigenvalue `-mu^2` of the continuous problem, `mu` the positive
/// root of `e^{2 mu} - 1 = x mu (e^{2 mu} + 1)`, i.e. `tanh mu = x mu`.
///
/// `None` outside `0 < x < 1`, where there is no negative eigenvalue.
pub fn rellich_reference(x: f64) -> Result<Option<f64>> {
    if !(x > 0.0 && x < 1.0) {
        return Ok(None);
    }
    let g = |mu: f64| mu.tanh() - x * mu;
    let mut lo = 1e-6_f64;
    let mut hi = 50.0_f64.max(2.0 / x);
    if !(g(lo) > 0.0 && g(hi) < 0.0) {
        return Err(Error::Bisection(format!(
            "no sign change of tanh(mu) - {x} mu on [{lo}, {hi}]"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 {
            let mu = 0.5 * (lo + hi);
            return Ok(Some(-mu * mu));
        }
    }
    Err(Error::Bisection(format!("root for x = {x} did not converge")))
}

/// Relative errors at `mesh` and at the mesh with half the step, and the
/// observed order `log2(e_coarse / e_fine)`.
pub fn convergence_order(x: f64, mesh: usize) -> Result<(f64, f64, f64)> {
    let reference = rellich_reference(x)?.ok_or_else(|| {
        Error::InvalidInput(format!("x = {x} has no negative eigenvalue to compare against"))
    })?;
    let rel = |m: usize| -> Result<f64> {
        Ok(((rellich_eigenvalue(x, m)? - reference) / reference).abs())
    };
    let coarse = rel(mesh)?;
    let fine = rel(2 * mesh + 1)?;
    Ok((coarse, fine, (coarse / fine).log2()))
}

#[derive(Debug, Clone)]
pub struct RellichFamily {
    pub family: SampledFamily,
    /// Continuous negative eigenvalue per sample, where one exists.
    pub reference: Vec<Option<f64>>,
    pub smallest: Vec<f64>,
    /// Samples outside `0 < x < 1`.
    pub outside_regime: Vec<bool>,
}

/// Dense samples of the discretization over the grid. Tail modes follow the
/// Dirichlet growth `(k pi)^2`.
pub fn rellich_family(points: &[f64], mesh: usize) -> Result<RellichFamily> {
    let grid = Grid::interval(points.to_vec())?;
    let tail = TailDescriptor::positive().with_rate(2.0, std::f64::consts::PI.powi(2))?;
    let mut ops = Vec::with_capacity(points.len());
    let mut reference = Vec::with_capacity(points.len());
    let mut smallest = Vec::with_capacity(points.len());
    let mut outside_regime = Vec::with_capacity(points.len());
    for &x in points {
        let tri = rellich_matrix(x, mesh)?;
        smallest.push(tri.eigenvalue(0)?);
        reference.push(rellich_reference(x)?);
        outside_regime.push(!(x > 0.0 && x < 1.0));
        ops.push(TruncatedOperator::new(tri.dense(), tail.clone())?);
    }
    Ok(RellichFamily {
        family: SampledFamily::new(grid, ops, tail, "rellich")?,
        reference,
        smallest,
        outside_regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dirichlet_limit() {
        let lam = rellich_eigenvalue(0.0, 400).unwrap();
        assert!((lam - PI * PI).abs() / (PI * PI) < 1e-4);
    }

    #[test]
    fn sturm_matches_dense() {
        let tri = rellich_matrix(0.5, 100).unwrap();
        let a = TruncatedOperator::new(tri.dense(), TailDescriptor::positive()).unwrap();
        let dense = a.eig().eigenvalues();
        for k in [0, 1, 50, 99] {
            let v = tri.eigenvalue(k).unwrap();
            assert!((v - dense[k]).abs() < 1e-8 * (1.0 + v.abs()), "k = {k}");
        }
    }

    #[test]
    fn reference_root() {
        let lam = rellich_reference(0.5).unwrap().unwrap();
        let mu = (-lam).sqrt();
        let lhs = (2.0 * mu).exp() - 1.0;
        let rhs = 0.5 * mu * ((2.0 * mu).exp() + 1.0);
        assert!((lhs - rhs).abs() < 1e-10);
        assert_eq!(rellich_reference(1.2).unwrap(), None);
    }

    #[test]
    fn degenerate_band_rejected() {
        let h = 1.0 / 101.0;
        assert!(rellich_matrix(0.8 * h, 100).is_err());
        assert!(rellich_matrix(0.5 * h, 100).is_ok());
        assert!(rellich_matrix(0.2, 50).is_err());
    }
}
