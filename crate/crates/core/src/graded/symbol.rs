use serde::Serialize;

use crate::linalg::{self, c, CMatrix, Complex64, I};
use crate::opcore::SpectralDecomposition;
use crate::random::{gaussian, rng, SeededRng};
use crate::{Error, Result};

/// Linear symbol `d(xi) = sum_i xi_i D_i` at one base point.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPoint {
    pub tag: String,
    pub coefficients: Vec<CMatrix>,
}

impl SymbolPoint {
    pub fn new(tag: impl Into<String>, coefficients: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = coefficients.first() else {
            return Err(Error::InvalidInput("symbol needs at least one coefficient".into()));
        };
        let shape = first.shape();
        if coefficients.iter().any(|m| m.shape() != shape) {
            return Err(Error::DimensionMismatch("symbol coefficients differ in shape".into()));
        }
        Ok(SymbolPoint {
            tag: tag.into(),
            coefficients,
        })
    }

    pub fn variables(&self) -> usize {
        self.coefficients.len()
    }

    pub fn eval(&self, xi: &[f64]) -> CMatrix {
        let (r, k) = self.coefficients[0].shape();
        let mut out = CMatrix::zeros(r, k);
        for (m, &x) in self.coefficients.iter().zip(xi) {
            out += m * c(x);
        }
        out
    }

    /// `G d` pointwise.
    pub fn left_multiply(&self, g: &CMatrix) -> SymbolPoint {
        SymbolPoint {
            tag: self.tag.clone(),
            coefficients: self.coefficients.iter().map(|m| g * m).collect(),
        }
    }
}

/// Sampled principal symbol: one coefficient set per base point.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSample {
    pub points: Vec<SymbolPoint>,
}

/// Pauli symbol `xi_1 sigma_x + xi_2 sigma_y`.
pub fn pauli_symbol(tag: impl Into<String>) -> SymbolPoint {
    let sx = linalg::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let mut sy = CMatrix::zeros(2, 2);
    sy[(0, 1)] = -I;
    sy[(1, 0)] = I;
    SymbolPoint::new(tag, vec![sx, sy]).expect("two 2x2 coefficients")
}

#[derive(Debug, Clone, Serialize)]
pub struct PointFactor {
    pub tag: String,
    #[serde(skip)]
    pub factor: CMatrix,
    /// Worst `||d(xi) d(eta)* + d(eta) d(xi)*||` over the sampled orthonormal pairs.
    pub w_residual: f64,
    /// Largest deviation of `S(eta) = 2 d(eta) d(eta)*` across sampled unit `eta`.
    pub s_deviation: f64,
    /// Worst `||(I^-1 d(xi))(I^-1 d(xi))* - |xi|^2||` over sampled unit `xi`.
    pub dirac_defect: f64,
    /// Negative eigenvalue clipped in the square root of `S / 2`.
    pub sqrt_defect: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymbolFactorization {
    pub points: Vec<PointFactor>,
}

/// Default number of seeded random frames on top of the coordinate pairs.
pub const RANDOM_FRAMES: usize = 50;

fn random_frame(g: &mut SeededRng, d: usize) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d);
    while frame.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| gaussian(g)).collect();
        for u in &frame {
            let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            frame.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    frame
}

fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

/// Orthonormal test frames: the coordinate frame plus `random_frames` seeded rotations.
pub fn test_frames(d: usize, random_frames: usize, seed: u64) -> Vec<Vec<Vec<f64>>> {
    let mut g = rng(seed);
    let mut frames = vec![(0..d).map(|i| unit(d, i)).collect::<Vec<_>>()];
    for _ in 0..random_frames {
        frames.push(random_frame(&mut g, d));
    }
    frames
}

fn gram(m: &CMatrix) -> CMatrix {
    m * m.adjoint()
}

/// Factor `d = I d'` with `I = sqrt(S / 2)` positive and `d'` of Dirac type.
pub fn factor_w_symbol(sample: &SymbolSample, seed: u64) -> Result<SymbolFactorization> {
    let mut out = Vec::with_capacity(sample.points.len());
    for point in &sample.points {
        out.push(factor_point(point, seed)?);
    }
    Ok(SymbolFactorization { points: out })
}

pub fn factor_point(point: &SymbolPoint, seed: u64) -> Result<PointFactor> {
    let d = point.variables();
    let frames = test_frames(d, RANDOM_FRAMES, seed);

    let mut w_residual = 0.0_f64;
    let mut worst_pair = String::new();
    for frame in &frames {
        for i in 0..d {
            for j in (i + 1)..d {
                let a = point.eval(&frame[i]);
                let b = point.eval(&frame[j]);
                let res = linalg::op_norm(&(&a * b.adjoint() + &b * a.adjoint()));
                if res > w_residual {
                    w_residual = res;
                    worst_pair = format!("{} ({:?}, {:?})", point.tag, frame[i], frame[j]);
                }
            }
        }
    }
    let scale = point
        .coefficients
        .iter()
        .map(linalg::op_norm)
        .fold(0.0_f64, f64::max);
    if w_residual > 1e-8 * (1.0 + scale * scale) {
        return Err(Error::WConditionViolated {
            point: worst_pair,
            residual: w_residual,
        });
    }

    let s = gram(&point.eval(&frames[0][0])) * c(2.0);
    let s_dec = SpectralDecomposition::from_hermitian(&s);
    if s_dec.min() <= 1e-10 * (1.0 + s_dec.max()) {
        return Err(Error::NotPositiveDefinite {
            point: point.tag.clone(),
            min_eigenvalue: s_dec.min(),
        });
    }
    let mut s_deviation = 0.0_f64;
    for frame in &frames {
        for eta in frame {
            let se = gram(&point.eval(eta)) * c(2.0);
            s_deviation = s_deviation.max(linalg::op_norm(&(se - &s)));
        }
    }
    let (factor, sqrt_defect) = linalg::sqrt_psd(&(&s * c(0.5)));
    let inv = factor
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotPositiveDefinite {
            point: point.tag.clone(),
            min_eigenvalue: 0.0,
        })?;
    let k = s.nrows();
    let mut dirac_defect = 0.0_f64;
    for frame in &frames {
        for xi in frame {
            let norm2: f64 = xi.iter().map(|x| x * x).sum();
            let dp = &inv * point.eval(xi);
            let defect = linalg::op_norm(&(gram(&dp) - linalg::identity(k) * c(norm2)));
            dirac_defect = dirac_defect.max(defect);
        }
    }
    Ok(PointFactor {
        tag: point.tag.clone(),
        factor,
        w_residual,
        s_deviation,
        dirac_defect,
        sqrt_defect,
    })
}

/// Random positive definite matrix `V diag(lambda) V*` with `lambda` in `[lo, hi]`.
pub fn random_positive(g: &mut SeededRng, n: usize, lo: f64, hi: f64) -> CMatrix {
    let values: Vec<f64> = (0..n).map(|_| crate::random::uniform(g, lo, hi)).collect();
    crate::random::random_with_spectrum(g, &values)
}

/// Adds `eps` times a fixed even perturbation to the first coefficient,
/// breaking the anticommutation condition.
pub fn corrupt(point: &SymbolPoint, eps: f64) -> SymbolPoint {
    let mut coefficients = point.coefficients.clone();
    let (r, k) = coefficients[0].shape();
    let mut bump = CMatrix::zeros(r, k);
    for i in 0..r.min(k) {
        bump[(i, i)] = Complex64::new(1.0, 0.0);
    }
    coefficients[0] += bump * c(eps);
    SymbolPoint {
        tag: point.tag.clone(),
        coefficients,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_is_dirac_type() {
        let f = factor_point(&pauli_symbol("p"), 1).unwrap();
        assert!(linalg::max_abs(&(f.factor - linalg::identity(2))) < 1e-12);
        assert!(f.dirac_defect < 1e-12);
    }

    #[test]
    fn scaled_pauli() {
        let d = pauli_symbol("p").left_multiply(&(linalg::identity(2) * c(2.0)));
        let s = gram(&d.eval(&[1.0, 0.0])) * c(2.0);
        assert!(linalg::max_abs(&(s - linalg::identity(2) * c(8.0))) < 1e-12);
        let f = factor_point(&d, 1).unwrap();
        assert!(linalg::max_abs(&(f.factor - linalg::identity(2) * c(2.0))) < 1e-12);
    }

    #[test]
    fn recovers_positive_factor() {
        let mut g = rng(17);
        let gm = random_positive(&mut g, 2, 0.5, 3.0);
        let d = pauli_symbol("x0").left_multiply(&gm);
        let f = factor_w_symbol(&SymbolSample { points: vec![d] }, 3).unwrap();
        assert!(linalg::op_norm(&(&f.points[0].factor - gm)) < 1e-8);
        assert!(f.points[0].dirac_defect < 1e-8);
    }

    #[test]
    fn corrupted_symbol_rejected() {
        let bad = corrupt(&pauli_symbol("p"), 1e-4);
        let err = factor_point(&bad, 1).unwrap_err();
        assert_eq!(err.reason(), "w_condition_violated");
    }
}
