use std::f64::consts::PI;

use crate::config::Tolerances;
use crate::linalg::{self, c, CMatrix, Complex64, I};
use crate::opcore::operator::{TailDescriptor, TruncatedOperator};
use crate::opcore::spectral::SpectralDecomposition;
use crate::{Error, Result};

/// `f(x) = x / sqrt(1 + x^2)`.
pub fn bounded_scalar(x: f64) -> f64 {
    x / (1.0 + x * x).sqrt()
}

/// `f^{-1}(a) = a / sqrt(1 - a^2)`.
pub fn inverse_bounded_scalar(a: f64) -> f64 {
    a / (1.0 - a * a).sqrt()
}

/// `kappa(x) = (x - i) / (x + i)`.
pub fn cayley_scalar(x: f64) -> Complex64 {
    (c(x) - I) / (c(x) + I)
}

/// `f(A)`, with every eigenvalue in `(-1, 1)`.
pub fn bounded_transform(a: &TruncatedOperator) -> CMatrix {
    a.eig().apply_real(bounded_scalar)
}

/// `f^{-1}(a)` carrying the given tail.
pub fn inverse_bounded_transform(a: &CMatrix, tail: TailDescriptor) -> Result<TruncatedOperator> {
    inverse_bounded_transform_with(a, tail, &Tolerances::default())
}

pub fn inverse_bounded_transform_with(
    a: &CMatrix,
    tail: TailDescriptor,
    tol: &Tolerances,
) -> Result<TruncatedOperator> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "bounded transform image must be a nonempty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let defect = linalg::hermiticity_defect(a);
    if defect > tol.hermiticity {
        return Err(Error::NotHermitian {
            defect,
            tolerance: tol.hermiticity,
        });
    }
    let dec = SpectralDecomposition::from_hermitian(a);
    let radius = dec.spectral_radius();
    if radius >= 1.0 - tol.bounded_margin {
        return Err(Error::OutsideBoundedImage {
            radius,
            margin: tol.bounded_margin,
        });
    }
    TruncatedOperator::with_tolerance(dec.apply_real(inverse_bounded_scalar), tail, tol)
}

/// `kappa(A) = (A - i)(A + i)^{-1}`.
pub fn cayley(a: &TruncatedOperator) -> CMatrix {
    a.eig().apply(cayley_scalar)
}

/// `kat(a) = (a - i sqrt(1 - a^2))^2`, so that `kappa = kat o f`.
pub fn kat(a: f64) -> Result<Complex64> {
    if !(a.abs() <= 1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!("kat needs |a| <= 1, got {a}")));
    }
    let s = (1.0 - a * a).max(0.0).sqrt();
    let z = c(a) - I * s;
    Ok(z * z)
}

/// `phi(e^{it}) = cos(t/2)` on the lower arc `t in [-pi, 0]`.
pub fn phi(z: Complex64) -> Result<f64> {
    let tol = 1e-9;
    let off_circle = (z.norm() - 1.0).abs();
    let above = z.im.max(0.0);
    if off_circle > tol || above > tol {
        return Err(Error::NotOnArc {
            value: format!("{}{:+}i", z.re, z.im),
            defect: off_circle.max(above),
        });
    }
    let mut t = z.im.atan2(z.re);
    if t > 0.0 {
        t = if t > PI / 2.0 { -PI } else { 0.0 };
    }
    Ok((t / 2.0).cos())
}

/// Modulus of continuity of `phi` on the lower arc:
/// `|phi(z) - phi(w)| <= phi_modulus(|z - w|)`, equal to `2 sin(asin(d/2)/2)`.
pub fn phi_modulus(d: f64) -> f64 {
    2.0 * ((0.5 * d).clamp(0.0, 1.0).asin() / 2.0).sin()
}

/// `kat` applied spectrally to a Hermitian matrix with norm at most 1.
pub fn kat_matrix(a: &CMatrix) -> Result<CMatrix> {
    let dec = SpectralDecomposition::from_hermitian(a);
    let radius = dec.spectral_radius();
    if radius > 1.0 + 1e-12 {
        return Err(Error::NormTooLarge { norm: radius });
    }
    Ok(dec.apply(|v| kat(v.clamp(-1.0, 1.0)).expect("clamped")))
}

/// `phi` of a unitary with spectrum on the lower arc, without an eigenbasis.
///
/// With `c = Re U`, `s = -Im U` (so `c = cos t`, `s = -sin t >= 0` on the arc)
/// two closed forms hold: `phi = sqrt((1 + c)/2)` and
/// `phi = s / (2 sqrt((1 - c)/2))`. The first loses accuracy where `phi` is
/// small, the second where `phi` is close to 1, so they are blended with the
/// weight `w = (1 + c)/2 = phi^2`.
pub fn phi_matrix(u: &CMatrix) -> Result<CMatrix> {
    let n = u.nrows();
    if !u.is_square() {
        return Err(Error::DimensionMismatch("phi needs a square matrix".into()));
    }
    let defect = linalg::unitarity_defect(u);
    if defect > 1e-8 {
        return Err(Error::NotUnitary { defect });
    }
    let normal = linalg::op_norm(&(u * u.adjoint() - u.adjoint() * u));
    if normal > 1e-8 {
        return Err(Error::NotUnitary { defect: normal });
    }
    let s = (u.adjoint() - u) * (c(0.5) / I);
    let s = linalg::hermitian_part(&s);
    let s_min = SpectralDecomposition::from_hermitian(&s).min();
    if s_min < -1e-9 {
        return Err(Error::NotOnArc {
            value: "matrix".into(),
            defect: -s_min,
        });
    }
    let one = linalg::identity(n);
    let re = linalg::hermitian_part(u);
    let w = (&one + &re) * c(0.5);
    let (near_one, _) = linalg::sqrt_psd(&w);
    let (half_angle, _) = linalg::sqrt_psd(&((&one - &re) * c(0.5)));
    let blended = match half_angle.clone().try_inverse() {
        Some(inv) => {
            let near_zero = &s * inv * c(0.5);
            &w * near_one + (&one - &w) * near_zero
        }
        None => near_one,
    };
    Ok(linalg::hermitian_part(&blended))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_diagonal;

    fn diag(v: &[f64]) -> TruncatedOperator {
        TruncatedOperator::from_real_diagonal(v, TailDescriptor::positive()).unwrap()
    }

    #[test]
    fn bounded_transform_examples() {
        assert!(linalg::max_abs(&bounded_transform(&diag(&[0.0]))) < 1e-15);
        let f1 = bounded_transform(&diag(&[1.0]));
        assert!((f1[(0, 0)].re - 0.5_f64.sqrt()).abs() < 1e-15);
        let f = bounded_transform(&diag(&[-2.0, 1.0, 3.0]));
        let expect = real_diagonal(&[-2.0 / 5f64.sqrt(), 0.5f64.sqrt(), 3.0 / 10f64.sqrt()]);
        assert!(linalg::max_abs(&(f - expect)) < 1e-15);
    }

    #[test]
    fn inverse_bounded_examples() {
        let a = inverse_bounded_transform(&real_diagonal(&[0.0]), TailDescriptor::positive()).unwrap();
        assert_eq!(a.entries()[(0, 0)].re, 0.0);
        let b = inverse_bounded_transform(&real_diagonal(&[0.5f64.sqrt()]), TailDescriptor::positive())
            .unwrap();
        assert!((b.entries()[(0, 0)].re - 1.0).abs() < 1e-14);
        let err = inverse_bounded_transform(&real_diagonal(&[1.0]), TailDescriptor::positive())
            .unwrap_err();
        assert_eq!(err.reason(), "outside_bounded_image");
    }

    #[test]
    fn cayley_examples() {
        assert!((cayley(&diag(&[0.0]))[(0, 0)] - c(-1.0)).norm() < 1e-15);
        assert!((cayley(&diag(&[1.0]))[(0, 0)] + I).norm() < 1e-15);
        let k = cayley_scalar(3.0) - cayley_scalar(-3.0);
        assert!((k.norm() - 1.2).abs() < 1e-15);
    }

    #[test]
    fn kat_and_phi_examples() {
        assert!((kat(0.0).unwrap() - c(-1.0)).norm() < 1e-15);
        assert!((kat(1.0).unwrap() - c(1.0)).norm() < 1e-15);
        assert!((phi(kat(0.6).unwrap()).unwrap() - 0.6).abs() < 1e-14);
        assert_eq!(phi(Complex64::new(0.0, 1.0)).unwrap_err().reason(), "not_on_arc");
        assert_eq!(phi(c(2.0)).unwrap_err().reason(), "not_on_arc");
        assert!(kat(1.5).is_err());
    }

    #[test]
    fn cayley_factors_through_kat() {
        for x in [-5.0, -0.3, 0.0, 0.7, 12.0] {
            let lhs = cayley_scalar(x);
            let rhs = kat(bounded_scalar(x)).unwrap();
            assert!((lhs - rhs).norm() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn phi_matrix_matches_scalar() {
        let a = diag(&[0.0, 0.5, 2.0, 40.0]);
        let lhs = bounded_transform(&a);
        let rhs = phi_matrix(&cayley(&a)).unwrap();
        assert!(linalg::max_abs(&(lhs - rhs)) < 1e-12);
        let neg = diag(&[-1.0]);
        assert_eq!(phi_matrix(&cayley(&neg)).unwrap_err().reason(), "not_on_arc");
    }
}
