use serde::Serialize;

use crate::config::Tolerances;
use crate::graded::grading::Grading;
use crate::linalg::{self, c, CMatrix};
use crate::opcore::{positive_projection_lenient, ProjectionMatrix, SpectralDecomposition, TruncatedOperator};
use crate::sections::{default_rank_budget, is_generalized_section, GssCheck};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Supersymmetrized {
    pub grading: Grading,
    /// `(A~ - sigma A~ sigma) / 2`.
    pub odd: CMatrix,
    /// `||A_bar - A~||`.
    pub correction: f64,
}

/// `sigma = J (J^2)^{-1/2}` and the odd part of `a_tilde` with respect to it.
pub fn supersymmetrize(j: &CMatrix, a_tilde: &CMatrix) -> Result<Supersymmetrized> {
    if !j.is_square() || j.shape() != a_tilde.shape() {
        return Err(Error::DimensionMismatch(format!(
            "J is {}x{}, A is {}x{}",
            j.nrows(),
            j.ncols(),
            a_tilde.nrows(),
            a_tilde.ncols()
        )));
    }
    let tol = Tolerances::default();
    for m in [j, a_tilde] {
        let defect = linalg::hermiticity_defect(m);
        if defect > tol.hermiticity {
            return Err(Error::NotHermitian {
                defect,
                tolerance: tol.hermiticity,
            });
        }
    }
    let dec = SpectralDecomposition::from_hermitian(j);
    let min_abs = dec.min_abs();
    if min_abs <= 1e-10 {
        return Err(Error::Singular {
            min_abs,
            threshold: 1e-10,
        });
    }
    let sigma = dec.apply_real(f64::signum);
    let grading = Grading::new(sigma)?;
    let a = linalg::hermitian_part(a_tilde);
    let odd = grading.odd_part(&a);
    let correction = linalg::hermitian_norm(&(&odd - &a));
    Ok(Supersymmetrized {
        grading,
        odd,
        correction,
    })
}

#[derive(Debug, Clone)]
pub struct SigmaTrick {
    /// `A' = A_bar + sigma`.
    pub operator: TruncatedOperator,
    pub odd_part: CMatrix,
    /// `min eig (A')^2`.
    pub min_square_eigenvalue: f64,
    /// `||A - A_bar||`.
    pub even_norm: f64,
    pub section: ProjectionMatrix,
    /// `chi+(A')` tested as a generalized section for `A`.
    pub gss: GssCheck,
}

pub fn sigma_trick(a: &TruncatedOperator, grading: &Grading, tol: &Tolerances) -> Result<SigmaTrick> {
    if grading.dim() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {} with grading of dimension {}",
            a.dim(),
            grading.dim()
        )));
    }
    let odd_part = grading.odd_part(a.entries());
    let shifted = &odd_part + grading.sigma();
    let operator = a.with_entries(shifted)?;
    let min_square_eigenvalue = operator
        .eig()
        .eigenvalues()
        .iter()
        .fold(f64::INFINITY, |m, v| m.min(v * v));
    let even_norm = linalg::hermitian_norm(&(a.entries() - &odd_part));
    let section = positive_projection_lenient(&operator, tol);
    let gss = is_generalized_section(a, &section, default_rank_budget(a.dim()), 1e-6, tol)?;
    Ok(SigmaTrick {
        operator,
        odd_part,
        min_square_eigenvalue,
        even_norm,
        section,
        gss,
    })
}

#[derive(Debug, Clone)]
pub struct EssOddProjection {
    pub projection: ProjectionMatrix,
    pub b: CMatrix,
    pub u: CMatrix,
    /// `||u^2 - 1||`.
    pub symmetry_defect: f64,
    /// `||sigma b + b sigma||`.
    pub oddness_defect: f64,
    /// `||P - (a + 1)/2||`.
    pub deformation: f64,
    pub sqrt_defect: f64,
}

/// `b = (a - sigma a sigma)/2`, `u = b + sigma sqrt(1 - b^2)`, `P = (u + 1)/2`.
pub fn ess_odd_projection(a: &CMatrix, grading: &Grading) -> Result<EssOddProjection> {
    if !a.is_square() || a.nrows() != grading.dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix of size {}x{} with grading of dimension {}",
            a.nrows(),
            a.ncols(),
            grading.dim()
        )));
    }
    let tol = Tolerances::default();
    let defect = linalg::hermiticity_defect(a);
    if defect > tol.hermiticity {
        return Err(Error::NotHermitian {
            defect,
            tolerance: tol.hermiticity,
        });
    }
    let norm = linalg::hermitian_norm(a);
    if norm > 1.0 + 1e-12 {
        return Err(Error::NormTooLarge { norm });
    }
    let n = a.nrows();
    let one = linalg::identity(n);
    let a = linalg::hermitian_part(a);
    let b = grading.odd_part(&a);
    let (root, sqrt_defect) = linalg::sqrt_psd(&(&one - &b * &b));
    let u = linalg::hermitian_part(&(&b + grading.sigma() * root));
    let symmetry_defect = linalg::op_norm(&(&u * &u - &one));
    let oddness_defect = grading.anticommutator(&b);
    let p = (&u + &one) * c(0.5);
    let deformation = linalg::hermitian_norm(&(&p - (&a + &one) * c(0.5)));
    let projection = ProjectionMatrix::with_tolerance(p, crate::opcore::TailType::Zero, 1e-8)?;
    Ok(EssOddProjection {
        projection,
        b,
        u,
        symmetry_defect,
        oddness_defect,
        deformation,
        sqrt_defect,
    })
}

/// Serializable part of a [`SigmaTrick`].
#[derive(Debug, Clone, Serialize)]
pub struct SigmaTrickSummary {
    pub min_square_eigenvalue: f64,
    pub even_norm: f64,
    pub gss: GssCheck,
}

impl From<&SigmaTrick> for SigmaTrickSummary {
    fn from(s: &SigmaTrick) -> Self {
        SigmaTrickSummary {
            min_square_eigenvalue: s.min_square_eigenvalue,
            even_norm: s.even_norm,
            gss: s.gss.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real, real_diagonal};
    use crate::opcore::TailDescriptor;
    use crate::random::{random_hermitian, rng};

    #[test]
    fn supersymmetrize_examples() {
        let s = supersymmetrize(&real_diagonal(&[2.0, -3.0]), &linalg::identity(2)).unwrap();
        assert!(linalg::max_abs(&(s.grading.sigma() - real_diagonal(&[1.0, -1.0]))) < 1e-14);
        assert!(linalg::max_abs(&s.odd) < 1e-14);
        let x = from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let s = supersymmetrize(&real_diagonal(&[1.0, -1.0]), &x).unwrap();
        assert!(linalg::max_abs(&(s.odd - &x)) < 1e-14);
        let err = supersymmetrize(&real_diagonal(&[1.0, 0.0]), &x).unwrap_err();
        assert_eq!(err.reason(), "singular");
    }

    #[test]
    fn sigma_trick_examples() {
        let tol = Tolerances::default();
        let g = Grading::standard(1, 1);
        let sigma = g.sigma().clone();
        let a = TruncatedOperator::new(sigma.clone(), TailDescriptor::positive()).unwrap();
        let out = sigma_trick(&a, &g, &tol).unwrap();
        assert!(linalg::max_abs(&(out.operator.entries() - &sigma)) < 1e-14);

        let odd = from_real(2, 2, &[0.0, 3.0, 3.0, 0.0]);
        let a = TruncatedOperator::new(odd.clone(), TailDescriptor::positive()).unwrap();
        let out = sigma_trick(&a, &g, &tol).unwrap();
        assert!((out.min_square_eigenvalue - 10.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_trick_random_is_invertible() {
        let mut r = rng(5);
        let g = Grading::standard(3, 3);
        for _ in 0..10 {
            let m = random_hermitian(&mut r, 6, 4.0);
            let a = TruncatedOperator::new(m, TailDescriptor::positive()).unwrap();
            let out = sigma_trick(&a, &g, &Tolerances::default()).unwrap();
            assert!(out.min_square_eigenvalue >= 1.0 - 1e-8);
        }
    }

    #[test]
    fn ess_odd_examples() {
        let g = Grading::standard(1, 1);
        let a = from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let out = ess_odd_projection(&a, &g).unwrap();
        assert!(linalg::max_abs(&(&out.u - &a)) < 1e-12);
        let zero = CMatrix::zeros(2, 2);
        let out = ess_odd_projection(&zero, &g).unwrap();
        assert!(linalg::max_abs(&(out.u - g.sigma())) < 1e-14);
        let err = ess_odd_projection(&(a * c(2.0)), &g).unwrap_err();
        assert_eq!(err.reason(), "norm_too_large");
    }

    #[test]
    fn ess_odd_random() {
        let mut r = rng(9);
        let g = Grading::standard(2, 3);
        for _ in 0..10 {
            let a = random_hermitian(&mut r, 5, 1.0);
            let out = ess_odd_projection(&a, &g).unwrap();
            assert!(out.symmetry_defect < 1e-8);
            assert!(out.oddness_defect < 1e-12);
        }
    }
}
