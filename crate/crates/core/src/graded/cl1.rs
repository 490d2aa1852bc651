use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::families::SampledFamily;
use crate::graded::grading::OddOperator;
use crate::graded::nu::cl1_defect;
use crate::graded::signature::kernel_basis;
use crate::linalg::{self, c, CMatrix};
use crate::opcore::{ProjectionMatrix, SpectralDecomposition};
use crate::sections::gamma::gamma;
use crate::sections::{
    construct_section, is_spectral_section, ConstructOptions, CutoffProfile, SectionCertificate,
    SectionCheck,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cl1Check {
    pub holds: bool,
    pub section: SectionCheck,
    /// `||sigma P sigma - (1 - P)||`.
    pub anticommutation_defect: f64,
}

/// Spectral section that also satisfies `sigma P sigma = 1 - P`.
pub fn is_cl1_section(
    a: &OddOperator,
    p: &ProjectionMatrix,
    r: f64,
    tol: &Tolerances,
) -> Result<Cl1Check> {
    let section = is_spectral_section(a.base(), p, r, tol)?;
    let anticommutation_defect = cl1_defect(p.entries(), a.grading());
    Ok(Cl1Check {
        holds: section.holds && anticommutation_defect <= tol.oddness,
        section,
        anticommutation_defect,
    })
}

/// Cl(1) section `(S + V) / 2 + 1_(0,inf)(A)` with `S` the kernel projection and
/// `V = B- B+* + B+ B-*` pairing bases of the two graded halves of the kernel.
pub fn kernel_cl1_section(a: &OddOperator, tol: &Tolerances) -> Result<ProjectionMatrix> {
    let kernel = kernel_basis(a, tol)?;
    let n = a.dim();
    let thr = a.base().kernel_threshold(tol);
    let positive = a.base().eig().projector(|v| v > thr);
    let mut p = positive;
    if kernel.ncols() > 0 {
        let form = linalg::hermitian_part(&(kernel.adjoint() * a.sigma() * &kernel));
        let dec = SpectralDecomposition::from_hermitian(&form);
        let (_, plus) = dec.columns_where(|v| v > 0.5);
        let (_, minus) = dec.columns_where(|v| v < -0.5);
        if plus.ncols() != minus.ncols() {
            return Err(Error::IndexObstruction {
                signature: plus.ncols() as i64 - minus.ncols() as i64,
            });
        }
        let bp = &kernel * plus;
        let bm = &kernel * minus;
        let v = &bm * bp.adjoint() + &bp * bm.adjoint();
        let s = &kernel * kernel.adjoint();
        p += (s + v) * c(0.5);
    }
    let p = ProjectionMatrix::with_tolerance(
        linalg::hermitian_part(&p),
        a.base().tail().positive_tail_type(),
        tol.idempotency,
    )?;
    debug_assert_eq!(p.dim(), n);
    Ok(p)
}

/// The trivializer `gamma` applied to odd data; the result is odd.
pub fn odd_gamma(
    a: &OddOperator,
    p: &ProjectionMatrix,
    r: f64,
    profile: CutoffProfile,
    tol: &Tolerances,
) -> Result<CMatrix> {
    let check = is_cl1_section(a, p, r, tol)?;
    if !check.holds {
        return Err(Error::PreconditionFailed(format!(
            "not a Cl(1) {r}-spectral section (section violation {:.3e}, anticommutation {:.3e})",
            check.section.violation(),
            check.anticommutation_defect
        )));
    }
    let corr = gamma(a.base(), p, r, profile, tol)?;
    let odd = a.grading().anticommutator(&corr);
    if odd > tol.oddness {
        return Err(Error::InvariantViolation(format!(
            "odd data gave a correction with anticommutator {odd:.3e}"
        )));
    }
    Ok(corr)
}

/// Section construction on a family of odd operators with Cl(1) input sections.
///
/// Averaging and rounding preserve `sigma T sigma = 1 - T`, so the output is
/// checked for the Cl(1) identity rather than re-symmetrized.
pub fn construct_cl1_section(
    family: &SampledFamily,
    odd: &[OddOperator],
    gss: &[ProjectionMatrix],
    delta: f64,
    opts: &ConstructOptions,
    tol: &Tolerances,
) -> Result<SectionCertificate> {
    if odd.len() != family.len() {
        return Err(Error::DimensionMismatch("one grading per sample is required".into()));
    }
    for (i, (a, p)) in odd.iter().zip(gss).enumerate() {
        if a.base() != family.operator(i) {
            return Err(Error::InvalidInput(format!("odd sample {i} differs from the family")));
        }
        let defect = cl1_defect(p.entries(), a.grading());
        if defect > tol.oddness {
            return Err(Error::NotCl1Compatible { defect });
        }
    }
    let cert = construct_section(family, gss, delta, opts, tol)?;
    for (i, a) in odd.iter().enumerate() {
        let check = is_cl1_section(a, &cert.projections[i], cert.cutoffs[i], tol)?;
        if !check.holds {
            return Err(Error::InvariantViolation(format!(
                "sample {i}: constructed section is not Cl(1) (defect {:.3e})",
                check.anticommutation_defect
            )));
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Grid;
    use crate::graded::grading::Grading;
    use crate::graded::hat::hat;
    use crate::opcore::{positive_projection, TailType};
    use crate::random::{random_complex, rng};

    #[test]
    fn hat_of_one() {
        let a = hat(&CMatrix::from_element(1, 1, c(1.0))).unwrap();
        let tol = Tolerances::default();
        let p = positive_projection(a.base(), &tol).unwrap();
        let expect = (linalg::identity(2) + a.base().entries()) * c(0.5);
        assert!(linalg::max_abs(&(p.entries() - expect)) < 1e-14);
        assert!(is_cl1_section(&a, &p, 0.5, &tol).unwrap().holds);
    }

    #[test]
    fn even_projection_fails() {
        let a = hat(&CMatrix::from_element(1, 1, c(1.0))).unwrap();
        let p = ProjectionMatrix::from_real_diagonal(&[1.0, 0.0], TailType::PositiveModes).unwrap();
        let check = is_cl1_section(&a, &p, 0.5, &Tolerances::default()).unwrap();
        assert!(!check.holds);
        assert!((check.anticommutation_defect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_section_of_zero() {
        let a = OddOperator::from_matrix(CMatrix::zeros(4, 4), Grading::standard(2, 2)).unwrap();
        let tol = Tolerances::default();
        let p = kernel_cl1_section(&a, &tol).unwrap();
        assert_eq!(p.rank(), 2);
        assert!(is_cl1_section(&a, &p, 1.0, &tol).unwrap().holds);
        let b = OddOperator::from_matrix(CMatrix::zeros(3, 3), Grading::standard(2, 1)).unwrap();
        assert_eq!(kernel_cl1_section(&b, &tol).unwrap_err().reason(), "index_obstruction");
    }

    #[test]
    fn odd_gamma_is_odd() {
        // odd analogue of the diagonal hand example: spectrum -3, -0.5, 0.5, 3
        let a = hat(&linalg::real_diagonal(&[0.5, 3.0])).unwrap();
        let tol = Tolerances::default();
        let p = kernel_cl1_section(&a, &tol).unwrap();
        // keep the negative member of the window pair so the correction is nonzero
        let q = ProjectionMatrix::new(
            a.base().eig().projector(|v| v > 1.0 || (v < 0.0 && v > -1.0)),
            p.tail_type(),
        )
        .unwrap();
        assert!(is_cl1_section(&a, &q, 1.0, &tol).unwrap().holds);
        for profile in CutoffProfile::all() {
            let corr = odd_gamma(&a, &q, 1.0, profile, &tol).unwrap();
            assert!(linalg::max_abs(&corr) > 0.1);
            assert!(a.grading().anticommutator(&corr) < 1e-8);
        }
        let small = odd_gamma(&a, &p, 0.25, CutoffProfile::Smoothstep, &tol).unwrap();
        assert!(linalg::max_abs(&small) < 1e-14);
    }

    #[test]
    fn odd_family_construction() {
        let mut g = rng(9);
        let base = random_complex(&mut g, 3, 3) + linalg::identity(3) * c(2.0);
        let dir = random_complex(&mut g, 3, 3);
        let grid = Grid::linspace(0.0, 1.0, 6).unwrap();
        let odd: Vec<OddOperator> = (0..6)
            .map(|k| hat(&(&base + &dir * c(0.1 * grid.point(k).unwrap()))).unwrap())
            .collect();
        let tol = Tolerances::default();
        let fam = SampledFamily::new(
            grid,
            odd.iter().map(|a| a.base().clone()).collect(),
            odd[0].base().tail().clone(),
            "odd",
        )
        .unwrap();
        let gss: Vec<ProjectionMatrix> = odd.iter().map(|a| kernel_cl1_section(a, &tol).unwrap()).collect();
        let cert = construct_cl1_section(&fam, &odd, &gss, 0.1, &Default::default(), &tol).unwrap();
        assert!(cert.verified);
    }
}
