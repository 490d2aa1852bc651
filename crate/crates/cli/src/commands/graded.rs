use std::path::Path;

use serde::Serialize;
use spectra_sect::graded::{
    factor_w_symbol, is_cl1_section, kernel_cl1_section, kernel_signature, sigma_trick as run_sigma_trick,
    Cl1Check, KernelSignature, OddOperator, PointFactor, SigmaTrickSummary,
};
use spectra_sect::io::{MatrixJson, OperatorJson, ProjectionJson};

use crate::config::RunConfig;
use crate::input;
use crate::output::{Failure, Outcome};

#[derive(Serialize)]
struct Cl1Report {
    check: Cl1Check,
    kernel: KernelSignature,
    /// Present when the projection was built rather than read.
    projection: Option<ProjectionJson>,
}

pub fn cl1_verify(
    cfg: &RunConfig,
    operator: &Path,
    grading: &Path,
    projection: Option<&Path>,
    cutoff: f64,
) -> Result<Outcome, Failure> {
    let tol = &cfg.tolerances;
    let odd = OddOperator::with_tolerance(input::operator(operator)?, input::grading(grading)?, tol)?;
    let (p, built) = match projection {
        Some(path) => (input::projection(path)?, false),
        None => (kernel_cl1_section(&odd, tol)?, true),
    };
    let check = is_cl1_section(&odd, &p, cutoff, tol)?;
    let kernel = kernel_signature(&odd, Some(cutoff), tol)?;
    let reason = if !check.section.holds {
        Some("section_violated")
    } else if !check.holds {
        Some("not_cl1_compatible")
    } else {
        None
    };
    let report = Cl1Report {
        check,
        kernel,
        projection: built.then(|| ProjectionJson::from_projection(&p)),
    };
    Ok(Outcome::checked(reason, report))
}

#[derive(Serialize)]
struct FactorReport {
    seed: u64,
    points: Vec<PointFactor>,
    /// `I` per point, the positive factor of the symbol.
    factors: Vec<MatrixJson>,
}

pub fn factor_symbol(cfg: &RunConfig, symbol: &Path) -> Result<Outcome, Failure> {
    let sample = input::symbol(symbol)?;
    let fac = factor_w_symbol(&sample, cfg.seed)?;
    let factors = fac.points.iter().map(|p| MatrixJson::from_matrix(&p.factor)).collect();
    Ok(Outcome::pass(FactorReport {
        seed: cfg.seed,
        points: fac.points,
        factors,
    }))
}

#[derive(Serialize)]
struct SigmaReport {
    #[serde(flatten)]
    summary: SigmaTrickSummary,
    operator: OperatorJson,
    odd_part: MatrixJson,
    section: ProjectionJson,
}

pub fn sigma_trick(cfg: &RunConfig, operator: &Path, grading: &Path) -> Result<Outcome, Failure> {
    let a = input::operator(operator)?;
    let g = input::grading(grading)?;
    let st = run_sigma_trick(&a, &g, &cfg.tolerances)?;
    let summary = SigmaTrickSummary::from(&st);
    let reason = (!st.gss.holds).then_some("gss_rejected");
    let report = SigmaReport {
        summary,
        operator: OperatorJson::from_operator(&st.operator),
        odd_part: MatrixJson::from_matrix(&st.odd_part),
        section: ProjectionJson::from_projection(&st.section),
    };
    Ok(Outcome::checked(reason, report))
}
