use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use spectra_sect::families::{
    continuity_report, fuglede_family, gss_obstruction, lower_bound_report, negative_to_positive_path,
    random_linear_family, rellich_family, semibounded_no_gss_family, shift_family, ContinuityReport, Grid,
    GssObstruction, LowerBoundCurve, SampledFamily,
};
use spectra_sect::io::FamilyJson;
use spectra_sect::opcore::{TailDescriptor, TruncatedOperator};
use spectra_sect::random::rng;

use super::curve_table;
use crate::config::RunConfig;
use crate::input;
use crate::output::{Failure, Outcome};
use crate::FamilyName;

#[derive(Debug, Clone, Args)]
pub struct GenParams {
    #[arg(long)]
    pub dim: Option<usize>,
    /// Grid points; the default depends on the family.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub points: Option<Vec<f64>>,
    /// Number of equispaced samples on [-1, 1] (shift, random).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Path subdivisions.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Finite-difference intervals of the Rellich operator.
    #[arg(long)]
    pub mesh: Option<usize>,
    /// Norm of the constant part of the random family.
    #[arg(long, allow_negative_numbers = true)]
    pub scale: Option<f64>,
    /// Base operator of the shift family.
    #[arg(long)]
    pub operator: Option<PathBuf>,
}

pub fn shift_operator() -> TruncatedOperator {
    TruncatedOperator::from_real_diagonal(&[-3.0, -0.05, 0.05, 2.5, 4.0], TailDescriptor::positive())
        .expect("fixed diagonal")
}

fn interval_grid(p: &GenParams, samples: usize) -> spectra_sect::Result<Grid> {
    match &p.points {
        Some(points) => Grid::interval(points.clone()),
        None => Grid::linspace(-1.0, 1.0, p.samples.unwrap_or(samples)),
    }
}

pub fn build(cfg: &RunConfig, name: FamilyName, p: &GenParams) -> Result<SampledFamily, Failure> {
    let fam = match name {
        FamilyName::Fuglede => fuglede_family(p.dim.unwrap_or(32))?,
        FamilyName::Shift => {
            let a = match &p.operator {
                Some(path) => input::operator(path)?,
                None => shift_operator(),
            };
            shift_family(&a, interval_grid(p, 21)?)?
        }
        FamilyName::NoGss => {
            let dim = p.dim.unwrap_or(8);
            let points = p.points.clone().unwrap_or_else(|| (1..=dim).map(|x| x as f64).collect());
            semibounded_no_gss_family(dim, &points)?
        }
        FamilyName::Path => negative_to_positive_path(p.dim.unwrap_or(8), p.steps.unwrap_or(10))?,
        FamilyName::Rellich => {
            let points = p.points.clone().unwrap_or_else(|| vec![0.2, 0.5, 0.9]);
            rellich_family(&points, p.mesh.unwrap_or(100))?.family
        }
        FamilyName::Random => {
            let mut g = rng(cfg.seed);
            random_linear_family(&mut g, p.dim.unwrap_or(8), p.samples.unwrap_or(21), p.scale.unwrap_or(4.0))?
        }
    };
    Ok(fam)
}

pub fn generate(cfg: &RunConfig, name: FamilyName, p: &GenParams) -> Result<Outcome, Failure> {
    let fam = build(cfg, name, p)?;
    Ok(Outcome::pass(FamilyJson::from_family(&fam)))
}

#[derive(Serialize)]
pub struct FamilyReport {
    pub label: String,
    pub samples: usize,
    pub dim: usize,
    pub continuity: ContinuityReport,
    pub lower_bounds: LowerBoundCurve,
    pub obstruction: GssObstruction,
}

/// Continuity, lower-bound and obstruction data plus the curve table.
pub fn analyse(cfg: &RunConfig, fam: &SampledFamily) -> Result<(FamilyReport, crate::output::Table), Failure> {
    let continuity = continuity_report(fam, &cfg.thresholds)?;
    let lower_bounds = lower_bound_report(fam, &cfg.thresholds)?;
    let table = curve_table(fam, &continuity, &lower_bounds);
    let report = FamilyReport {
        label: fam.label().to_string(),
        samples: fam.len(),
        dim: fam.dim(),
        continuity,
        lower_bounds,
        obstruction: gss_obstruction(fam),
    };
    Ok((report, table))
}

pub fn report(cfg: &RunConfig, family: &Path) -> Result<Outcome, Failure> {
    let fam = input::family(family)?;
    let (report, table) = analyse(cfg, &fam)?;
    Ok(Outcome::pass(report).with_table(table))
}
