use rayon::prelude::*;
use serde::Serialize;
use spectra_sect::families::{
    fuglede_family, gss_obstruction, negative_to_positive_path, rellich_eigenvalue, rellich_reference,
    semibounded_no_gss_family, shift_family, convergence_order, Grid, GssObstruction,
};
use spectra_sect::opcore::{bounded_scalar, cayley_scalar, graph_distance, positive_projection, riesz_distance};
use spectra_sect::sections::{construct_section, is_spectral_section, ConstructOptions};
use spectra_sect::io::CertificateJson;

use super::family::{analyse, shift_operator, FamilyReport};
use crate::config::RunConfig;
use crate::output::{cell, opt_cell, Failure, Outcome, Table};

const RELLICH_TOLERANCE: f64 = 0.01;
const CLOSED_FORM_TOLERANCE: f64 = 1e-12;

#[derive(Serialize)]
struct RellichRow {
    x: f64,
    mesh: usize,
    eigenvalue: f64,
    reference: Option<f64>,
    relative_error: Option<f64>,
    /// `log2` of the error ratio between `mesh` and `2 mesh + 1`.
    order: Option<f64>,
    holds: Option<bool>,
}

#[derive(Serialize)]
struct RellichReport {
    tolerance: f64,
    rows: Vec<RellichRow>,
}

pub fn rellich(xs: &[f64], mesh: usize) -> Result<Outcome, Failure> {
    let rows: Vec<spectra_sect::Result<RellichRow>> = xs
        .par_iter()
        .map(|&x| {
            let eigenvalue = rellich_eigenvalue(x, mesh)?;
            let reference = rellich_reference(x)?;
            let (relative_error, order) = match reference {
                Some(r) => {
                    let (_, _, order) = convergence_order(x, mesh)?;
                    (Some(((eigenvalue - r) / r).abs()), Some(order))
                }
                None => (None, None),
            };
            Ok(RellichRow {
                x,
                mesh,
                eigenvalue,
                reference,
                holds: relative_error.map(|e| e < RELLICH_TOLERANCE),
                relative_error,
                order,
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<spectra_sect::Result<Vec<_>>>()?;
    let failed = rows.iter().any(|r| r.holds == Some(false));
    let table = Table {
        header: vec!["x", "mesh", "eigenvalue", "reference", "relative_error", "order"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    cell(r.x),
                    r.mesh.to_string(),
                    cell(r.eigenvalue),
                    opt_cell(r.reference),
                    opt_cell(r.relative_error),
                    opt_cell(r.order),
                ]
            })
            .collect(),
    };
    let report = RellichReport {
        tolerance: RELLICH_TOLERANCE,
        rows,
    };
    Ok(Outcome::checked(failed.then_some("rellich_mismatch"), report).with_table(table))
}

#[derive(Serialize)]
struct FugledeReport {
    dim: usize,
    /// Worst deviation of the distances to the marker from `2 f(x)` and `|kappa(x) - kappa(-x)|`.
    closed_form_error: f64,
    marker_riesz: Option<f64>,
    expected_marker_riesz: f64,
    marker_graph: Option<f64>,
    expected_marker_graph: f64,
    marker_riesz_jump: bool,
    family: FamilyReport,
}

pub fn fuglede(cfg: &RunConfig, dim: usize) -> Result<Outcome, Failure> {
    let fam = fuglede_family(dim)?;
    let inf = fam.operator(fam.len() - 1);
    let errors: Vec<spectra_sect::Result<f64>> = (1..dim)
        .into_par_iter()
        .map(|x| {
            let a = fam.operator(x - 1);
            let xf = x as f64;
            let rd = riesz_distance(inf, a)?;
            let gd = graph_distance(inf, a)?;
            Ok((rd - 2.0 * bounded_scalar(xf))
                .abs()
                .max((gd - (cayley_scalar(xf) - cayley_scalar(-xf)).norm()).abs()))
        })
        .collect();
    let mut closed_form_error = 0.0_f64;
    for e in errors {
        closed_form_error = closed_form_error.max(e?);
    }
    let (family, table) = analyse(cfg, &fam)?;
    let last = family.continuity.pair(dim - 2, dim - 1);
    let xl = (dim - 1) as f64;
    let marker_riesz_jump = last.is_some_and(|p| p.riesz_jump);
    let report = FugledeReport {
        dim,
        closed_form_error,
        marker_riesz: last.and_then(|p| p.riesz),
        expected_marker_riesz: 2.0 * bounded_scalar(xl),
        marker_graph: last.and_then(|p| p.graph),
        expected_marker_graph: 4.0 * xl / (xl * xl + 1.0),
        marker_riesz_jump,
        family,
    };
    let reason = if closed_form_error > CLOSED_FORM_TOLERANCE {
        Some("closed_form_mismatch")
    } else if !marker_riesz_jump {
        Some("no_riesz_jump")
    } else {
        None
    };
    Ok(Outcome::checked(reason, report).with_table(table))
}

#[derive(Serialize)]
struct ShiftSample {
    x: f64,
    cutoff: f64,
    /// `|x| + gap / 2`, with `gap` the distance from 0 to spec(A).
    explicit_cutoff: f64,
    explicit_holds: bool,
    distance_to_chi: f64,
}

#[derive(Serialize)]
struct ShiftReport {
    gap: f64,
    samples: Vec<ShiftSample>,
    certificate: CertificateJson,
    family: FamilyReport,
}

pub fn shift(cfg: &RunConfig, samples: usize) -> Result<Outcome, Failure> {
    let tol = &cfg.tolerances;
    let a = shift_operator();
    let fam = shift_family(&a, Grid::linspace(-1.0, 1.0, samples)?)?;
    let chi = positive_projection(&a, tol)?;
    let gap = a.eig().min_abs();
    let opts = ConstructOptions {
        rank_budget: cfg.rank_budget,
        ..Default::default()
    };
    let cert = construct_section(&fam, &vec![chi.clone(); fam.len()], 0.1, &opts, tol)?;
    let mut rows = Vec::with_capacity(fam.len());
    for (i, (q, &r)) in cert.projections.iter().zip(&cert.cutoffs).enumerate() {
        let x = fam.grid().point(i).expect("interval grid");
        let explicit_cutoff = x.abs() + gap / 2.0;
        let explicit_holds = is_spectral_section(fam.operator(i), &chi, explicit_cutoff, tol)?.holds;
        rows.push(ShiftSample {
            x,
            cutoff: r,
            explicit_cutoff,
            explicit_holds,
            distance_to_chi: q.distance(&chi)?,
        });
    }
    let (family, table) = analyse(cfg, &fam)?;
    let reason = if !cert.verified {
        Some("section_violated")
    } else if rows.iter().any(|s| !s.explicit_holds) {
        Some("explicit_cutoff_failed")
    } else if rows.iter().any(|s| s.distance_to_chi > tol.inclusion) {
        Some("section_moved")
    } else {
        None
    };
    let report = ShiftReport {
        gap,
        samples: rows,
        certificate: CertificateJson::from_certificate(&cert),
        family,
    };
    Ok(Outcome::checked(reason, report).with_table(table))
}

#[derive(Serialize)]
struct NoGssReport {
    semibounded: GssObstruction,
    path: GssObstruction,
    family: FamilyReport,
}

pub fn no_gss(cfg: &RunConfig, dim: usize) -> Result<Outcome, Failure> {
    let points: Vec<f64> = (1..=dim).map(|x| x as f64).collect();
    let fam = semibounded_no_gss_family(dim, &points)?;
    let path = negative_to_positive_path(dim, 10)?;
    let (family, table) = analyse(cfg, &fam)?;
    let report = NoGssReport {
        semibounded: family.obstruction.clone(),
        path: gss_obstruction(&path),
        family,
    };
    let reason = (!(report.semibounded.obstructed && report.path.obstructed)).then_some("obstruction_missed");
    Ok(Outcome::checked(reason, report).with_table(table))
}
