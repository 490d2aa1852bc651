pub mod demo;
pub mod family;
pub mod graded;
pub mod sections;

use spectra_sect::families::{ContinuityReport, LowerBoundCurve, SampledFamily};
use spectra_sect::opcore::{positive_projection_lenient, ProjectionMatrix};
use spectra_sect::Tolerances;

use crate::output::{cell, opt_cell, Table};

/// One row per sample; the steps are those of the edge to the next sample.
pub fn curve_table(family: &SampledFamily, continuity: &ContinuityReport, bounds: &LowerBoundCurve) -> Table {
    let grid = family.grid();
    let rows = (0..family.len())
        .map(|i| {
            let edge = continuity.pairs.iter().find(|p| p.from == i);
            let mut flags = Vec::new();
            if bounds.unbounded_below[i] {
                flags.push("unbounded_below");
            }
            if let Some(p) = edge {
                for (on, name) in [
                    (p.tail_mismatch, "tail_mismatch"),
                    (p.riesz_jump, "riesz_jump"),
                    (p.graph_jump, "graph_jump"),
                    (p.riesz_continuous, "riesz_continuous"),
                    (p.graph_continuous, "graph_continuous"),
                    (p.discontinuity, "discontinuity"),
                ] {
                    if on {
                        flags.push(name);
                    }
                }
            }
            let c_x = if bounds.unbounded_below[i] {
                f64::NEG_INFINITY
            } else {
                bounds.lower_bounds[i]
            };
            vec![
                grid.label(i),
                cell(c_x),
                opt_cell(edge.and_then(|p| p.riesz)),
                opt_cell(edge.and_then(|p| p.graph)),
                flags.join(";"),
            ]
        })
        .collect();
    Table {
        header: vec!["x", "c_x", "riesz_step", "graph_step", "flags"],
        rows,
    }
}

pub fn default_gss(family: &SampledFamily, tol: &Tolerances) -> Vec<ProjectionMatrix> {
    family
        .operators()
        .iter()
        .map(|a| positive_projection_lenient(a, tol))
        .collect()
}
