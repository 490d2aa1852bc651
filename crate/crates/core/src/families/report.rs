use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Thresholds, Tolerances};
use crate::families::family::SampledFamily;
use crate::linalg;
use crate::opcore::{
    bounded_scalar, bounded_transform, graph_distance, riesz_distance, TailKind, TailType,
};
use crate::sections::{chi_plus_tail, verify_certificate, SectionCertificate, SpectralSplit};
use crate::{Error, Result};

/// Metrics across one grid edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairStep {
    pub from: usize,
    pub to: usize,
    pub from_label: String,
    pub to_label: String,
    /// Parameter distance; `None` on edges touching the marker or on graph grids.
    pub step: Option<f64>,
    /// `None` when the two samples carry different tails.
    pub riesz: Option<f64>,
    pub graph: Option<f64>,
    /// Increments rescaled to a unit mean grid step.
    pub riesz_rate: Option<f64>,
    pub graph_rate: Option<f64>,
    pub tail_mismatch: bool,
    pub riesz_jump: bool,
    pub graph_jump: bool,
    pub riesz_continuous: bool,
    pub graph_continuous: bool,
    /// One metric jumps while the other stays continuous.
    pub discontinuity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub label: String,
    pub thresholds: Thresholds,
    pub pairs: Vec<PairStep>,
    /// `max riesz / step` over finite edges.
    pub riesz_modulus: f64,
    pub graph_modulus: f64,
}

impl ContinuityReport {
    pub fn pair(&self, from: usize, to: usize) -> Option<&PairStep> {
        self.pairs
            .iter()
            .find(|p| (p.from == from && p.to == to) || (p.from == to && p.to == from))
    }

    pub fn riesz_jumps(&self) -> Vec<&PairStep> {
        self.pairs.iter().filter(|p| p.riesz_jump).collect()
    }
}

fn mean_step(family: &SampledFamily) -> f64 {
    let steps: Vec<f64> = family
        .grid()
        .edges()
        .iter()
        .filter_map(|&(i, j)| family.grid().step(i, j))
        .collect();
    if steps.is_empty() {
        1.0
    } else {
        steps.iter().sum::<f64>() / steps.len() as f64
    }
}

pub fn continuity_report(family: &SampledFamily, thresholds: &Thresholds) -> Result<ContinuityReport> {
    if family.len() < 2 {
        return Err(Error::InvalidInput("continuity report needs at least 2 samples".into()));
    }
    let grid = family.grid();
    let unit = mean_step(family);
    let edges = grid.edges();
    let pairs: Vec<PairStep> = edges
        .par_iter()
        .map(|&(i, j)| {
            let a = family.operator(i);
            let b = family.operator(j);
            let step = grid.step(i, j);
            let tail_mismatch = a.tail() != b.tail();
            let (riesz, graph) = if tail_mismatch {
                (None, None)
            } else {
                (riesz_distance(a, b).ok(), graph_distance(a, b).ok())
            };
            let scale = match step {
                Some(s) if s > 0.0 => unit / s,
                _ => 1.0,
            };
            let riesz_rate = riesz.map(|d| d * scale);
            let graph_rate = graph.map(|d| d * scale);
            let jump = |r: Option<f64>| r.is_some_and(|v| v >= thresholds.jump);
            let cont = |r: Option<f64>| r.is_some_and(|v| v <= thresholds.continuity);
            let riesz_jump = jump(riesz_rate);
            let graph_jump = jump(graph_rate);
            let riesz_continuous = cont(riesz_rate);
            let graph_continuous = cont(graph_rate);
            PairStep {
                from: i,
                to: j,
                from_label: grid.label(i),
                to_label: grid.label(j),
                step,
                riesz,
                graph,
                riesz_rate,
                graph_rate,
                tail_mismatch,
                riesz_jump,
                graph_jump,
                riesz_continuous,
                graph_continuous,
                discontinuity: (riesz_jump && graph_continuous) || (graph_jump && riesz_continuous),
            }
        })
        .collect();
    let modulus = |get: fn(&PairStep) -> Option<f64>| {
        pairs
            .iter()
            .filter_map(|p| match (get(p), p.step) {
                (Some(d), Some(s)) if s > 0.0 => Some(d / s),
                _ => None,
            })
            .fold(0.0_f64, f64::max)
    };
    Ok(ContinuityReport {
        label: family.label().to_string(),
        thresholds: *thresholds,
        riesz_modulus: modulus(|p| p.riesz),
        graph_modulus: modulus(|p| p.graph),
        pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundCurve {
    pub label: String,
    /// `c_x = min spec(A_x)`.
    pub lower_bounds: Vec<f64>,
    /// Samples whose tail is unbounded below, where `c_x` only covers the window.
    pub unbounded_below: Vec<bool>,
    /// `|f(c_x) - f(c_y)|` per grid edge.
    pub steps: Vec<f64>,
    pub continuous: bool,
    /// Edges where a Riesz jump and a lower-bound jump occur together.
    pub coincident_jumps: Vec<(usize, usize)>,
    /// Edges with a lower-bound jump but no Riesz jump, or the reverse.
    pub mismatched_jumps: Vec<(usize, usize)>,
}

fn has_negative_tail(kind: &TailKind) -> bool {
    match kind {
        TailKind::PositiveGrowth => false,
        TailKind::NegativeGrowth => true,
        TailKind::MixedSigned { pattern } => pattern.contains(&crate::opcore::Sign::Minus),
    }
}

/// Lower bounds `c_x` compared through `f`, so that `-inf` has the finite image `-1`.
pub fn lower_bound_report(family: &SampledFamily, thresholds: &Thresholds) -> Result<LowerBoundCurve> {
    let lower_bounds: Vec<f64> = family.operators().iter().map(|a| a.eig().min()).collect();
    let unbounded_below: Vec<bool> = family
        .operators()
        .iter()
        .map(|a| has_negative_tail(a.tail().kind()))
        .collect();
    let image = |i: usize| {
        if unbounded_below[i] {
            -1.0
        } else {
            bounded_scalar(lower_bounds[i])
        }
    };
    let edges = family.grid().edges();
    let steps: Vec<f64> = edges.iter().map(|&(i, j)| (image(i) - image(j)).abs()).collect();
    let continuous = steps.iter().all(|&s| s < thresholds.jump);
    let mut coincident_jumps = Vec::new();
    let mut mismatched_jumps = Vec::new();
    if family.len() >= 2 {
        let report = continuity_report(family, thresholds)?;
        for (&(i, j), &s) in edges.iter().zip(&steps) {
            let riesz_jump = report.pair(i, j).is_some_and(|p| p.riesz_jump || p.tail_mismatch);
            let bound_jump = s >= thresholds.jump;
            if riesz_jump && bound_jump {
                coincident_jumps.push((i, j));
            } else if bound_jump {
                mismatched_jumps.push((i, j));
            }
        }
    }
    Ok(LowerBoundCurve {
        label: family.label().to_string(),
        lower_bounds,
        unbounded_below,
        steps,
        continuous,
        coincident_jumps,
        mismatched_jumps,
    })
}

/// Block data of one grid edge for a certified section.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockStep {
    pub from: usize,
    pub to: usize,
    pub cutoff_step: f64,
    pub section_distance: f64,
    /// `||S+_x - S+_y||` for `S+ = 1_[r,inf)`.
    pub upper_distance: f64,
    /// `||S-_x - S-_y||` for `S- = 1_(-inf,-r]`.
    pub lower_distance: f64,
    /// `||f(A_x) S0_x - f(A_y) S0_y||` on the windows.
    pub window_distance: f64,
    pub window_ranks: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RieszCheck {
    pub holds: bool,
    /// Edges where a Riesz jump was found despite the certificate.
    pub offending_pairs: Vec<(usize, usize)>,
    pub blocks: Vec<BlockStep>,
    pub continuity: ContinuityReport,
}

/// A family with a spectral section should show no Riesz jump.
pub fn section_implies_riesz_check(
    family: &SampledFamily,
    certificate: &SectionCertificate,
    thresholds: &Thresholds,
    tol: &Tolerances,
) -> Result<RieszCheck> {
    let check = verify_certificate(family, certificate, tol)?;
    if !check.all_hold {
        return Err(Error::PreconditionFailed(format!(
            "certificate does not verify (first failure at sample {:?})",
            check.first_failure
        )));
    }
    let continuity = continuity_report(family, thresholds)?;
    let splits: Vec<SpectralSplit> = family
        .operators()
        .par_iter()
        .zip(certificate.cutoffs.par_iter())
        .map(|(a, &r)| SpectralSplit::closed(a, r, tol.gap))
        .collect();
    let images: Vec<_> = family.operators().par_iter().map(bounded_transform).collect();
    let blocks: Vec<BlockStep> = family
        .grid()
        .edges()
        .par_iter()
        .map(|&(i, j)| {
            let (si, sj) = (&splits[i], &splits[j]);
            let rank = |m: &crate::linalg::CMatrix| m.trace().re.round().max(0.0) as usize;
            BlockStep {
                from: i,
                to: j,
                cutoff_step: (certificate.cutoffs[i] - certificate.cutoffs[j]).abs(),
                section_distance: linalg::hermitian_norm(
                    &(certificate.projections[i].entries() - certificate.projections[j].entries()),
                ),
                upper_distance: linalg::hermitian_norm(&(&si.plus - &sj.plus)),
                lower_distance: linalg::hermitian_norm(&(&si.minus - &sj.minus)),
                window_distance: linalg::hermitian_norm(&linalg::hermitian_part(
                    &(&images[i] * &si.window - &images[j] * &sj.window),
                )),
                window_ranks: (rank(&si.window), rank(&sj.window)),
            }
        })
        .collect();
    let offending_pairs: Vec<(usize, usize)> = continuity
        .pairs
        .iter()
        .filter(|p| p.riesz_jump || p.tail_mismatch)
        .map(|p| (p.from, p.to))
        .collect();
    Ok(RieszCheck {
        holds: offending_pairs.is_empty(),
        offending_pairs,
        blocks,
        continuity,
    })
}

/// Tail-type obstruction to a continuous generalized section: a norm-continuous
/// projection family keeps its tail type, while `chi+(A_x)` changes it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GssObstruction {
    pub obstructed: bool,
    pub tail_types: Vec<TailType>,
    /// First grid edge whose endpoints need different tail types.
    pub clash: Option<(usize, usize)>,
    pub reason: String,
}

pub fn gss_obstruction(family: &SampledFamily) -> GssObstruction {
    let tail_types: Vec<TailType> = family.operators().iter().map(chi_plus_tail).collect();
    let clash = family
        .grid()
        .edges()
        .into_iter()
        .find(|&(i, j)| tail_types[i] != tail_types[j]);
    let reason = match clash {
        Some((i, j)) => format!(
            "samples {} and {} need projections of tail types {:?} and {:?}",
            family.grid().label(i),
            family.grid().label(j),
            tail_types[i],
            tail_types[j]
        ),
        None => "tail types agree across the grid".into(),
    };
    GssObstruction {
        obstructed: clash.is_some(),
        tail_types,
        clash,
        reason,
    }
}
