use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::families::SampledFamily;
use crate::linalg::{self, c, CMatrix};
use crate::opcore::{ProjectionMatrix, TruncatedOperator};
use crate::sections::verify::{default_rank_budget, is_generalized_section, is_spectral_section};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructOptions {
    /// Rank budget of the generalized-section check; `None` means `N / 2`.
    pub rank_budget: Option<usize>,
    pub eps: f64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            rank_budget: None,
            eps: 1e-6,
        }
    }
}

/// Spectral sections `Q_x` with cutoffs `r_x` over a sampled family.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionCertificate {
    pub projections: Vec<ProjectionMatrix>,
    pub cutoffs: Vec<f64>,
    pub verified: bool,
    pub max_violation: f64,
    pub delta: f64,
    /// Smallest candidate cutoff with `||T_r - P|| < delta`, per sample.
    pub minimal_cutoffs: Vec<f64>,
    /// `||Q_x - P_x||` per sample.
    pub proximity: Vec<f64>,
    /// `max |r_x - r_y| / |x - y|` over adjacent finite nodes.
    pub lipschitz: f64,
    /// `||Q_x - Q_y||` per grid edge, in the order of `Grid::edges`.
    pub adjacent_distances: Vec<f64>,
}

impl SectionCertificate {
    pub fn max_proximity(&self) -> f64 {
        self.proximity.iter().fold(0.0_f64, |a, &b| a.max(b))
    }
}

/// A sample rotated into the eigenbasis of its operator.
struct Prepared {
    values: Vec<f64>,
    vectors: CMatrix,
    /// `U* P U`.
    p: CMatrix,
    threshold: f64,
    gap: f64,
}

impl Prepared {
    fn new(a: &TruncatedOperator, p: &ProjectionMatrix, tol: &Tolerances) -> Self {
        let dec = a.eig();
        let vectors = dec.eigenvectors().clone();
        let rotated = vectors.adjoint() * p.entries() * &vectors;
        Prepared {
            values: dec.eigenvalues().to_vec(),
            vectors,
            p: rotated,
            threshold: a.tail().threshold(a.dim()),
            gap: tol.gap,
        }
    }

    fn admissible(&self, r: f64) -> bool {
        r > 0.0
            && r < self.threshold
            && self
                .values
                .iter()
                .all(|v| (v - r).abs() > self.gap && (v + r).abs() > self.gap)
    }

    /// `T_r` in the eigenbasis: 1 on `lambda >= r`, `P` on the window, 0 elsewhere.
    fn t_rotated(&self, r: f64) -> CMatrix {
        let n = self.values.len();
        let window: Vec<bool> = self.values.iter().map(|v| v.abs() < r).collect();
        CMatrix::from_fn(n, n, |i, j| {
            if window[i] && window[j] {
                self.p[(i, j)]
            } else if i == j && self.values[i] >= r {
                c(1.0)
            } else {
                c(0.0)
            }
        })
    }

    /// `||T_r - P|| < delta`, with cheap Frobenius and column bounds first.
    fn within(&self, r: f64, delta: f64) -> bool {
        let diff = self.t_rotated(r) - &self.p;
        if diff.norm() < delta {
            return true;
        }
        if linalg::max_column_norm(&diff) >= delta {
            return false;
        }
        linalg::hermitian_norm(&linalg::hermitian_part(&diff)) < delta
    }

    fn candidates(&self) -> Vec<f64> {
        let mut mags: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        mags.sort_by(f64::total_cmp);
        let mut out = Vec::new();
        let mut prev = 0.0;
        for &m in &mags {
            if m - prev > 2.0 * self.gap {
                out.push(0.5 * (prev + m));
            }
            prev = prev.max(m);
        }
        if self.threshold.is_finite() && self.threshold - prev > 2.0 * self.gap {
            out.push(0.5 * (prev + self.threshold));
        }
        out.retain(|&r| self.admissible(r));
        out
    }

    fn minimal_cutoff(&self, delta: f64) -> Option<f64> {
        self.candidates().into_iter().find(|&r| self.within(r, delta))
    }
}

/// Builds a spectral section close to a family of generalized sections.
///
/// Each sample gets its smallest gap-midpoint cutoff `r_i` with
/// `||T_{r_i} - P_i|| < delta`. Hat weights over the grid (1 at the node, 1/2
/// at neighbours where `r_i` still works) average the `T_{r_i}`, the average
/// is rounded at 1/2, and the cutoff is the hat-weighted sum of the largest
/// `r_k` active on overlapping supports.
pub fn construct_section(
    family: &SampledFamily,
    gss: &[ProjectionMatrix],
    delta: f64,
    opts: &ConstructOptions,
    tol: &Tolerances,
) -> Result<SectionCertificate> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidDelta(delta));
    }
    let n = family.len();
    if gss.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} projections for {n} samples",
            gss.len()
        )));
    }
    let grid = family.grid();

    // per-sample phase
    let prepared: Vec<Result<(Prepared, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = family.operator(i);
            let p = &gss[i];
            if p.dim() != a.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "sample {i}: projection of dimension {} for operator of dimension {}",
                    p.dim(),
                    a.dim()
                )));
            }
            let budget = opts.rank_budget.unwrap_or_else(|| default_rank_budget(a.dim()));
            let check = is_generalized_section(a, p, budget, opts.eps, tol)?;
            if !check.holds {
                return Err(Error::GssRejected {
                    sample: i,
                    reason: if check.tail_consistent {
                        format!("singular value {:.3e} beyond rank {budget}", check.residual)
                    } else {
                        "tail type differs from chi+(A)".into()
                    },
                });
            }
            let prep = Prepared::new(a, p, tol);
            let r = prep.minimal_cutoff(delta).ok_or(Error::GssTooFar {
                sample: i,
                r_max: prep.threshold,
            })?;
            Ok((prep, r))
        })
        .collect();
    let mut samples = Vec::with_capacity(n);
    let mut minimal = Vec::with_capacity(n);
    for item in prepared {
        let (prep, r) = item?;
        samples.push(prep);
        minimal.push(r);
    }

    if let Some(marker) = grid.marker() {
        check_marker(&minimal, marker)?;
    }

    // stitching phase: active cutoffs and hat weights per node
    let neighbors: Vec<Vec<usize>> = (0..n).map(|j| grid.neighbors(j)).collect();
    let weights: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut w = vec![(j, 1.0)];
            for &i in &neighbors[j] {
                let r = minimal[i];
                if samples[j].admissible(r) && samples[j].within(r, delta) {
                    w.push((i, 0.5));
                }
            }
            let total: f64 = w.iter().map(|(_, x)| x).sum();
            w.into_iter().map(|(i, x)| (i, x / total)).collect()
        })
        .collect();

    // supp u_i = nodes where i is active
    let mut support: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, w) in weights.iter().enumerate() {
        for &(i, _) in w {
            support[i].push(j);
        }
    }
    let big_r: Vec<f64> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&k| support[k].iter().any(|x| support[j].contains(x)))
                .map(|k| minimal[k])
                .fold(0.0_f64, f64::max)
        })
        .collect();

    let built: Vec<Result<(ProjectionMatrix, f64)>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let s = &samples[j];
            let mut t = CMatrix::zeros(s.values.len(), s.values.len());
            for &(i, w) in &weights[j] {
                t += s.t_rotated(minimal[i]) * c(w);
            }
            let (q_rot, gap) = crate::sections::average::round_half(&linalg::hermitian_part(&t));
            if gap <= 1e-12 {
                return Err(Error::InvariantViolation(format!(
                    "sample {j}: averaged operator has spectrum at 1/2"
                )));
            }
            let q = &s.vectors * q_rot * s.vectors.adjoint();
            let q = ProjectionMatrix::with_tolerance(
                linalg::hermitian_part(&q),
                gss[j].tail_type(),
                tol.idempotency,
            )?;
            let mut r: f64 = weights[j].iter().map(|&(i, w)| w * big_r[i]).sum();
            let active_max = weights[j]
                .iter()
                .map(|&(i, _)| minimal[i])
                .fold(0.0_f64, f64::max);
            r = r.max(active_max);
            let mut bump = 0;
            while !s.admissible(r) && bump < 8 {
                r += 4.0 * s.gap * (1.0 + r);
                bump += 1;
            }
            if r >= s.threshold {
                return Err(Error::CutoffBeyondTail {
                    cutoff: r,
                    threshold: s.threshold,
                });
            }
            Ok((q, r))
        })
        .collect();
    let mut projections = Vec::with_capacity(n);
    let mut cutoffs = Vec::with_capacity(n);
    for item in built {
        let (q, r) = item?;
        projections.push(q);
        cutoffs.push(r);
    }

    let mut cert = SectionCertificate {
        projections,
        cutoffs,
        verified: false,
        max_violation: 0.0,
        delta,
        minimal_cutoffs: minimal,
        proximity: Vec::new(),
        lipschitz: 0.0,
        adjacent_distances: Vec::new(),
    };
    let summary = verify_certificate(family, &cert, tol)?;
    if !summary.all_hold {
        return Err(Error::InvariantViolation(format!(
            "constructed section fails verification at sample {:?} (violation {:.3e})",
            summary.first_failure, summary.max_violation
        )));
    }
    cert.verified = true;
    cert.max_violation = summary.max_violation;
    cert.lipschitz = summary.lipschitz;
    cert.adjacent_distances = summary.adjacent_distances;
    cert.proximity = cert
        .projections
        .iter()
        .zip(gss)
        .map(|(q, p)| q.distance(p))
        .collect::<Result<Vec<f64>>>()?;
    Ok(cert)
}

fn check_marker(minimal: &[f64], marker: usize) -> Result<()> {
    let finite: Vec<f64> = minimal
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != marker)
        .map(|(_, &r)| r)
        .collect();
    if finite.len() < 2 {
        return Ok(());
    }
    let tail = &finite[finite.len() / 2..];
    let increasing = tail.len() >= 2 && tail.windows(2).all(|w| w[1] > w[0]);
    let last = *finite.last().expect("nonempty");
    if increasing && last > minimal[marker] {
        return Err(Error::CutoffUnboundedAtInfinity {
            last_cutoff: last,
            marker_cutoff: minimal[marker],
        });
    }
    Ok(())
}

/// Samplewise re-verification of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub all_hold: bool,
    pub first_failure: Option<usize>,
    pub max_violation: f64,
    pub lipschitz: f64,
    pub adjacent_distances: Vec<f64>,
}

pub fn verify_certificate(
    family: &SampledFamily,
    cert: &SectionCertificate,
    tol: &Tolerances,
) -> Result<CertificateCheck> {
    let n = family.len();
    if cert.projections.len() != n || cert.cutoffs.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "certificate covers {} samples, family has {n}",
            cert.projections.len()
        )));
    }
    let checks: Vec<Result<(bool, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let c = is_spectral_section(family.operator(i), &cert.projections[i], cert.cutoffs[i], tol)?;
            Ok((c.holds, c.violation()))
        })
        .collect();
    let mut first_failure = None;
    let mut max_violation = 0.0_f64;
    for (i, item) in checks.into_iter().enumerate() {
        let (holds, v) = item?;
        max_violation = max_violation.max(v);
        if !holds && first_failure.is_none() {
            first_failure = Some(i);
        }
    }
    let grid = family.grid();
    let mut lipschitz = 0.0_f64;
    let mut adjacent_distances = Vec::new();
    for (i, j) in grid.edges() {
        if let Some(step) = grid.step(i, j) {
            if step > 0.0 {
                lipschitz = lipschitz.max((cert.cutoffs[i] - cert.cutoffs[j]).abs() / step);
            }
        }
        adjacent_distances.push(cert.projections[i].distance(&cert.projections[j])?);
    }
    Ok(CertificateCheck {
        all_hold: first_failure.is_none(),
        first_failure,
        max_violation,
        lipschitz,
        adjacent_distances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Grid;
    use crate::opcore::{positive_projection, TailDescriptor, TailType};

    fn constant_family(n: usize) -> SampledFamily {
        let a = TruncatedOperator::from_real_diagonal(&[-2.0, 1.0, 3.0], TailDescriptor::positive())
            .unwrap();
        SampledFamily::new(
            Grid::linspace(0.0, 1.0, n).unwrap(),
            vec![a; n],
            TailDescriptor::positive(),
            "constant",
        )
        .unwrap()
    }

    #[test]
    fn constant_family_is_a_fixed_point() {
        let fam = constant_family(5);
        let p = ProjectionMatrix::from_real_diagonal(&[0.0, 1.0, 1.0], TailType::Identity).unwrap();
        let cert = construct_section(&fam, &vec![p.clone(); 5], 0.1, &Default::default(), &Tolerances::default())
            .unwrap();
        assert!(cert.verified);
        for (q, &r) in cert.projections.iter().zip(&cert.cutoffs) {
            assert!(q.distance(&p).unwrap() < 1e-12);
            assert!(r >= 0.5);
        }
        assert_eq!(cert.lipschitz, 0.0);
    }

    #[test]
    fn shift_family_keeps_the_positive_projection() {
        let a = TruncatedOperator::from_real_diagonal(&[-3.0, -0.05, 0.05, 2.5, 4.0], TailDescriptor::positive())
            .unwrap();
        let grid = Grid::linspace(-1.0, 1.0, 21).unwrap();
        let ops: Vec<_> = (0..21).map(|k| a.shifted(grid.point(k).unwrap())).collect();
        let fam = SampledFamily::new(grid, ops, TailDescriptor::positive(), "shift").unwrap();
        let tol = Tolerances::default();
        let chi = positive_projection(&a, &tol).unwrap();
        let cert = construct_section(&fam, &vec![chi.clone(); 21], 0.1, &Default::default(), &tol).unwrap();
        for (k, (q, &r)) in cert.projections.iter().zip(&cert.cutoffs).enumerate() {
            assert!(q.distance(&chi).unwrap() < 1e-12);
            let x = fam.grid().point(k).unwrap();
            // the eigenvalue pair +-0.05 forces r > |x| - 0.05
            assert!(r > x.abs() - 0.05, "r = {r} at x = {x}");
        }
    }

    #[test]
    fn delta_out_of_range() {
        let fam = constant_family(2);
        let p = ProjectionMatrix::from_real_diagonal(&[0.0, 1.0, 1.0], TailType::Identity).unwrap();
        let err = construct_section(&fam, &vec![p; 2], 0.5, &Default::default(), &Tolerances::default())
            .unwrap_err();
        assert_eq!(err.reason(), "invalid_delta");
    }

    #[test]
    fn far_projection_is_rejected() {
        let fam = constant_family(2);
        let p = ProjectionMatrix::from_real_diagonal(&[0.0, 1.0, 1.0], TailType::Zero).unwrap();
        let err = construct_section(&fam, &vec![p; 2], 0.1, &Default::default(), &Tolerances::default())
            .unwrap_err();
        assert_eq!(err.reason(), "gss_rejected");
    }
}
