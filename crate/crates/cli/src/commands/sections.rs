use std::path::Path;

use serde::Serialize;
use spectra_sect::io::{CertificateJson, MatrixJson, TrivializerJson};
use spectra_sect::sections::{
    construct_section, deform_to_invertible, trivialize_family, verify_certificate, ConstructOptions,
    CutoffProfile,
};
use spectra_sect::Error;

use super::default_gss;
use crate::config::RunConfig;
use crate::input;
use crate::output::{Failure, Outcome};

pub fn verify(cfg: &RunConfig, family: &Path, certificate: &Path) -> Result<Outcome, Failure> {
    let fam = input::family(family)?;
    let cert = input::certificate(certificate)?;
    let check = verify_certificate(&fam, &cert, &cfg.tolerances)?;
    let reason = (!check.all_hold).then_some("section_violated");
    Ok(Outcome::checked(reason, check))
}

pub fn construct(
    cfg: &RunConfig,
    family: &Path,
    gss: Option<&Path>,
    delta: f64,
    eps: f64,
) -> Result<Outcome, Failure> {
    let fam = input::family(family)?;
    let gss = match gss {
        Some(path) => input::projections(path)?,
        None => default_gss(&fam, &cfg.tolerances),
    };
    let opts = ConstructOptions {
        rank_budget: cfg.rank_budget,
        eps,
    };
    let cert = construct_section(&fam, &gss, delta, &opts, &cfg.tolerances)?;
    let reason = (!cert.verified).then_some("section_violated");
    Ok(Outcome::checked(reason, CertificateJson::from_certificate(&cert)))
}

pub fn trivialize(
    cfg: &RunConfig,
    family: &Path,
    certificate: &Path,
    profile: CutoffProfile,
) -> Result<Outcome, Failure> {
    let fam = input::family(family)?;
    let cert = input::certificate(certificate)?;
    let record = trivialize_family(fam.operators(), &cert.projections, &cert.cutoffs, profile, &cfg.tolerances)?;
    let reason = (!record.all_hold()).then_some("trivializer_check_failed");
    Ok(Outcome::checked(reason, TrivializerJson::from_record(&record)))
}

#[derive(Serialize)]
struct DeformReport {
    times: Vec<f64>,
    max_radius: f64,
    radii: Vec<Vec<f64>>,
    endpoint_margins: Vec<f64>,
    endpoint_invertible: Vec<bool>,
    endpoint: Vec<MatrixJson>,
}

pub fn deform(cfg: &RunConfig, family: &Path, gss: Option<&Path>, steps: usize) -> Result<Outcome, Failure> {
    let fam = input::family(family)?;
    let gss = match gss {
        Some(path) => input::projections(path)?,
        None => default_gss(&fam, &cfg.tolerances),
    };
    if gss.len() != fam.len() {
        return Err(Error::DimensionMismatch(format!("{} sections for {} samples", gss.len(), fam.len())).into());
    }
    let table = deform_to_invertible(&fam, &gss, steps, &cfg.tolerances)?;
    let endpoint_invertible: Vec<bool> = table
        .endpoint()
        .iter()
        .map(|a| a.is_invertible(&cfg.tolerances))
        .collect();
    let max_radius = table.max_radius();
    let reason = if endpoint_invertible.iter().any(|ok| !ok) {
        Some("endpoint_singular")
    } else if max_radius >= 1.0 {
        Some("outside_bounded_image")
    } else {
        None
    };
    let report = DeformReport {
        endpoint: table.endpoint().iter().map(|a| MatrixJson::from_matrix(a.entries())).collect(),
        times: table.times,
        max_radius,
        radii: table.radii,
        endpoint_margins: table.endpoint_margins,
        endpoint_invertible,
    };
    Ok(Outcome::checked(reason, report))
}
