use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use spectra_sect::families::SampledFamily;
use spectra_sect::io::{self, CertificateJson, FamilyJson, GradingJson, OperatorJson, ProjectionJson, SymbolJson};
use spectra_sect::opcore::{ProjectionMatrix, TruncatedOperator};
use spectra_sect::graded::{Grading, SymbolSample};
use spectra_sect::sections::SectionCertificate;
use spectra_sect::{Error, Result};

#[derive(Deserialize)]
struct Envelope<T> {
    report: T,
}

/// Reads `T` from a file, either bare or as the `report` of a previous run.
pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    match io::parse::<T>(&text) {
        Ok(v) => Ok(v),
        Err(first) => match io::parse::<Envelope<T>>(&text) {
            Ok(env) => Ok(env.report),
            Err(_) => Err(Error::Parse(format!(
                "{}: {}",
                path.display(),
                crate::config::strip_prefix(&first)
            ))),
        },
    }
}

pub fn family(path: &Path) -> Result<SampledFamily> {
    read::<FamilyJson>(path)?.to_family()
}

pub fn certificate(path: &Path) -> Result<SectionCertificate> {
    read::<CertificateJson>(path)?.to_certificate()
}

pub fn operator(path: &Path) -> Result<TruncatedOperator> {
    read::<OperatorJson>(path)?.to_operator()
}

pub fn projection(path: &Path) -> Result<ProjectionMatrix> {
    read::<ProjectionJson>(path)?.to_projection()
}

pub fn projections(path: &Path) -> Result<Vec<ProjectionMatrix>> {
    read::<Vec<ProjectionJson>>(path)?
        .iter()
        .map(ProjectionJson::to_projection)
        .collect()
}

pub fn grading(path: &Path) -> Result<Grading> {
    read::<GradingJson>(path)?.to_grading()
}

pub fn symbol(path: &Path) -> Result<SymbolSample> {
    read::<SymbolJson>(path)?.to_sample()
}
