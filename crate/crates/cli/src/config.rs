use std::path::Path;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use spectra_sect::{Error, Result, Thresholds, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    /// `None` means half the dimension.
    pub rank_budget: Option<usize>,
    pub thresholds: Thresholds,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerances: Tolerances::default(),
            rank_budget: None,
            thresholds: Thresholds::default(),
            seed: 0,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        spectra_sect::io::parse(&text)
            .map_err(|e| Error::Parse(format!("{}: {}", path.display(), strip_prefix(&e))))
    }

    /// Flags that are present replace the corresponding file values.
    pub fn apply(&mut self, flags: &ConfigFlags) {
        let t = &mut self.tolerances;
        if let Some(v) = flags.hermiticity {
            t.hermiticity = v;
        }
        if let Some(v) = flags.idempotency {
            t.idempotency = v;
        }
        if let Some(v) = flags.gap {
            t.gap = v;
        }
        if let Some(v) = flags.invertibility {
            t.invertibility = v;
        }
        if let Some(v) = flags.rank_budget {
            self.rank_budget = Some(v);
        }
        if let Some(v) = flags.jump {
            self.thresholds.jump = v;
        }
        if let Some(v) = flags.continuity {
            self.thresholds.continuity = v;
        }
        if let Some(v) = flags.seed {
            self.seed = v;
        }
        if let Some(v) = flags.format {
            self.format = v;
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        for (name, v) in [("jump", self.thresholds.jump), ("continuity", self.thresholds.continuity)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("threshold `{name}` must be positive, got {v}")));
            }
        }
        if self.rank_budget == Some(0) {
            return Err(Error::InvalidInput("rank budget must be at least 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Parse(m) => m.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConfigFlags {
    #[arg(long, global = true, value_name = "TOL", allow_negative_numbers = true)]
    pub hermiticity: Option<f64>,
    #[arg(long, global = true, value_name = "TOL", allow_negative_numbers = true)]
    pub idempotency: Option<f64>,
    #[arg(long, global = true, value_name = "TOL", allow_negative_numbers = true)]
    pub gap: Option<f64>,
    #[arg(long, global = true, value_name = "TOL", allow_negative_numbers = true)]
    pub invertibility: Option<f64>,
    #[arg(long, global = true, value_name = "N")]
    pub rank_budget: Option<usize>,
    /// Jump threshold of the continuity diagnostics.
    #[arg(long, global = true, value_name = "T", allow_negative_numbers = true)]
    pub jump: Option<f64>,
    /// Continuity threshold of the continuity diagnostics.
    #[arg(long, global = true, value_name = "T", allow_negative_numbers = true)]
    pub continuity: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let mut cfg: RunConfig =
            spectra_sect::io::parse(r#"{"seed": 3, "tolerances": {"gap": 1e-6}, "format": "csv"}"#).unwrap();
        assert_eq!(cfg.tolerances.gap, 1e-6);
        assert_eq!(cfg.tolerances.hermiticity, Tolerances::default().hermiticity);
        cfg.apply(&ConfigFlags {
            seed: Some(9),
            gap: Some(1e-7),
            ..Default::default()
        });
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.tolerances.gap, 1e-7);
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn rejects_bad_values() {
        let mut cfg = RunConfig::default();
        cfg.tolerances.gap = 0.0;
        assert_eq!(cfg.validate().unwrap_err().reason(), "invalid_input");
        let err = spectra_sect::io::parse::<RunConfig>(r#"{"sed": 1}"#).unwrap_err();
        assert_eq!(err.reason(), "parse_error");
    }
}
