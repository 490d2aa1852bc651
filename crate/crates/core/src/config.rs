use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every operation.
///
/// Relative thresholds (`invertibility`, `kernel`, `oddness`) are scaled by
/// `1 + ||A||` of the operator under test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub idempotency: f64,
    /// Minimal distance between an eigenvalue and a finite interval endpoint.
    pub gap: f64,
    pub invertibility: f64,
    /// Range inclusions `||(1 - P) S||`, `||P S||` and similar.
    pub inclusion: f64,
    pub unitarity: f64,
    /// Spectral radius margin below 1 for the inverse bounded transform.
    pub bounded_margin: f64,
    pub kernel: f64,
    pub oddness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-10,
            idempotency: 1e-8,
            gap: 1e-9,
            invertibility: 1e-9,
            inclusion: 1e-8,
            unitarity: 1e-10,
            bounded_margin: 1e-12,
            kernel: 1e-9,
            oddness: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            ("hermiticity", self.hermiticity),
            ("idempotency", self.idempotency),
            ("gap", self.gap),
            ("invertibility", self.invertibility),
            ("inclusion", self.inclusion),
            ("unitarity", self.unitarity),
            ("bounded_margin", self.bounded_margin),
            ("kernel", self.kernel),
            ("oddness", self.oddness),
        ];
        for (name, value) in all {
            if !(value > 0.0 && value.is_finite()) {
                return Err(crate::Error::InvalidInput(format!(
                    "tolerance `{name}` must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// Thresholds used by continuity diagnostics on sampled families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// A per-pair increment at or above this value counts as a jump.
    pub jump: f64,
    /// A per-pair increment at or below this value counts as continuous.
    pub continuity: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            jump: 0.5,
            continuity: 0.05,
        }
    }
}
