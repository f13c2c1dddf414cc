use serde::{Deserialize, Serialize};

/// Entries within this distance outside `[0, 1]` are clamped on ingestion.
pub const INGEST_CLAMP: f64 = 1e-12;

/// Numerical tolerances shared by validation and certification.
///
/// Every report echoes the values it was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed deviation of `Σ_{a,b} p(ab|xy)` from 1.
    pub norm: f64,
    /// Allowed spread of a marginal across the other party's settings.
    pub no_signaling: f64,
    /// A purity bound at or below this is treated as zero.
    pub zero: f64,
    /// Slack subtracted before taking the ceiling of `1 / purity_bound`.
    pub ceil: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-9,
            no_signaling: 1e-9,
            zero: 1e-12,
            ceil: 1e-9,
        }
    }
}

/// Joint probabilities at or below this are skipped by the smallest-coefficient bound.
pub const DEFAULT_EPSILON_P: f64 = 1e-12;
