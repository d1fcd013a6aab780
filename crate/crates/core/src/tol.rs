//! Shared numerical thresholds.
//!
//! Rank and spectral-split decisions in the structure recovery code use a
//! nominal relative cutoff with an explicit undetermined band around it.
//! A value falling inside the band is reported as an error instead of being
//! silently classified.

use crate::error::{Error, Result};

/// Nominal relative rank cutoff.
pub const RANK_REL: f64 = 1e-9;
/// Lower edge of the undetermined band.
pub const BAND_LO: f64 = 1e-11;
/// Upper edge of the undetermined band.
pub const BAND_HI: f64 = 1e-7;
/// Residual threshold for word closures and span membership.
pub const SPAN_REL: f64 = 1e-9;
/// Eigenvalue clustering / distinctness threshold (absolute).
pub const CLUSTER: f64 = 1e-8;
/// Pseudo-inverse cutoff relative to the largest singular value.
pub const PINV_REL: f64 = 1e-11;
/// Tolerance used when validating unitaries, projections and automorphism laws.
pub const LAW: f64 = 1e-10;

/// Outcome of a thresholded rank decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankCall {
    Zero,
    NonZero,
}

/// Classify a relative magnitude, refusing to decide inside the band.
pub fn classify_strict(rel: f64) -> Result<RankCall> {
    if rel <= BAND_LO {
        Ok(RankCall::Zero)
    } else if rel >= BAND_HI {
        Ok(RankCall::NonZero)
    } else {
        Err(Error::RankDeficiencyUndetermined {
            value: rel,
            lo: BAND_LO,
            hi: BAND_HI,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_edges() {
        assert_eq!(classify_strict(0.0).unwrap(), RankCall::Zero);
        assert_eq!(classify_strict(1e-12).unwrap(), RankCall::Zero);
        assert_eq!(classify_strict(1e-3).unwrap(), RankCall::NonZero);
        assert!(matches!(
            classify_strict(1e-9),
            Err(Error::RankDeficiencyUndetermined { .. })
        ));
    }
}
