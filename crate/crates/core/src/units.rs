//! Analysis frequency and decibel conventions.
//!
//! Squeezing is reported in dB with positive values below the shot-noise
//! limit: `V = 10^(-dB/10)`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Sideband angular frequency Ω in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AnalysisFrequency {
    omega: f64,
}

impl AnalysisFrequency {
    pub fn from_angular(omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::param(
                "analysis.omega",
                format!("must be finite and >= 0, got {omega}"),
            ));
        }
        Ok(Self { omega })
    }

    pub fn from_hz(hz: f64) -> Result<Self> {
        Self::from_angular(2.0 * PI * hz)
            .map_err(|_| Error::param("analysis.frequency_hz", format!("must be >= 0, got {hz}")))
    }

    /// Zero sideband frequency (the carrier).
    pub const fn dc() -> Self {
        Self { omega: 0.0 }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hz(&self) -> f64 {
        self.omega / (2.0 * PI)
    }
}

impl fmt::Display for AnalysisFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} Hz", self.hz())
    }
}

/// Squeezing in decibels, positive below the SNL.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SqueezingDb(pub f64);

impl SqueezingDb {
    pub fn new(db: f64) -> Result<Self> {
        if db.is_finite() {
            Ok(Self(db))
        } else {
            Err(Error::Domain(format!("squeezing must be finite, got {db}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn to_variance(self) -> f64 {
        db_to_variance(self)
    }
}

impl fmt::Display for SqueezingDb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3} dB", self.0)
    }
}

/// Linear variance in shot-noise units for a squeezing level.
pub fn db_to_variance(db: SqueezingDb) -> f64 {
    10f64.powf(-db.0 / 10.0)
}

/// Squeezing level of a linear variance. Errors on `v <= 0`.
pub fn variance_to_db(v: f64) -> Result<SqueezingDb> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Domain(format!(
            "variance must be finite and > 0, got {v}"
        )));
    }
    Ok(SqueezingDb(-10.0 * v.log10()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn db_examples() {
        assert_eq!(db_to_variance(SqueezingDb(0.0)), 1.0);
        assert_abs_diff_eq!(db_to_variance(SqueezingDb(3.0103)), 0.5, epsilon = 1e-4);
        assert_abs_diff_eq!(db_to_variance(SqueezingDb(2.7)), 0.5370, epsilon = 1e-4);
    }

    #[test]
    fn variance_examples() {
        assert_eq!(variance_to_db(1.0).unwrap().0, 0.0);
        assert_abs_diff_eq!(variance_to_db(0.5370).unwrap().0, 2.700, epsilon = 1e-3);
        assert!(matches!(variance_to_db(0.0), Err(Error::Domain(_))));
        assert!(variance_to_db(-1.0).is_err());
        assert!(variance_to_db(f64::NAN).is_err());
    }

    #[test]
    fn frequency_units() {
        let f = AnalysisFrequency::from_hz(2e6).unwrap();
        assert_abs_diff_eq!(f.omega(), 2.0 * PI * 2e6, epsilon = 1e-6);
        assert_abs_diff_eq!(f.hz(), 2e6, epsilon = 1e-6);
        assert!(AnalysisFrequency::from_angular(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn db_round_trip(db in -30.0f64..30.0) {
            let back = variance_to_db(db_to_variance(SqueezingDb(db))).unwrap().0;
            prop_assert!((back - db).abs() < 1e-12);
        }
    }
}
