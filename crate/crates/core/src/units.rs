//! Decibel conversions, physical constants and azimuth arithmetic.

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// `10^(x/10)`.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10·log10(x)`; rejects non-positive input.
pub fn linear_to_db(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(10.0 * x.log10())
    } else {
        Err(Error::domain(format!("linear_to_db needs x > 0, got {x}")))
    }
}

/// Wavelength in meters for a frequency in GHz.
pub fn wavelength_m(freq_ghz: f64) -> f64 {
    SPEED_OF_LIGHT / (freq_ghz * 1e9)
}

/// Wrap an azimuth into `[0, 360)`.
pub fn wrap_deg(phi: f64) -> f64 {
    let w = phi.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// Shortest signed angular distance `to - from`, in `(-180, 180]`.
pub fn signed_delta_deg(to: f64, from: f64) -> f64 {
    let d = wrap_deg(to - from);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_identities() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        let x = 3.7;
        let rt = db_to_linear(linear_to_db(x).unwrap());
        assert!((rt - x).abs() / x < 1e-12);
    }

    #[test]
    fn linear_to_db_rejects_nonpositive() {
        assert!(matches!(linear_to_db(0.0), Err(Error::Domain(_))));
        assert!(linear_to_db(-1.0).is_err());
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_deg(-90.0), 270.0);
        assert_eq!(wrap_deg(720.0), 0.0);
        assert_eq!(wrap_deg(-1e-300), 0.0);
        assert_eq!(signed_delta_deg(350.0, 0.0), -10.0);
        assert_eq!(signed_delta_deg(10.0, 350.0), 20.0);
        assert_eq!(signed_delta_deg(180.0, 0.0), 180.0);
        assert_eq!(signed_delta_deg(0.0, 180.0), 180.0);
    }

    proptest::proptest! {
        #[test]
        fn db_round_trip(x in 1e-12f64..1e12) {
            let rt = db_to_linear(linear_to_db(x).unwrap());
            proptest::prop_assert!(((rt - x) / x).abs() < 1e-12);
        }

        #[test]
        fn signed_delta_range(a in -1e4f64..1e4, b in -1e4f64..1e4) {
            let d = signed_delta_deg(a, b);
            proptest::prop_assert!(d > -180.0 && d <= 180.0);
        }
    }
}
