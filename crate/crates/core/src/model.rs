//! The unified three-component RCS model `σ(f, φ) = A(f) · B1(φ) · B2`.
//!
//! * `A(f)` is a linear law in dBsm over frequency (GHz): the angular mean
//!   scattering power.
//! * `B1(φ)` is a piecewise quadratic beam pattern in dB: each peak owns a
//!   half-open azimuth sector, and the pattern is clipped from below at
//!   `-Y_max`.
//! * `B2` is a random per-instance fluctuation, dimensionless (relative dB).
//!
//! All types here are immutable values; sampling takes a caller-owned RNG.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal, Weibull};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Gamma as GammaCdf, Normal, Weibull as WeibullCdf};

use crate::error::{Error, Result};
use crate::units::{db_to_linear, linear_to_db, signed_delta_deg, wrap_deg};

/// Azimuth convention used by every builtin model.
pub const HEADING_CONVENTION: &str =
    "phi = 0 deg points at the target nose/front; azimuth grows counter-clockwise seen from above; elevation fixed at 90 deg";

/// Frequency range (GHz) over which the builtin A-laws were fitted.
pub const BUILTIN_VALID_RANGE_GHZ: (f64, f64) = (10.0, 36.0);

/// Linear law `A_dB(f) = slope·f + intercept`, f in GHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLaw")]
pub struct LargeScaleLaw {
    pub slope: f64,
    pub intercept: f64,
    pub f_min: f64,
    pub f_max: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLaw {
    slope: f64,
    intercept: f64,
    f_min: f64,
    f_max: f64,
}

impl TryFrom<RawLaw> for LargeScaleLaw {
    type Error = Error;
    fn try_from(r: RawLaw) -> Result<Self> {
        LargeScaleLaw::new(r.slope, r.intercept, r.f_min, r.f_max)
    }
}

/// Result of evaluating the large-scale law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AEval {
    pub dbsm: f64,
    /// Set when the frequency lies outside the fitted range.
    pub extrapolated: bool,
}

impl LargeScaleLaw {
    pub fn new(slope: f64, intercept: f64, f_min: f64, f_max: f64) -> Result<Self> {
        if !(slope.is_finite() && intercept.is_finite()) {
            return Err(Error::domain("A-law coefficients must be finite"));
        }
        if !(f_min < f_max) {
            return Err(Error::domain(format!("A-law valid range is empty: [{f_min}, {f_max}]")));
        }
        Ok(Self {
            slope,
            intercept,
            f_min,
            f_max,
        })
    }

    pub fn eval(&self, f_ghz: f64) -> Result<AEval> {
        if !(f_ghz > 0.0) || !f_ghz.is_finite() {
            return Err(Error::domain(format!("frequency must be > 0 GHz, got {f_ghz}")));
        }
        Ok(AEval {
            dbsm: self.slope * f_ghz + self.intercept,
            extrapolated: f_ghz < self.f_min || f_ghz > self.f_max,
        })
    }
}

/// Half-open azimuth interval `[lo, hi)` in degrees. `lo > hi` wraps through
/// 0°, and `lo == hi` denotes the whole circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Sector {
    pub lo: f64,
    pub hi: f64,
}

impl From<[f64; 2]> for Sector {
    fn from(v: [f64; 2]) -> Self {
        Sector { lo: v[0], hi: v[1] }
    }
}

impl From<Sector> for [f64; 2] {
    fn from(s: Sector) -> Self {
        [s.lo, s.hi]
    }
}

impl Sector {
    pub fn new(lo: f64, hi: f64) -> Self {
        Sector {
            lo: wrap_deg(lo),
            hi: wrap_deg(hi),
        }
    }

    pub fn width(&self) -> f64 {
        if self.hi > self.lo {
            self.hi - self.lo
        } else {
            self.hi + 360.0 - self.lo
        }
    }

    /// `phi` must already be wrapped into `[0, 360)`.
    pub fn contains(&self, phi: f64) -> bool {
        if self.lo < self.hi {
            phi >= self.lo && phi < self.hi
        } else {
            phi >= self.lo || phi < self.hi
        }
    }
}

/// One quadratic lobe of the beam pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamPeak {
    pub center_deg: f64,
    pub halfwidth_3db_deg: f64,
    /// Offset `c_k` in dB; the lobe maximum is `-c_k`.
    pub offset_db: f64,
    pub sector: Sector,
}

impl BeamPeak {
    /// Sectors of width 90° centered on the peak.
    pub fn centered(center_deg: f64, halfwidth_3db_deg: f64, offset_db: f64) -> Self {
        BeamPeak {
            center_deg,
            halfwidth_3db_deg,
            offset_db,
            sector: Sector::new(center_deg - 45.0, center_deg + 45.0),
        }
    }

    /// The un-clipped quadratic term `12·(Δ/φ3dB)² + c_k`.
    pub fn lobe_loss_db(&self, phi: f64) -> f64 {
        let delta = signed_delta_deg(phi, self.center_deg);
        12.0 * (delta / self.halfwidth_3db_deg).powi(2) + self.offset_db
    }
}

/// Piecewise azimuth pattern `B1(φ)` in dB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern")]
pub struct BeamPattern {
    pub isotropic: bool,
    pub y_max: f64,
    pub peaks: Vec<BeamPeak>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPattern {
    isotropic: bool,
    y_max: f64,
    peaks: Vec<BeamPeak>,
}

impl TryFrom<RawPattern> for BeamPattern {
    type Error = Error;
    fn try_from(r: RawPattern) -> Result<Self> {
        if r.isotropic != r.peaks.is_empty() {
            return Err(Error::domain(
                "isotropic must be true exactly when the peak list is empty",
            ));
        }
        if r.isotropic {
            Ok(BeamPattern::isotropic())
        } else {
            BeamPattern::new(r.peaks, r.y_max)
        }
    }
}

impl BeamPattern {
    /// `B1 ≡ 0 dB`.
    pub fn isotropic() -> Self {
        BeamPattern {
            isotropic: true,
            y_max: 0.0,
            peaks: Vec::new(),
        }
    }

    /// Validates `φ3dB > 0`, `Y_max ≥ 0` and that the sectors tile the circle.
    pub fn new(peaks: Vec<BeamPeak>, y_max: f64) -> Result<Self> {
        if peaks.is_empty() {
            return Err(Error::domain("a non-isotropic pattern needs at least one peak"));
        }
        if !(y_max >= 0.0) || !y_max.is_finite() {
            return Err(Error::domain(format!("Y_max must be finite and >= 0, got {y_max}")));
        }
        for p in &peaks {
            if !(p.halfwidth_3db_deg > 0.0) || !p.halfwidth_3db_deg.is_finite() {
                return Err(Error::domain(format!(
                    "3 dB beamwidth must be > 0, got {} at {}°",
                    p.halfwidth_3db_deg, p.center_deg
                )));
            }
            if !p.offset_db.is_finite() || !p.center_deg.is_finite() {
                return Err(Error::domain("peak parameters must be finite"));
            }
        }
        check_partition(&peaks)?;
        Ok(BeamPattern {
            isotropic: false,
            y_max,
            peaks,
        })
    }

    /// Peak whose sector owns `phi` (any real, wrapped internally).
    pub fn peak_for(&self, phi: f64) -> Option<&BeamPeak> {
        let w = wrap_deg(phi);
        self.peaks.iter().find(|p| p.sector.contains(w))
    }

    /// `10·log10 B1(φ) = -min{12(Δ/φ3dB)² + c_k, Y_max}`.
    pub fn eval_db(&self, phi: f64) -> f64 {
        if self.isotropic {
            return 0.0;
        }
        match self.peak_for(phi) {
            Some(p) => -(p.lobe_loss_db(wrap_deg(phi)).min(self.y_max)),
            None => unreachable!("sectors partition the circle"),
        }
    }

    pub fn eval_linear(&self, phi: f64) -> f64 {
        db_to_linear(self.eval_db(phi))
    }

    /// Largest value the pattern can reach, `max_k(-c_k)` (0 dB if isotropic).
    pub fn ceiling_db(&self) -> f64 {
        if self.isotropic {
            0.0
        } else {
            self.peaks
                .iter()
                .map(|p| -p.offset_db)
                .fold(f64::NEG_INFINITY, f64::max)
        }
    }
}

fn check_partition(peaks: &[BeamPeak]) -> Result<()> {
    let mut sectors: Vec<Sector> = peaks.iter().map(|p| p.sector).collect();
    for s in &sectors {
        if !(0.0..360.0).contains(&s.lo) || !(0.0..360.0).contains(&s.hi) {
            return Err(Error::domain(format!(
                "sector bounds must lie in [0, 360): [{}, {})",
                s.lo, s.hi
            )));
        }
    }
    if sectors.len() == 1 {
        return if sectors[0].lo == sectors[0].hi {
            Ok(())
        } else {
            Err(Error::domain("a single sector must cover the full circle"))
        };
    }
    sectors.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    for i in 0..sectors.len() {
        let cur = sectors[i];
        let next = sectors[(i + 1) % sectors.len()];
        if cur.lo == cur.hi {
            return Err(Error::domain("full-circle sector mixed with other sectors"));
        }
        if (cur.hi - next.lo).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "sectors do not tile the circle: [{}, {}) is followed by [{}, {})",
                cur.lo, cur.hi, next.lo, next.hi
            )));
        }
    }
    let total: f64 = sectors.iter().map(Sector::width).sum();
    if (total - 360.0).abs() > 1e-9 {
        return Err(Error::domain(format!("sectors cover {total}° instead of 360°")));
    }
    Ok(())
}

/// Distribution family tag for `B2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lognormal,
    Weibull,
    Gamma,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Lognormal, Family::Weibull, Family::Gamma];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Lognormal => "lognormal",
            Family::Weibull => "weibull",
            Family::Gamma => "gamma",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lognormal" | "log-normal" => Ok(Family::Lognormal),
            "weibull" => Ok(Family::Weibull),
            "gamma" => Ok(Family::Gamma),
            other => Err(Error::Config(format!("unsupported B2 family `{other}`"))),
        }
    }
}

/// Random fluctuation law for `B2`.
///
/// The lognormal law is parameterized in dB (`X_dB ~ N(mu, sigma²)`); Weibull
/// and gamma act on the linear value directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum FluctuationLaw {
    Lognormal { mu_db: f64, sigma_db: f64 },
    Weibull { shape: f64, scale: f64 },
    Gamma { shape: f64, scale: f64 },
}

impl FluctuationLaw {
    pub fn lognormal(mu_db: f64, sigma_db: f64) -> Result<Self> {
        if !mu_db.is_finite() || !(sigma_db >= 0.0) || !sigma_db.is_finite() {
            return Err(Error::domain(format!(
                "lognormal law needs finite mu and sigma >= 0, got ({mu_db}, {sigma_db})"
            )));
        }
        Ok(FluctuationLaw::Lognormal { mu_db, sigma_db })
    }

    pub fn family(&self) -> Family {
        match self {
            FluctuationLaw::Lognormal { .. } => Family::Lognormal,
            FluctuationLaw::Weibull { .. } => Family::Weibull,
            FluctuationLaw::Gamma { .. } => Family::Gamma,
        }
    }

    /// Draw one linear `B2` value (> 0).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        match *self {
            FluctuationLaw::Lognormal { mu_db, sigma_db } => {
                let z: f64 = StandardNormal.sample(rng);
                Ok(db_to_linear(mu_db + sigma_db * z))
            }
            FluctuationLaw::Weibull { shape, scale } => {
                let d =
                    Weibull::new(scale, shape).map_err(|e| Error::Config(format!("weibull({shape}, {scale}): {e}")))?;
                Ok(d.sample(rng))
            }
            FluctuationLaw::Gamma { shape, scale } => {
                let d = Gamma::new(shape, scale).map_err(|e| Error::Config(format!("gamma({shape}, {scale}): {e}")))?;
                Ok(d.sample(rng))
            }
        }
    }

    /// CDF of the linear value `P(B2 ≤ x)`.
    pub fn cdf_linear(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match *self {
            FluctuationLaw::Lognormal { .. } => self.cdf_db(10.0 * x.log10()),
            FluctuationLaw::Weibull { shape, scale } => {
                WeibullCdf::new(shape, scale).map(|d| d.cdf(x)).unwrap_or(f64::NAN)
            }
            FluctuationLaw::Gamma { shape, scale } => {
                GammaCdf::new(shape, 1.0 / scale).map(|d| d.cdf(x)).unwrap_or(f64::NAN)
            }
        }
    }

    /// CDF expressed on the dB axis, `P(10·log10 B2 ≤ x_db)`.
    pub fn cdf_db(&self, x_db: f64) -> f64 {
        match *self {
            FluctuationLaw::Lognormal { mu_db, sigma_db } => {
                if sigma_db == 0.0 {
                    if x_db >= mu_db {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    Normal::new(mu_db, sigma_db).map(|d| d.cdf(x_db)).unwrap_or(f64::NAN)
                }
            }
            _ => self.cdf_linear(db_to_linear(x_db)),
        }
    }
}

/// Fitted triple for one target class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnifiedRcsModel {
    pub target_label: String,
    pub a_law: LargeScaleLaw,
    pub b1: BeamPattern,
    pub b2: FluctuationLaw,
    #[serde(default = "default_convention")]
    pub heading_convention: String,
}

fn default_convention() -> String {
    HEADING_CONVENTION.to_string()
}

/// `σ` split into its components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaEval {
    pub a_db: f64,
    pub b1_db: f64,
    pub b2_db: f64,
    pub dbsm: f64,
    pub linear_m2: f64,
    pub extrapolated: bool,
}

impl UnifiedRcsModel {
    /// Evaluate `σ(f, φ)` for a given linear `B2` (pass 1.0 for the
    /// deterministic part).
    pub fn eval_sigma(&self, f_ghz: f64, phi_deg: f64, b2_linear: f64) -> Result<SigmaEval> {
        let a = self.a_law.eval(f_ghz)?;
        let b1_db = self.b1.eval_db(phi_deg);
        let b2_db = linear_to_db(b2_linear)?;
        let dbsm = a.dbsm + b1_db + b2_db;
        Ok(SigmaEval {
            a_db: a.dbsm,
            b1_db,
            b2_db,
            dbsm,
            linear_m2: db_to_linear(dbsm),
            extrapolated: a.extrapolated,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| {
            if e.to_string().contains("unknown variant") {
                Error::Config(e.to_string())
            } else {
                Error::Json(e)
            }
        })
    }
}

fn four_peaks(rows: [(f64, f64, f64); 4], y_max: f64) -> BeamPattern {
    let peaks = rows
        .iter()
        .map(|&(c, hw, off)| BeamPeak::centered(c, hw, off))
        .collect();
    BeamPattern::new(peaks, y_max).expect("builtin pattern is valid")
}

/// UAV, Vehicle and Human parameterizations from the measurement campaign.
pub fn builtin_models() -> BTreeMap<String, UnifiedRcsModel> {
    let (f_min, f_max) = BUILTIN_VALID_RANGE_GHZ;
    let law = |s, i| LargeScaleLaw::new(s, i, f_min, f_max).expect("valid law");
    let mk = |label: &str, a_law, b1, b2| UnifiedRcsModel {
        target_label: label.to_string(),
        a_law,
        b1,
        b2,
        heading_convention: default_convention(),
    };
    let uav = mk(
        "UAV",
        law(0.31, -9.26),
        four_peaks(
            [
                (0.0, 20.84, 0.68),
                (90.0, 10.47, -6.52),
                (180.0, 15.41, -5.61),
                (270.0, 14.51, -12.30),
            ],
            4.47,
        ),
        FluctuationLaw::Lognormal {
            mu_db: -0.52,
            sigma_db: 2.31,
        },
    );
    let vehicle = mk(
        "Vehicle",
        law(0.08, 8.21),
        four_peaks(
            [
                (0.0, 12.59, -9.61),
                (90.0, 30.42, -1.67),
                (180.0, 15.79, -10.06),
                (270.0, 28.03, 1.56),
            ],
            7.46,
        ),
        FluctuationLaw::Lognormal {
            mu_db: -0.53,
            sigma_db: 2.64,
        },
    );
    let human = mk(
        "Human",
        law(0.16, -4.68),
        BeamPattern::isotropic(),
        FluctuationLaw::Lognormal {
            mu_db: -0.77,
            sigma_db: 2.13,
        },
    );
    [uav, vehicle, human]
        .into_iter()
        .map(|m| (m.target_label.clone(), m))
        .collect()
}

/// Case-insensitive lookup of a builtin model.
pub fn builtin_model(label: &str) -> Result<UnifiedRcsModel> {
    builtin_models()
        .into_values()
        .find(|m| m.target_label.eq_ignore_ascii_case(label))
        .ok_or_else(|| Error::Config(format!("no builtin model named `{label}` (UAV, Vehicle, Human)")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn uav() -> UnifiedRcsModel {
        builtin_model("uav").unwrap()
    }

    #[test]
    fn a_law_spot_values() {
        let m = builtin_models();
        let a = m["UAV"].a_law.eval(10.0).unwrap();
        assert!((a.dbsm - -6.16).abs() < 1e-12);
        assert!(!a.extrapolated);
        let a = m["Vehicle"].a_law.eval(28.0).unwrap();
        assert!((a.dbsm - 10.45).abs() < 1e-12);
        let a = m["Human"].a_law.eval(1e-9).unwrap();
        assert!((a.dbsm - -4.68).abs() < 1e-9);
        assert!(a.extrapolated);
    }

    #[test]
    fn a_law_rejects_nonpositive_frequency() {
        let law = uav().a_law;
        assert!(matches!(law.eval(0.0), Err(Error::Domain(_))));
        assert!(law.eval(-3.0).is_err());
        assert!(LargeScaleLaw::new(1.0, 0.0, 5.0, 5.0).is_err());
    }

    #[test]
    fn uav_pattern_spot_values() {
        let p = uav().b1;
        assert!((p.eval_db(0.0) - -0.68).abs() < 1e-12);
        assert!((p.eval_db(90.0) - 6.52).abs() < 1e-12);
        assert!((p.eval_db(45.0) - -4.47).abs() < 1e-12);
        // the seam behaves symmetrically around the 0° lobe
        assert!((p.eval_db(355.0) - p.eval_db(5.0)).abs() < 1e-12);
    }

    #[test]
    fn human_is_isotropic() {
        let h = builtin_model("Human").unwrap();
        assert!(h.b1.isotropic);
        for k in 0..720 {
            assert_eq!(h.b1.eval_db(k as f64 * 0.5), 0.0);
        }
        assert_eq!(
            h.b2,
            FluctuationLaw::Lognormal {
                mu_db: -0.77,
                sigma_db: 2.13
            }
        );
    }

    #[test]
    fn vehicle_lookup() {
        let v = builtin_model("Vehicle").unwrap();
        let p = v.b1.peak_for(90.0).unwrap();
        assert_eq!(p.center_deg, 90.0);
        assert_eq!(p.halfwidth_3db_deg, 30.42);
        assert_eq!(p.offset_db, -1.67);
        assert_eq!(v.b1.y_max, 7.46);
        assert_eq!(uav().b1.y_max, 4.47);
        assert_eq!(uav().a_law.slope, 0.31);
        assert_eq!(uav().a_law.intercept, -9.26);
        assert_eq!(v.a_law.f_min, 10.0);
        assert_eq!(v.a_law.f_max, 36.0);
    }

    #[test]
    fn sector_boundaries_are_half_open() {
        let p = uav().b1;
        assert_eq!(p.peak_for(45.0).unwrap().center_deg, 90.0);
        assert_eq!(p.peak_for(44.999).unwrap().center_deg, 0.0);
        assert_eq!(p.peak_for(315.0).unwrap().center_deg, 0.0);
        assert_eq!(p.peak_for(314.999).unwrap().center_deg, 270.0);
        assert_eq!(p.peak_for(-45.0).unwrap().center_deg, 0.0);
    }

    #[test]
    fn partition_validation() {
        let bad = vec![
            BeamPeak::centered(0.0, 10.0, 0.0),
            BeamPeak {
                sector: Sector::new(50.0, 315.0),
                ..BeamPeak::centered(180.0, 10.0, 0.0)
            },
        ];
        assert!(BeamPattern::new(bad, 3.0).is_err());
        let gap_free = vec![
            BeamPeak {
                sector: Sector::new(270.0, 90.0),
                ..BeamPeak::centered(0.0, 10.0, 0.0)
            },
            BeamPeak {
                sector: Sector::new(90.0, 270.0),
                ..BeamPeak::centered(180.0, 10.0, 0.0)
            },
        ];
        assert!(BeamPattern::new(gap_free, 3.0).is_ok());
        let zero_width = vec![BeamPeak::centered(0.0, 0.0, 0.0)];
        assert!(BeamPattern::new(zero_width, 3.0).is_err());
        let single = vec![BeamPeak {
            sector: Sector::new(0.0, 0.0),
            ..BeamPeak::centered(0.0, 10.0, 0.0)
        }];
        assert!(BeamPattern::new(single, 3.0).is_ok());
    }

    #[test]
    fn eval_sigma_examples() {
        let s = uav().eval_sigma(28.0, 0.0, 1.0).unwrap();
        assert!((s.dbsm - -1.26).abs() < 1e-12);
        let v = builtin_model("vehicle").unwrap().eval_sigma(10.0, 270.0, 1.0).unwrap();
        assert!((v.dbsm - 7.45).abs() < 1e-12);
        let h = builtin_model("human").unwrap();
        let s = h.eval_sigma(20.0, 123.0, 1.0).unwrap();
        assert_eq!(s.dbsm, h.a_law.eval(20.0).unwrap().dbsm);
        assert!(uav().eval_sigma(0.0, 0.0, 1.0).is_err());
        assert!(uav().eval_sigma(20.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn degenerate_lognormal_is_exact() {
        let law = FluctuationLaw::lognormal(0.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            assert_eq!(law.sample(&mut rng).unwrap(), 1.0);
        }
    }

    #[test]
    fn lognormal_draws_positive() {
        let law = FluctuationLaw::lognormal(-3.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!((0..10_000).all(|_| law.sample(&mut rng).unwrap() > 0.0));
    }

    #[test]
    fn lognormal_moments_in_db() {
        let law = uav().b2;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| 10.0 * law.sample(&mut rng).unwrap().log10()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - -0.52).abs() < 0.01, "mean {mean}");
        assert!((var.sqrt() - 2.31).abs() < 0.01, "std {}", var.sqrt());
    }

    #[test]
    fn unknown_family_is_config_error() {
        let js = r#"{"target_label":"x","a_law":{"slope":0.1,"intercept":0,"f_min":1,"f_max":2},
            "b1":{"isotropic":true,"y_max":0,"peaks":[]},"b2":{"family":"rayleigh","mu_db":0,"sigma_db":1}}"#;
        assert!(matches!(UnifiedRcsModel::from_json(js), Err(Error::Config(_))));
        assert!(matches!("rice".parse::<Family>(), Err(Error::Config(_))));
    }

    #[test]
    fn json_schema_shape() {
        let v: serde_json::Value = serde_json::from_str(&uav().to_json().unwrap()).unwrap();
        assert_eq!(v["a_law"]["slope"], 0.31);
        assert_eq!(v["b1"]["peaks"][0]["sector"][0], 315.0);
        assert_eq!(v["b1"]["peaks"][0]["sector"][1], 45.0);
        assert_eq!(v["b2"]["family"], "lognormal");
        assert_eq!(v["b2"]["mu_db"], -0.52);
    }

    #[test]
    fn json_rejects_inconsistent_isotropy() {
        let js = r#"{"target_label":"x","a_law":{"slope":0.1,"intercept":0,"f_min":1,"f_max":2},
            "b1":{"isotropic":true,"y_max":0,"peaks":[{"center_deg":0,"halfwidth_3db_deg":10,"offset_db":0,"sector":[0,0]}]},
            "b2":{"family":"lognormal","mu_db":0,"sigma_db":1}}"#;
        assert!(UnifiedRcsModel::from_json(js).is_err());
    }
}
