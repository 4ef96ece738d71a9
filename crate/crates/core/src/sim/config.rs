use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{builtin_model, UnifiedRcsModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub cell_radius_m: f64,
    pub bs_position: [f64; 2],
    pub bs_height_m: f64,
    pub target_height_m: f64,
    pub min_range_m: f64,
}

impl Default for Scenario {
    /// UMi street-canyon layout.
    fn default() -> Self {
        Scenario {
            cell_radius_m: 100.0,
            bs_position: [0.0, 0.0],
            bs_height_m: 10.0,
            target_height_m: 1.5,
            min_range_m: 10.0,
        }
    }
}

/// How `B1` weights a cascaded path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternArgument {
    /// `B1` at the Tx-side incident azimuth only.
    Incident,
    /// `sqrt(B1(φ_in)·B1(φ_out))`, symmetric in the two half-links.
    InOutGeometricMean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterConfig {
    pub n1: usize,
    pub n2: usize,
    pub delay_scale_tx_s: f64,
    pub delay_scale_rx_s: f64,
    pub angle_std_tx_deg: f64,
    pub angle_std_rx_deg: f64,
    pub power_decay_db: f64,
    /// Ratio of the line-of-sight cluster power to the scattered power.
    /// `None` disables the line-of-sight cluster.
    pub los_k_factor_db: Option<f64>,
    pub pattern_argument: PatternArgument,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            n1: 8,
            n2: 8,
            delay_scale_tx_s: 50e-9,
            delay_scale_rx_s: 50e-9,
            angle_std_tx_deg: 60.0,
            angle_std_rx_deg: 60.0,
            power_decay_db: 2.0,
            los_k_factor_db: Some(9.0),
            pattern_argument: PatternArgument::InOutGeometricMean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Mode {
    Monostatic,
    Bistatic { rx_position: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Background {
    pub enabled: bool,
    /// Power of the constant tap relative to the total target-channel power.
    pub power_offset_db: f64,
}

impl Default for Background {
    fn default() -> Self {
        Background {
            enabled: false,
            power_offset_db: -20.0,
        }
    }
}

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub scenario: Scenario,
    pub carrier_freq_ghz: f64,
    pub target_label: String,
    /// Inline model; overrides the builtin looked up by `target_label`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<UnifiedRcsModel>,
    pub drops: usize,
    pub seed: u64,
    pub cluster_cfg: ClusterConfig,
    pub mode: Mode,
    pub background: Background,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scenario: Scenario::default(),
            carrier_freq_ghz: 28.0,
            target_label: "uav".into(),
            model: None,
            drops: 10_000,
            seed: DEFAULT_SEED,
            cluster_cfg: ClusterConfig::default(),
            mode: Mode::Monostatic,
            background: Background::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let s = &self.scenario;
        let c = &self.cluster_cfg;
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.drops < 1 {
            return bad("drops must be >= 1");
        }
        if c.n1 < 1 || c.n2 < 1 {
            return bad("cluster counts n1, n2 must be >= 1");
        }
        if !(s.min_range_m > 0.0 && s.cell_radius_m > s.min_range_m) {
            return bad("need cell_radius_m > min_range_m > 0");
        }
        if !(self.carrier_freq_ghz > 0.0) {
            return bad("carrier_freq_ghz must be > 0");
        }
        if !(c.delay_scale_tx_s >= 0.0 && c.delay_scale_rx_s >= 0.0) {
            return bad("delay scales must be >= 0");
        }
        if !(c.angle_std_tx_deg >= 0.0 && c.angle_std_rx_deg >= 0.0) {
            return bad("angle standard deviations must be >= 0");
        }
        if !c.power_decay_db.is_finite() || c.los_k_factor_db.is_some_and(|k| !k.is_finite()) {
            return bad("power parameters must be finite");
        }
        Ok(())
    }

    pub fn resolve_model(&self) -> Result<UnifiedRcsModel> {
        match &self.model {
            Some(m) => Ok(m.clone()),
            None => builtin_model(&self.target_label),
        }
    }

    /// Parse JSON, reporting schema violations with their JSON-pointer-like path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: SimConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config(format!("at `{}`: {}", path_to_pointer(&path), e.inner()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `a.b[2].c` → `/a/b/2/c`.
fn path_to_pointer(path: &str) -> String {
    if path == "." {
        return "/".into();
    }
    let mut out = String::new();
    for part in path.split('.') {
        for seg in part.split('[') {
            let seg = seg.trim_end_matches(']');
            if !seg.is_empty() {
                out.push('/');
                out.push_str(seg);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = SimConfig::default();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(SimConfig::from_json(&s).unwrap(), c);
        assert!(SimConfig::from_json("{}").is_ok());
    }

    #[test]
    fn schema_errors_carry_a_pointer() {
        let err = SimConfig::from_json(r#"{"cluster_cfg": {"n1": "eight"}}"#).unwrap_err();
        assert!(err.to_string().contains("/cluster_cfg/n1"), "{err}");
        let err = SimConfig::from_json(r#"{"scenario": {"radius": 3}}"#).unwrap_err();
        assert!(err.to_string().contains("/scenario"), "{err}");
        let err = SimConfig::from_json(r#"{"drops": 0}"#).unwrap_err();
        assert!(err.to_string().contains("drops"), "{err}");
        let err = SimConfig::from_json(r#"{"scenario": {"min_range_m": 200}}"#).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn bistatic_mode_parses() {
        let c = SimConfig::from_json(r#"{"mode": {"bistatic": {"rx_position": [50, 0]}}}"#).unwrap();
        assert_eq!(
            c.mode,
            Mode::Bistatic {
                rx_position: [50.0, 0.0]
            }
        );
        assert!(SimConfig::from_json(r#"{"mode": "monostatic"}"#).is_ok());
    }
}
