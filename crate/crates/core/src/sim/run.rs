use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::UnifiedRcsModel;
use crate::stats::{empirical_cdf, Summary};
use crate::svg;
use crate::units::{db_to_linear, wavelength_m, wrap_deg, SPEED_OF_LIGHT};

use super::channel::{
    azimuth_angle_spread, cascade_paths, gen_drop_geometry, gen_half_link, los_delay, rms_delay_spread,
    target_path_loss, CascadedPath, HalfLinkSpec,
};
use super::config::{Mode, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DropResult {
    pub drop: usize,
    pub r1_m: f64,
    pub r2_m: f64,
    pub heading_deg: f64,
    pub b2_draw: f64,
    pub path_loss_db: f64,
    pub rms_delay_spread_s: f64,
    pub azimuth_angle_spread_deg: f64,
}

/// SplitMix64 output function.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of drop `index`: the `(index + 1)`-th SplitMix64 output after
/// `master`. Independent of scheduling, so results do not depend on the
/// worker count.
pub fn drop_seed(master: u64, index: usize) -> u64 {
    mix64(master.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index as u64 + 1)))
}

const STREAM_GEOMETRY: u64 = 0;
const STREAM_TX: u64 = 1;
const STREAM_RX: u64 = 2;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Simulate one drop; exposed so that a single drop can be replayed.
pub fn simulate_drop(
    cfg: &SimConfig,
    model: &UnifiedRcsModel,
    index: usize,
) -> Result<(DropResult, Vec<CascadedPath>)> {
    let seed = drop_seed(cfg.seed, index);
    let g = gen_drop_geometry(cfg, model, &mut rng_for(seed, STREAM_GEOMETRY))?;
    let a = model.a_law.eval(cfg.carrier_freq_ghz)?;
    let path_loss_db = target_path_loss(g.r1_m, g.r2_m, wavelength_m(cfg.carrier_freq_ghz), a.dbsm)?;

    let c = &cfg.cluster_cfg;
    let tx_spec = HalfLinkSpec {
        n_clusters: c.n1,
        delay_scale_s: c.delay_scale_tx_s,
        angle_std_deg: c.angle_std_tx_deg,
        power_decay_db: c.power_decay_db,
        los_k_factor_db: c.los_k_factor_db,
    };
    let rx_spec = HalfLinkSpec {
        n_clusters: c.n2,
        delay_scale_s: c.delay_scale_rx_s,
        angle_std_deg: c.angle_std_rx_deg,
        ..tx_spec
    };
    let tx = gen_half_link(
        &tx_spec,
        los_delay(g.r1_m),
        g.az_target_to_tx_deg,
        wrap_deg(g.az_target_to_tx_deg + 180.0),
        &mut rng_for(seed, STREAM_TX),
    )?;
    let rx = gen_half_link(
        &rx_spec,
        los_delay(g.r2_m),
        g.az_target_to_rx_deg,
        g.az_rx_to_target_deg,
        &mut rng_for(seed, STREAM_RX),
    )?;
    let mut paths = cascade_paths(&tx, &rx, model, g.heading_deg, g.b2_draw, c.pattern_argument)?;

    if cfg.background.enabled {
        let total: f64 = paths.iter().map(|p| p.power).sum();
        let (delay_s, aoa_rx_deg) = match cfg.mode {
            // collocated Tx/Rx: leakage at zero delay, seen along the target bearing
            Mode::Monostatic => (0.0, g.az_rx_to_target_deg),
            Mode::Bistatic { rx_position } => {
                let t = cfg.scenario.bs_position;
                let d = (t[0] - rx_position[0]).hypot(t[1] - rx_position[1]);
                let az = wrap_deg((t[1] - rx_position[1]).atan2(t[0] - rx_position[0]).to_degrees());
                (d / SPEED_OF_LIGHT, az)
            }
        };
        paths.push(CascadedPath {
            delay_s,
            aoa_rx_deg,
            power: total * db_to_linear(cfg.background.power_offset_db),
            phase_rad: 0.0,
        });
    }

    let result = DropResult {
        drop: index,
        r1_m: g.r1_m,
        r2_m: g.r2_m,
        heading_deg: g.heading_deg,
        b2_draw: g.b2_draw,
        path_loss_db,
        rms_delay_spread_s: rms_delay_spread(&paths)?,
        azimuth_angle_spread_deg: azimuth_angle_spread(&paths)?,
    };
    Ok((result, paths))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    PathLoss,
    DelaySpread,
    AngleSpread,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::PathLoss, Metric::DelaySpread, Metric::AngleSpread];

    pub fn file_stem(&self) -> &'static str {
        match self {
            Metric::PathLoss => "path_loss",
            Metric::DelaySpread => "delay_spread",
            Metric::AngleSpread => "angle_spread",
        }
    }

    /// Column name including the unit.
    pub fn column(&self) -> &'static str {
        match self {
            Metric::PathLoss => "path_loss_db",
            Metric::DelaySpread => "delay_spread_ns",
            Metric::AngleSpread => "angle_spread_deg",
        }
    }

    pub fn value(&self, d: &DropResult) -> f64 {
        match self {
            Metric::PathLoss => d.path_loss_db,
            Metric::DelaySpread => d.rms_delay_spread_s * 1e9,
            Metric::AngleSpread => d.azimuth_angle_spread_deg,
        }
    }

    pub fn values(&self, drops: &[DropResult]) -> Vec<f64> {
        drops.iter().map(|d| self.value(d)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub target_label: String,
    pub carrier_freq_ghz: f64,
    pub seed: u64,
    pub drops: usize,
    pub a_dbsm: f64,
    /// The carrier lies outside the fitted range of `A(f)`.
    pub a_extrapolated: bool,
    pub path_loss_db: Summary,
    pub delay_spread_ns: Summary,
    pub angle_spread_deg: Summary,
    pub config: SimConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRun {
    pub drops: Vec<DropResult>,
    pub summary: SimSummary,
}

pub fn run_monte_carlo(cfg: &SimConfig) -> Result<SimRun> {
    cfg.validate()?;
    let model = cfg.resolve_model()?;
    let a = model.a_law.eval(cfg.carrier_freq_ghz)?;
    let drops: Vec<DropResult> = (0..cfg.drops)
        .into_par_iter()
        .map(|i| {
            simulate_drop(cfg, &model, i)
                .map(|r| r.0)
                .map_err(|e| Error::Numerical(format!("drop {i}: {e}")))
        })
        .collect::<Result<_>>()?;
    let summary = SimSummary {
        target_label: model.target_label.clone(),
        carrier_freq_ghz: cfg.carrier_freq_ghz,
        seed: cfg.seed,
        drops: drops.len(),
        a_dbsm: a.dbsm,
        a_extrapolated: a.extrapolated,
        path_loss_db: Summary::of(&Metric::PathLoss.values(&drops)),
        delay_spread_ns: Summary::of(&Metric::DelaySpread.values(&drops)),
        angle_spread_deg: Summary::of(&Metric::AngleSpread.values(&drops)),
        config: cfg.clone(),
    };
    Ok(SimRun { drops, summary })
}

impl SimRun {
    pub fn write_drops_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(w);
        w.write_record([
            "drop",
            "r1_m",
            "r2_m",
            "heading_deg",
            "b2_draw",
            "path_loss_db",
            "delay_spread_ns",
            "angle_spread_deg",
        ])?;
        for d in &self.drops {
            w.write_record([
                d.drop.to_string(),
                d.r1_m.to_string(),
                d.r2_m.to_string(),
                d.heading_deg.to_string(),
                d.b2_draw.to_string(),
                d.path_loss_db.to_string(),
                (d.rms_delay_spread_s * 1e9).to_string(),
                d.azimuth_angle_spread_deg.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn cdf(&self, m: Metric) -> Result<Vec<(f64, f64)>> {
        empirical_cdf(&m.values(&self.drops))
    }

    /// `drops.csv`, `cdf_<metric>.csv`, `summary.json` and optionally one
    /// SVG per CDF. Returns the written paths.
    pub fn write_outputs(&self, dir: &Path, with_svg: bool) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut written = Vec::new();
        let p = dir.join("drops.csv");
        self.write_drops_csv(fs::File::create(&p).map_err(|e| Error::io(&p, e))?)?;
        written.push(p);
        for m in Metric::ALL {
            let cdf = self.cdf(m)?;
            let p = dir.join(format!("cdf_{}.csv", m.file_stem()));
            write_cdf_csv(&p, m.column(), &cdf)?;
            written.push(p);
            if with_svg {
                let p = dir.join(format!("cdf_{}.svg", m.file_stem()));
                let s = svg::cdf_plot(
                    &format!("{} CDF", m.column()),
                    m.column(),
                    &[(self.summary.target_label.as_str(), cdf.as_slice())],
                );
                fs::write(&p, s).map_err(|e| Error::io(&p, e))?;
                written.push(p);
            }
        }
        let p = dir.join("summary.json");
        fs::write(&p, serde_json::to_string_pretty(&self.summary)? + "\n").map_err(|e| Error::io(&p, e))?;
        written.push(p);
        Ok(written)
    }
}

pub fn write_cdf_csv(path: &Path, column: &str, cdf: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([column, "cdf"])?;
    for (x, p) in cdf {
        w.write_record([x.to_string(), p.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Read a `cdf_<metric>.csv` back as `(value, probability)` pairs.
pub fn read_cdf_csv(path: &Path) -> Result<(String, Vec<(f64, f64)>)> {
    let mut r = csv::Reader::from_path(path)?;
    let column = r.headers()?.get(0).unwrap_or_default().to_string();
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |k: usize| {
            rec.get(k)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| Error::format(format!("{}: line {}: bad number", path.display(), i + 2)))
        };
        out.push((num(0)?, num(1)?));
    }
    Ok((column, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BeamPattern;
    use crate::stats::median;

    fn cfg(label: &str, f: f64, drops: usize) -> SimConfig {
        SimConfig {
            target_label: label.into(),
            carrier_freq_ghz: f,
            drops,
            seed: 99,
            ..SimConfig::default()
        }
    }

    #[test]
    fn seeds_are_well_spread() {
        let s: std::collections::HashSet<u64> = (0..10_000).map(|i| drop_seed(1, i)).collect();
        assert_eq!(s.len(), 10_000);
        assert_ne!(drop_seed(1, 0), drop_seed(2, 0));
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let c = cfg("vehicle", 28.0, 300);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_monte_carlo(&c))
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_monte_carlo(&c))
            .unwrap();
        assert_eq!(one.drops, four.drops);
        let single = run_monte_carlo(&SimConfig { drops: 1, ..c.clone() }).unwrap();
        assert_eq!(single.drops[0], one.drops[0]);
    }

    #[test]
    fn isotropic_pattern_keeps_path_loss() {
        let c = cfg("vehicle", 10.0, 200);
        let base = run_monte_carlo(&c).unwrap();
        let mut m = c.resolve_model().unwrap();
        m.b1 = BeamPattern::isotropic();
        let iso = run_monte_carlo(&SimConfig { model: Some(m), ..c }).unwrap();
        let mut changed = 0;
        for (a, b) in base.drops.iter().zip(&iso.drops) {
            assert_eq!(a.path_loss_db, b.path_loss_db);
            if a.rms_delay_spread_s != b.rms_delay_spread_s {
                changed += 1;
            }
        }
        assert!(changed > 100);
    }

    #[test]
    fn path_loss_ordering_and_spreads() {
        let med = |r: &SimRun, m: Metric| median(&m.values(&r.drops));
        for f in [10.0, 28.0] {
            let uav = run_monte_carlo(&cfg("uav", f, 2000)).unwrap();
            let human = run_monte_carlo(&cfg("human", f, 2000)).unwrap();
            let vehicle = run_monte_carlo(&cfg("vehicle", f, 2000)).unwrap();
            assert!(med(&uav, Metric::PathLoss) > med(&human, Metric::PathLoss));
            assert!(med(&human, Metric::PathLoss) > med(&vehicle, Metric::PathLoss));
            for r in [&uav, &human, &vehicle] {
                assert!(r.drops.iter().all(|d| d.rms_delay_spread_s >= 0.0));
                assert!(r
                    .drops
                    .iter()
                    .all(|d| (0.0..=103.92).contains(&d.azimuth_angle_spread_deg)));
            }
        }
    }

    #[test]
    fn outputs_are_byte_identical() {
        let c = cfg("human", 28.0, 50);
        let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let f1 = run_monte_carlo(&c).unwrap().write_outputs(d1.path(), true).unwrap();
        run_monte_carlo(&c).unwrap().write_outputs(d2.path(), true).unwrap();
        assert_eq!(f1.len(), 1 + 3 + 3 + 1);
        for p in &f1 {
            let other = d2.path().join(p.file_name().unwrap());
            assert_eq!(fs::read(p).unwrap(), fs::read(other).unwrap(), "{}", p.display());
        }
        let (col, cdf) = read_cdf_csv(&d1.path().join("cdf_path_loss.csv")).unwrap();
        assert_eq!(col, "path_loss_db");
        assert_eq!(cdf.len(), 50);
        assert!(!fs::read_to_string(d1.path().join("drops.csv")).unwrap().contains('\r'));
    }

    #[test]
    fn background_tap_adds_a_path() {
        let mut c = cfg("uav", 28.0, 1);
        let model = c.resolve_model().unwrap();
        let (_, plain) = simulate_drop(&c, &model, 0).unwrap();
        c.background.enabled = true;
        let (_, with) = simulate_drop(&c, &model, 0).unwrap();
        assert_eq!(with.len(), plain.len() + 1);
        let total: f64 = plain.iter().map(|p| p.power).sum();
        assert!((with.last().unwrap().power / total - 0.01).abs() < 1e-12);
    }
}
