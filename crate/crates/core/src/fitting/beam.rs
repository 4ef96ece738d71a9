use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BeamPattern, BeamPeak, Sector};
use crate::stats::median;
use crate::units::{db_to_linear, signed_delta_deg, wrap_deg};

use super::dataset::MeasuredRcsDataset;

/// Subtract the per-frequency `A_dB` from every sample. Returns
/// `(azimuth_deg, normalized_db)` pooled across frequencies.
pub fn normalize_pattern(dataset: &MeasuredRcsDataset, a_per_freq: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    dataset
        .samples
        .iter()
        .map(|s| {
            let a = a_per_freq
                .iter()
                .find(|(f, _)| *f == s.freq_ghz)
                .ok_or_else(|| Error::domain(format!("no A value for {} GHz", s.freq_ghz)))?
                .1;
            Ok((s.azimuth_deg, s.rcs_dbsm - a))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeamFitConfig {
    pub centers_deg: Vec<f64>,
    pub halfwidth_min_deg: f64,
    pub halfwidth_max_deg: f64,
    pub halfwidth_step_deg: f64,
    /// Points further than this many beamwidths from every center are
    /// treated as floor samples when re-estimating `Y_max`.
    pub off_peak_factor: f64,
    /// Below this prominence the isotropic pattern is returned.
    pub prominence_threshold_db: f64,
    pub max_iterations: usize,
}

impl Default for BeamFitConfig {
    fn default() -> Self {
        BeamFitConfig {
            centers_deg: vec![0.0, 90.0, 180.0, 270.0],
            halfwidth_min_deg: 5.0,
            halfwidth_max_deg: 60.0,
            halfwidth_step_deg: 0.25,
            off_peak_factor: 1.5,
            prominence_threshold_db: 1.0,
            max_iterations: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorFit {
    pub center_deg: f64,
    pub halfwidth_3db_deg: f64,
    pub offset_db: f64,
    pub n_points: usize,
    pub sse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamFit {
    pub pattern: BeamPattern,
    /// Largest smoothed per-azimuth excursion above the median level.
    pub prominence_db: f64,
    pub sectors: Vec<SectorFit>,
    pub iterations: usize,
}

/// Sectors bounded by the circular midpoints between adjacent centers.
pub fn sectors_for_centers(centers_deg: &[f64]) -> Result<Vec<(f64, Sector)>> {
    if centers_deg.is_empty() {
        return Err(Error::Config("at least one peak center is required".into()));
    }
    let mut c: Vec<f64> = centers_deg.iter().map(|&x| wrap_deg(x)).collect();
    c.sort_by(f64::total_cmp);
    if c.windows(2).any(|w| w[1] - w[0] < 1e-9) {
        return Err(Error::Config("peak centers must be distinct".into()));
    }
    if c.len() == 1 {
        return Ok(vec![(c[0], Sector::new(c[0], c[0]))]);
    }
    let n = c.len();
    let mid = |a: f64, b: f64| {
        let gap = if b > a { b - a } else { b + 360.0 - a };
        wrap_deg(a + gap / 2.0)
    };
    Ok((0..n)
        .map(|i| {
            let prev = c[(i + n - 1) % n];
            let next = c[(i + 1) % n];
            (c[i], Sector::new(mid(prev, c[i]), mid(c[i], next)))
        })
        .collect())
}

/// Per-azimuth mean in dB, sorted by azimuth.
fn azimuth_means(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut acc: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for &(phi, y) in points {
        let e = acc.entry(wrap_deg(phi).to_bits()).or_insert((0.0, 0));
        e.0 += y;
        e.1 += 1;
    }
    let mut v: Vec<(f64, f64)> = acc
        .into_iter()
        .map(|(k, (s, n))| (f64::from_bits(k), s / n as f64))
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

/// Peak prominence: maximum of the 5-point circular moving average of the
/// per-azimuth means, minus their median.
pub fn peak_prominence_db(points: &[(f64, f64)]) -> f64 {
    let means = azimuth_means(points);
    let n = means.len();
    if n == 0 {
        return 0.0;
    }
    let half = if n >= 5 { 2 } else { (n - 1) / 2 };
    let smooth: Vec<f64> = (0..n)
        .map(|i| {
            let s: f64 = (0..=2 * half).map(|j| means[(i + n + j - half) % n].1).sum();
            s / (2 * half + 1) as f64
        })
        .collect();
    let med = median(&means.iter().map(|m| m.1).collect::<Vec<_>>());
    smooth.iter().copied().fold(f64::NEG_INFINITY, f64::max) - med
}

/// Fit `B1` to normalized `(azimuth, dB)` samples.
///
/// For fixed `Y_max`, each sector's beamwidth is found by a grid search plus
/// golden-section refinement, with `c_k` solved exactly by least squares in
/// dB for each candidate beamwidth. `Y_max` is then re-estimated as the
/// linear-domain mean of the off-peak samples, and the two steps alternate.
pub fn fit_beam_pattern(points: &[(f64, f64)], cfg: &BeamFitConfig) -> Result<BeamFit> {
    const STAGE: &str = "fit_beam_pattern";
    if points.is_empty() {
        return Err(Error::fit(STAGE, "no samples"));
    }
    if !(cfg.halfwidth_min_deg > 0.0 && cfg.halfwidth_max_deg >= cfg.halfwidth_min_deg && cfg.halfwidth_step_deg > 0.0)
    {
        return Err(Error::Config("invalid beamwidth search range".into()));
    }
    let sectors = sectors_for_centers(&cfg.centers_deg)?;
    // (delta from center, value) per sector
    let mut groups: Vec<Vec<(f64, f64)>> = vec![Vec::new(); sectors.len()];
    for &(phi, y) in points {
        let w = wrap_deg(phi);
        let k = sectors
            .iter()
            .position(|(_, s)| s.contains(w))
            .ok_or_else(|| Error::fit(STAGE, format!("azimuth {w} not covered by any sector")))?;
        groups[k].push((signed_delta_deg(w, sectors[k].0), y));
    }

    for ((center, _), g) in sectors.iter().zip(&groups) {
        if g.len() < 3 {
            return Err(Error::fit(
                STAGE,
                format!("sector centered at {center}° has {} points, need at least 3", g.len()),
            ));
        }
    }
    let prominence = peak_prominence_db(points);
    if prominence < cfg.prominence_threshold_db {
        return Ok(BeamFit {
            pattern: BeamPattern::isotropic(),
            prominence_db: prominence,
            sectors: Vec::new(),
            iterations: 0,
        });
    }

    let means = azimuth_means(points);
    let mut y_max = (-median(&means.iter().map(|m| m.1).collect::<Vec<_>>())).max(0.0);
    let mut fits: Vec<SectorFit> = Vec::new();
    let mut iterations = 0;
    for it in 1..=cfg.max_iterations.max(1) {
        iterations = it;
        fits = sectors
            .iter()
            .zip(&groups)
            .map(|((center, _), g)| fit_sector(*center, g, y_max, cfg))
            .collect();
        let mut floor_sum = 0.0;
        let mut floor_n = 0usize;
        for (f, g) in fits.iter().zip(&groups) {
            for &(d, y) in g {
                if d.abs() > cfg.off_peak_factor * f.halfwidth_3db_deg {
                    floor_sum += db_to_linear(y);
                    floor_n += 1;
                }
            }
        }
        if floor_n == 0 {
            break;
        }
        let next = (-10.0 * (floor_sum / floor_n as f64).log10()).max(0.0);
        let done = (next - y_max).abs() < 1e-9;
        y_max = next;
        if done {
            break;
        }
    }
    if !y_max.is_finite() {
        return Err(Error::fit(STAGE, "floor level diverged"));
    }
    let peaks = sectors
        .iter()
        .zip(&fits)
        .map(|((center, sector), f)| BeamPeak {
            center_deg: *center,
            halfwidth_3db_deg: f.halfwidth_3db_deg,
            offset_db: f.offset_db,
            sector: *sector,
        })
        .collect();
    let pattern = BeamPattern::new(peaks, y_max).map_err(|e| e.in_stage(STAGE))?;
    Ok(BeamFit {
        pattern,
        prominence_db: prominence,
        sectors: fits,
        iterations,
    })
}

fn fit_sector(center: f64, pts: &[(f64, f64)], y_max: f64, cfg: &BeamFitConfig) -> SectorFit {
    if pts.is_empty() {
        return SectorFit {
            center_deg: center,
            halfwidth_3db_deg: cfg.halfwidth_min_deg,
            offset_db: y_max,
            n_points: 0,
            sse: 0.0,
        };
    }
    let eval = |hw: f64| solve_offset(pts, hw, y_max);
    let steps = ((cfg.halfwidth_max_deg - cfg.halfwidth_min_deg) / cfg.halfwidth_step_deg).floor() as usize;
    let mut best = (cfg.halfwidth_min_deg, f64::INFINITY);
    for i in 0..=steps {
        let hw = cfg.halfwidth_min_deg + i as f64 * cfg.halfwidth_step_deg;
        let (_, sse) = eval(hw);
        if sse < best.1 {
            best = (hw, sse);
        }
    }
    let lo = (best.0 - cfg.halfwidth_step_deg).max(cfg.halfwidth_min_deg);
    let hi = (best.0 + cfg.halfwidth_step_deg).min(cfg.halfwidth_max_deg);
    let hw = golden_min(|h| eval(h).1, lo, hi, 1e-7);
    let (hw, (c, sse)) = if eval(hw).1 <= best.1 {
        (hw, eval(hw))
    } else {
        (best.0, eval(best.0))
    };
    SectorFit {
        center_deg: center,
        halfwidth_3db_deg: hw,
        offset_db: c,
        n_points: pts.len(),
        sse,
    }
}

/// Least-squares `c` for `y ≈ -min(q + c, Y)` with `q = 12(Δ/hw)²`.
///
/// The objective is piecewise quadratic in `c` with breakpoints at `Y - q_i`;
/// each piece is minimized in closed form. Returns `(c, sse)`.
pub(crate) fn solve_offset(pts: &[(f64, f64)], hw: f64, y_max: f64) -> (f64, f64) {
    let mut qy: Vec<(f64, f64)> = pts.iter().map(|&(d, y)| (12.0 * (d / hw).powi(2), y)).collect();
    qy.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = qy.len();
    // suffix sums of the clipped residual (y + Y)²
    let mut tail = vec![0.0; n + 1];
    for i in (0..n).rev() {
        tail[i] = tail[i + 1] + (qy[i].1 + y_max).powi(2);
    }
    // no lobe: every point sits on the floor
    let mut best = (y_max, tail[0]);
    let (mut s1, mut s2) = (0.0, 0.0);
    for j in 1..=n {
        let u = qy[j - 1].1 + qy[j - 1].0;
        s1 += u;
        s2 += u * u;
        let upper = y_max - qy[j - 1].0;
        let lower = if j < n { y_max - qy[j].0 } else { f64::NEG_INFINITY };
        if lower > upper {
            continue;
        }
        let c = (-s1 / j as f64).clamp(lower, upper);
        let sse = s2 + 2.0 * c * s1 + j as f64 * c * c + tail[j];
        if sse < best.1 {
            best = (c, sse);
        }
    }
    best
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    (a + b) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin_model;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn grid_points(p: &BeamPattern, step: f64) -> Vec<(f64, f64)> {
        (0..(360.0 / step) as usize)
            .map(|k| {
                let phi = k as f64 * step;
                (phi, p.eval_db(phi))
            })
            .collect()
    }

    #[test]
    fn default_sectors_match_quadrants() {
        let s = sectors_for_centers(&[0.0, 90.0, 180.0, 270.0]).unwrap();
        assert_eq!(s[0].1, Sector::new(315.0, 45.0));
        assert_eq!(s[1].1, Sector::new(45.0, 135.0));
        assert_eq!(s[3].1, Sector::new(225.0, 315.0));
        let two = sectors_for_centers(&[0.0, 180.0]).unwrap();
        assert_eq!(two[0].1, Sector::new(270.0, 90.0));
        assert!(sectors_for_centers(&[]).is_err());
        assert!(sectors_for_centers(&[10.0, 370.0]).is_err());
    }

    #[test]
    fn offset_solver_matches_brute_force() {
        let pts: Vec<(f64, f64)> = (-9..=9)
            .map(|k| {
                let d = k as f64 * 5.0;
                (
                    d,
                    -(12.0 * (d / 17.0).powi(2) + 1.3).min(6.0) + 0.3 * ((k * 7 % 5) as f64 - 2.0),
                )
            })
            .collect();
        let (c, sse) = solve_offset(&pts, 17.0, 6.0);
        let obj = |c: f64| -> f64 {
            pts.iter()
                .map(|&(d, y)| (y + (12.0 * (d / 17.0).powi(2) + c).min(6.0)).powi(2))
                .sum()
        };
        let mut brute = (0.0, f64::INFINITY);
        for i in 0..=40000 {
            let cc = -20.0 + i as f64 * 0.001;
            let v = obj(cc);
            if v < brute.1 {
                brute = (cc, v);
            }
        }
        assert!((sse - obj(c)).abs() < 1e-9);
        assert!(sse <= brute.1 + 1e-9);
        assert!((c - brute.0).abs() < 2e-3, "{c} vs {}", brute.0);
    }

    #[test]
    fn exact_uav_pattern_is_recovered() {
        let truth = builtin_model("uav").unwrap().b1;
        let fit = fit_beam_pattern(&grid_points(&truth, 5.0), &BeamFitConfig::default()).unwrap();
        assert!(!fit.pattern.isotropic);
        assert!((fit.pattern.y_max - truth.y_max).abs() < 0.1);
        for (got, want) in fit.pattern.peaks.iter().zip(&truth.peaks) {
            assert!(
                (got.halfwidth_3db_deg / want.halfwidth_3db_deg - 1.0).abs() < 0.02,
                "{got:?}"
            );
            assert!((got.offset_db - want.offset_db).abs() < 0.1, "{got:?}");
        }
    }

    #[test]
    fn flat_pattern_falls_back_to_isotropic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let noise = Normal::new(0.0, 2.13).unwrap();
        let pts: Vec<(f64, f64)> = (0..15)
            .flat_map(|_| (0..72).map(|k| (k as f64 * 5.0, 0.0)).collect::<Vec<_>>())
            .map(|(phi, _)| (phi, noise.sample(&mut rng)))
            .collect();
        let fit = fit_beam_pattern(&pts, &BeamFitConfig::default()).unwrap();
        assert!(fit.pattern.isotropic, "prominence {}", fit.prominence_db);
    }

    #[test]
    fn noisy_vehicle_pattern_median_errors() {
        let truth = builtin_model("vehicle").unwrap().b1;
        let clean = grid_points(&truth, 5.0);
        let noise = Normal::new(0.0, 2.64).unwrap();
        // per-sector estimates; the tolerance applies to their median
        let mut hw = vec![Vec::new(); 4];
        let mut c = vec![Vec::new(); 4];
        for trial in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(trial);
            let pts: Vec<(f64, f64)> = clean.iter().map(|&(p, y)| (p, y + noise.sample(&mut rng))).collect();
            let fit = fit_beam_pattern(&pts, &BeamFitConfig::default()).unwrap();
            assert!(!fit.pattern.isotropic);
            for k in 0..4 {
                hw[k].push(fit.pattern.peaks[k].halfwidth_3db_deg);
                c[k].push(fit.pattern.peaks[k].offset_db);
            }
        }
        for k in 0..4 {
            let w = &truth.peaks[k];
            let (mh, mc) = (median(&hw[k]), median(&c[k]));
            assert!((mh / w.halfwidth_3db_deg - 1.0).abs() < 0.15, "sector {k}: {mh}");
            assert!((mc - w.offset_db).abs() < 1.0, "sector {k}: {mc}");
        }
    }

    #[test]
    fn sparse_sector_is_reported() {
        let pts: Vec<(f64, f64)> = (0..8).map(|k| (k as f64 * 10.0, 0.0)).collect();
        let err = fit_beam_pattern(&pts, &BeamFitConfig::default()).unwrap_err();
        assert!(matches!(
            err,
            Error::Fit {
                stage: "fit_beam_pattern",
                ..
            }
        ));
        assert!(err.to_string().contains("180°"), "{err}");
    }

    #[test]
    fn normalization_subtracts_per_frequency_a() {
        use super::super::dataset::RcsSample;
        let samples: Vec<RcsSample> = [10.0, 20.0]
            .iter()
            .flat_map(|&f| {
                (0..8).map(move |k| RcsSample {
                    freq_ghz: f,
                    azimuth_deg: k as f64 * 45.0,
                    rcs_dbsm: f / 10.0,
                })
            })
            .collect();
        let ds = MeasuredRcsDataset::new("t", samples, 45.0).unwrap();
        let n = normalize_pattern(&ds, &[(10.0, 1.0), (20.0, 2.0)]).unwrap();
        assert!(n.iter().all(|p| p.1.abs() < 1e-12));
        assert!(normalize_pattern(&ds, &[(10.0, 1.0)]).is_err());

        let ds = MeasuredRcsDataset::new(
            "t",
            vec![
                RcsSample {
                    freq_ghz: 10.0,
                    azimuth_deg: 0.0,
                    rcs_dbsm: 13.0
                };
                1
            ]
            .into_iter()
            .chain((1..8).map(|k| RcsSample {
                freq_ghz: 10.0,
                azimuth_deg: k as f64 * 45.0,
                rcs_dbsm: 10.0,
            }))
            .collect(),
            45.0,
        )
        .unwrap();
        assert!((normalize_pattern(&ds, &[(10.0, 10.0)]).unwrap()[0].1 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn isotropic_target_normalizes_to_unit_mean() {
        use super::super::dataset::{campaign_frequencies, synthesize_dataset};
        use super::super::large_scale::extract_a;
        let m = builtin_model("human").unwrap();
        let ds = synthesize_dataset(&m, &campaign_frequencies(), 5.0, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let a: Vec<(f64, f64)> = ds
            .frequencies()
            .into_iter()
            .map(|f| {
                (
                    f,
                    extract_a(&ds.at_frequency(f).map(|s| s.rcs_dbsm).collect::<Vec<_>>()).unwrap(),
                )
            })
            .collect();
        let n = normalize_pattern(&ds, &a).unwrap();
        let lin = n.iter().map(|p| db_to_linear(p.1)).sum::<f64>() / n.len() as f64;
        assert!((lin - 1.0).abs() < 0.05);
    }
}
