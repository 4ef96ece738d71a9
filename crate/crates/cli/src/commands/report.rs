use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use rcs_core::sim::{read_cdf_csv, Metric};
use rcs_core::{svg, UnifiedRcsModel};
use serde::Serialize;

/// A CDF curve with its legend label.
type Labeled = (String, Vec<(f64, f64)>);

#[derive(clap::Args)]
pub struct Args {
    /// Directory of `rcs fit` / `rcs simulate` outputs (searched one level deep).
    pub run_dir: PathBuf,
    /// Where to write SVGs; defaults to the run directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Resolved<'a> {
    run_dir: &'a Path,
    out: &'a Path,
}

fn dirs(root: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut v = vec![root.to_path_buf()];
    let mut subs: Vec<PathBuf> = fs::read_dir(root)
        .with_context(|| format!("reading {}", root.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    subs.sort();
    v.extend(subs);
    Ok(v)
}

fn label_for(dir: &Path) -> String {
    fs::read_to_string(dir.join("summary.json"))
        .ok()
        .and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok())
        .and_then(|v| {
            let t = v.get("target_label")?.as_str()?.to_string();
            let f = v.get("carrier_freq_ghz")?.as_f64()?;
            Some(format!("{t} @ {f} GHz"))
        })
        .unwrap_or_else(|| dir.file_name().and_then(|n| n.to_str()).unwrap_or("run").to_string())
}

fn models_in(dir: &Path) -> Vec<UnifiedRcsModel> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map(|r| r.filter_map(|e| e.ok().map(|e| e.path())).collect())
        .unwrap_or_default();
    files.sort();
    files
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "json") && p.file_name().is_some_and(|n| n != "summary.json"))
        .filter_map(|p| super::load_model(p.to_str()?).ok())
        .collect()
}

pub fn run(a: Args, seed: u64) -> anyhow::Result<()> {
    if !a.run_dir.is_dir() {
        return Err(rcs_core::Error::Format(format!("{} is not a directory", a.run_dir.display())).into());
    }
    let out = a.out.clone().unwrap_or_else(|| a.run_dir.clone());
    super::announce(
        "report",
        &Resolved {
            run_dir: &a.run_dir,
            out: &out,
        },
        seed,
    );

    let mut cdfs: BTreeMap<&str, Vec<Labeled>> = BTreeMap::new();
    let mut models: BTreeMap<String, UnifiedRcsModel> = BTreeMap::new();
    for d in dirs(&a.run_dir)? {
        for m in Metric::ALL {
            let p = d.join(format!("cdf_{}.csv", m.file_stem()));
            if p.is_file() {
                let (_, pts) = read_cdf_csv(&p)?;
                cdfs.entry(m.file_stem()).or_default().push((label_for(&d), pts));
            }
        }
        for m in models_in(&d) {
            models.entry(m.target_label.clone()).or_insert(m);
        }
    }
    if cdfs.is_empty() && models.is_empty() {
        return Err(rcs_core::Error::Format(format!(
            "{}: no simulate (cdf_*.csv) or fit (*.json) outputs found",
            a.run_dir.display()
        ))
        .into());
    }
    let mut written = 0;
    for m in Metric::ALL {
        if let Some(series) = cdfs.get(m.file_stem()) {
            let refs: Vec<(&str, &[(f64, f64)])> = series.iter().map(|(l, p)| (l.as_str(), p.as_slice())).collect();
            let s = svg::cdf_plot(&format!("CDF of {}", m.column()), m.column(), &refs);
            super::write_file(&out.join(format!("report_cdf_{}.svg", m.file_stem())), s.as_bytes())?;
            written += 1;
        }
    }
    for (label, m) in &models {
        let s = svg::polar_pattern(&format!("B1 pattern: {label}"), &[(label.as_str(), &m.b1)]);
        let safe: String = label
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        super::write_file(&out.join(format!("b1_{safe}.svg")), s.as_bytes())?;
        written += 1;
    }
    eprintln!("wrote {written} SVG files to {}", out.display());
    Ok(())
}
