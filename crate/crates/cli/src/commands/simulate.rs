use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use rcs_core::sim::{run_monte_carlo, SimConfig};

#[derive(clap::Args)]
pub struct Args {
    /// JSON config mirroring the SimConfig fields; defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the target label.
    #[arg(long)]
    pub target: Option<String>,
    /// Override the carrier frequency in GHz.
    #[arg(long)]
    pub freq: Option<f64>,
    #[arg(long)]
    pub drops: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    /// Skip the SVG CDF plots.
    #[arg(long)]
    pub no_svg: bool,
}

pub fn run(a: Args, seed: u64) -> anyhow::Result<()> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            SimConfig::from_json(&text).map_err(|e| anyhow::Error::new(e).context(p.display().to_string()))?
        }
        None => SimConfig::default(),
    };
    cfg.seed = seed;
    if let Some(t) = a.target {
        cfg.target_label = t;
        cfg.model = None;
    }
    if let Some(f) = a.freq {
        cfg.carrier_freq_ghz = f;
    }
    if let Some(d) = a.drops {
        cfg.drops = d;
    }
    cfg.validate()?;
    super::announce("simulate", &cfg, seed);
    let run = run_monte_carlo(&cfg)?;
    if run.summary.a_extrapolated {
        eprintln!(
            "warning: carrier {} GHz outside the A(f) valid range",
            cfg.carrier_freq_ghz
        );
    }
    let files = run.write_outputs(&a.out, !a.no_svg)?;
    let s = &run.summary;
    println!(
        "target {} at {} GHz, {} drops, seed {}",
        s.target_label, s.carrier_freq_ghz, s.drops, s.seed
    );
    println!("median path loss     {:.2} dB", s.path_loss_db.median);
    println!("median delay spread  {:.2} ns", s.delay_spread_ns.median);
    println!("median angle spread  {:.2} deg", s.angle_spread_deg.median);
    eprintln!("wrote {} files to {}", files.len(), a.out.display());
    Ok(())
}
