use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use rcs_core::fitting::{fit_full_model, BeamFitConfig, FitConfig, FitReport, MeasuredRcsDataset};
use rcs_core::FluctuationLaw;

#[derive(clap::Args)]
pub struct Args {
    /// Dataset CSV with header `freq_ghz,azimuth_deg,rcs_dbsm`.
    pub dataset: PathBuf,
    /// Output FitReport JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Target label; defaults to the dataset file stem.
    #[arg(long)]
    pub label: Option<String>,
    /// Histogram bins for the KL divergence.
    #[arg(long, default_value_t = 30)]
    pub bins: usize,
    /// Rescale B1 to unit angular mean and fold the shift into A.
    #[arg(long)]
    pub renormalize: bool,
    /// Peak centers in degrees.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 90.0, 180.0, 270.0])]
    pub centers: Vec<f64>,
    /// Also write the bare model JSON here.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    /// Dump residuals as CSV.
    #[arg(long)]
    pub residuals: Option<PathBuf>,
}

pub fn run(a: Args, seed: u64) -> anyhow::Result<()> {
    let label = a.label.clone().unwrap_or_else(|| {
        a.dataset
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("target")
            .to_string()
    });
    let cfg = FitConfig {
        kl_bins: a.bins,
        renormalize: a.renormalize,
        beam: BeamFitConfig {
            centers_deg: a.centers.clone(),
            ..BeamFitConfig::default()
        },
        ..FitConfig::default()
    };
    super::announce("fit", &cfg, seed);
    let file = fs::File::open(&a.dataset).with_context(|| format!("opening {}", a.dataset.display()))?;
    let ds = MeasuredRcsDataset::read_csv(file, &label)
        .map_err(|e| anyhow::Error::new(e).context(format!("reading {}", a.dataset.display())))?;
    let rep = fit_full_model(&ds, &cfg)?;
    super::write_file(&a.out, (rep.to_json()? + "\n").as_bytes())?;
    if let Some(p) = &a.model_out {
        super::write_file(p, (rep.model.to_json()? + "\n").as_bytes())?;
    }
    if let Some(p) = &a.residuals {
        let mut buf = Vec::new();
        rep.write_residuals_csv(&mut buf)?;
        super::write_file(p, &buf)?;
    }
    print_summary(&rep);
    Ok(())
}

fn print_summary(rep: &FitReport) {
    let m = &rep.model;
    println!("target {}", m.target_label);
    println!(
        "A(f) = {:.4}·f {:+.4} dBsm, f in [{}, {}] GHz",
        m.a_law.slope, m.a_law.intercept, m.a_law.f_min, m.a_law.f_max
    );
    if m.b1.isotropic {
        println!(
            "B1: isotropic (prominence {:.2} dB)",
            rep.diagnostics.beam_prominence_db
        );
    } else {
        println!("B1: Y_max {:.2} dB", m.b1.y_max);
        println!("  center  phi3dB   c_k");
        for p in &m.b1.peaks {
            println!(
                "  {:>6.1}  {:>6.2}  {:>6.2}",
                p.center_deg, p.halfwidth_3db_deg, p.offset_db
            );
        }
    }
    match &m.b2 {
        FluctuationLaw::Lognormal { mu_db, sigma_db } => {
            println!("B2: lognormal mu {mu_db:.2} dB, sigma {sigma_db:.2} dB")
        }
        FluctuationLaw::Weibull { shape, scale } => println!("B2: weibull shape {shape:.3}, scale {scale:.3}"),
        FluctuationLaw::Gamma { shape, scale } => println!("B2: gamma shape {shape:.3}, scale {scale:.3}"),
    }
    println!("RMSE(B1) {:.4} dB", rep.rmse_b1);
    for (f, kl) in &rep.kl_by_family {
        println!("KL {f}: {kl:.5}");
    }
    println!("chosen family: {}", rep.chosen_family);
}
