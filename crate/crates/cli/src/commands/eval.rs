use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum B2Mode {
    Off,
    Seeded,
}

#[derive(clap::Args)]
pub struct Args {
    /// Builtin label (uav, vehicle, human) or model / fit-report JSON.
    pub model: String,
    /// Frequencies in GHz.
    #[arg(long, value_delimiter = ',', default_values_t = [28.0])]
    pub freq: Vec<f64>,
    /// Azimuth grid step in degrees.
    #[arg(long, default_value_t = 5.0)]
    pub phi_grid: f64,
    #[arg(long, value_enum, default_value_t = B2Mode::Off)]
    pub b2: B2Mode,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Resolved<'a> {
    model: &'a str,
    freq_ghz: &'a [f64],
    phi_grid_deg: f64,
    b2: B2Mode,
}

pub fn run(a: Args, seed: u64) -> anyhow::Result<()> {
    let freqs: Vec<f64> = a.freq.clone();
    if !(a.phi_grid > 0.0 && a.phi_grid <= 360.0) {
        return Err(rcs_core::Error::Config("--phi-grid must lie in (0, 360]".into()).into());
    }
    super::announce(
        "eval",
        &Resolved {
            model: &a.model,
            freq_ghz: &freqs,
            phi_grid_deg: a.phi_grid,
            b2: a.b2,
        },
        seed,
    );
    let model = super::load_model(&a.model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (360.0 / a.phi_grid).round() as usize;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "freq_ghz",
        "phi_deg",
        "a_db",
        "b1_db",
        "b2_db",
        "sigma_dbsm",
        "extrapolated",
    ])?;
    for &f in &freqs {
        for k in 0..n {
            let phi = k as f64 * a.phi_grid;
            let b2 = match a.b2 {
                B2Mode::Off => 1.0,
                B2Mode::Seeded => model.b2.sample(&mut rng)?,
            };
            let s = model.eval_sigma(f, phi, b2)?;
            w.write_record([
                f.to_string(),
                phi.to_string(),
                format!("{:.6}", s.a_db),
                format!("{:.6}", s.b1_db),
                format!("{:.6}", s.b2_db),
                format!("{:.6}", s.dbsm),
                s.extrapolated.to_string(),
            ])?;
        }
        if model.a_law.eval(f)?.extrapolated {
            eprintln!(
                "warning: {f} GHz outside the A(f) valid range [{}, {}] GHz",
                model.a_law.f_min, model.a_law.f_max
            );
        }
    }
    let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    match &a.out {
        Some(p) => super::write_file(p, &bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
    }
    Ok(())
}
