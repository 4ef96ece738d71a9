use std::path::PathBuf;

use rcs_core::canonical::{cone_rcs, ellipsoid_rcs, plate_rcs, sphere_rcs, trihedral_rcs};
use rcs_core::units::{linear_to_db, wavelength_m};
use serde::Serialize;

const SHAPES: [&str; 5] = ["sphere", "plate", "ellipsoid", "cone", "trihedral"];

#[derive(clap::Args)]
pub struct Args {
    /// `all` or a comma-separated subset of sphere, plate, ellipsoid, cone, trihedral.
    #[arg(long, default_value = "all")]
    pub shapes: String,
    #[arg(long, value_delimiter = ',', default_values_t = [10.0, 28.0])]
    pub freqs: Vec<f64>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Resolved<'a> {
    shapes: &'a [String],
    freqs_ghz: &'a [f64],
}

struct Row {
    shape: &'static str,
    params: String,
    theta_deg: f64,
    rcs: f64,
}

fn rows(shape: &str, f: f64) -> anyhow::Result<Vec<Row>> {
    let lam = wavelength_m(f);
    let deg = f64::to_radians;
    Ok(match shape {
        "sphere" => vec![Row {
            shape: "sphere",
            params: "a=0.25".into(),
            theta_deg: 0.0,
            rcs: sphere_rcs(0.25)?,
        }],
        "plate" => [0.0, 10.0, 90.0]
            .iter()
            .map(|&t| {
                Ok(Row {
                    shape: "plate",
                    params: "a=0.3 b=0.3".into(),
                    theta_deg: t,
                    rcs: plate_rcs(0.3, 0.3, lam, deg(t))?,
                })
            })
            .collect::<anyhow::Result<_>>()?,
        "ellipsoid" => vec![Row {
            shape: "ellipsoid",
            params: "a=0.2 b=0.4".into(),
            theta_deg: 0.0,
            rcs: ellipsoid_rcs(0.2, 0.4, lam, 0.0)?,
        }],
        "cone" => vec![Row {
            shape: "cone",
            params: "a=0.1 alpha=15deg".into(),
            theta_deg: 15.0,
            rcs: cone_rcs(0.1, lam, deg(15.0), deg(15.0))?,
        }],
        "trihedral" => vec![Row {
            shape: "trihedral",
            params: "a=0.3 h=0.2 b=0.2".into(),
            theta_deg: 0.0,
            rcs: trihedral_rcs(0.3, 0.2, 0.2, lam, 0.0)?,
        }],
        other => {
            return Err(rcs_core::Error::Config(format!(
                "unknown shape `{other}`; expected one of {}",
                SHAPES.join(", ")
            ))
            .into())
        }
    })
}

pub fn run(a: Args, seed: u64) -> anyhow::Result<()> {
    let shapes: Vec<String> = if a.shapes.trim() == "all" {
        SHAPES.iter().map(|s| s.to_string()).collect()
    } else {
        a.shapes.split(',').map(|s| s.trim().to_lowercase()).collect()
    };
    super::announce(
        "validate-canonical",
        &Resolved {
            shapes: &shapes,
            freqs_ghz: &a.freqs,
        },
        seed,
    );
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["shape", "parameters", "freq_ghz", "theta_deg", "rcs_m2", "rcs_dbsm"])?;
    for s in &shapes {
        for &f in &a.freqs {
            for r in rows(s, f)? {
                // grazing plate and other nulls have no dB value
                let db = if r.rcs > 0.0 {
                    format!("{:.4}", linear_to_db(r.rcs)?)
                } else {
                    "null".into()
                };
                w.write_record([
                    r.shape.to_string(),
                    r.params,
                    f.to_string(),
                    r.theta_deg.to_string(),
                    format!("{:.6e}", r.rcs),
                    db,
                ])?;
            }
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
