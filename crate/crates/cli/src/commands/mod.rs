pub mod canonical;
pub mod eval;
pub mod fit;
pub mod ingest;
pub mod report;
pub mod simulate;
pub mod synth;

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use rcs_core::{builtin_model, UnifiedRcsModel};
use serde::Serialize;

/// Echo the resolved configuration and seed to stderr.
pub fn announce<T: Serialize>(command: &str, config: &T, seed: u64) {
    let json = serde_json::to_string(config).unwrap_or_else(|_| "{}".into());
    eprintln!("rcs {command}: resolved config {json}");
    eprintln!("rcs {command}: seed {seed}");
}

/// A builtin label (`uav`, `vehicle`, `human`) or a model JSON file.
pub fn load_model(spec: &str) -> anyhow::Result<UnifiedRcsModel> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(rcs_core::Error::from)?;
        // accept either a bare model or a fit report wrapping one
        let model = match value.get("model") {
            Some(m) => serde_json::to_string(m).map_err(rcs_core::Error::from)?,
            None => text,
        };
        Ok(UnifiedRcsModel::from_json(&model)?)
    } else {
        Ok(builtin_model(spec)?)
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(bytes)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
