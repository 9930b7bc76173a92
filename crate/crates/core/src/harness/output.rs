//! CSV and manifest writers. Reals are printed with 17 significant digits so
//! they round-trip exactly; integers are printed exactly.

use std::fs;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::HarnessError;

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes a header plus rows to `<dir>/<name>`.
pub fn write_csv(dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf, HarnessError> {
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path).map_err(|e| HarnessError::Io {
        path: path.clone(),
        source: e.into(),
    })?;
    let csv_err = |e: csv::Error| HarnessError::Io {
        path: path.clone(),
        source: e.into(),
    };
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(&path))?;
    Ok(path)
}

/// Writes the config echo as `<dir>/<experiment>.manifest`; the file is
/// itself a valid config.
pub fn write_manifest(dir: &Path, cfg: &ExperimentConfig) -> Result<PathBuf, HarnessError> {
    let path = dir.join(format!("{}.manifest", cfg.experiment.name()));
    let mut text = format!("# fqnm-lab {}\n", env!("CARGO_PKG_VERSION"));
    for (key, value) in cfg.manifest_entries() {
        text.push_str(&format!("{key} = {value}\n"));
    }
    fs::write(&path, text).map_err(io_err(&path))?;
    Ok(path)
}

pub fn ensure_dir(dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}
