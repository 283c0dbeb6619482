use crate::Result;
use qmh_filter::PipelineResult;
use std::fs;
use std::path::Path;

/// Float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a CSV with `header` and `rows`, creating parent directories.
pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes pipeline results as a pretty JSON array.
pub fn write_results(path: &Path, results: &[PipelineResult]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, serde_json::to_string_pretty(results)?)?;
    Ok(())
}

/// Reads a JSON array of pipeline results.
pub fn read_results(path: &Path) -> Result<Vec<PipelineResult>> {
    let text = fs::read_to_string(path).map_err(|e| crate::CliError::Results(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| crate::CliError::Results(format!("{}: {e}", path.display())))
}

/// Energy-level label used in metric keys and CSV columns.
pub fn level_key(level: f64) -> String {
    format!("{level}")
}
