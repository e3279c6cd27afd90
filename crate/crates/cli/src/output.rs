//! Formatting and writing of CSV and JSON artifacts.

use std::io::Write;

use serde::Serialize;

use crate::commands::CliError;

/// 17 significant digits, `.` decimal separator.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_table<H: AsRef<[u8]>>(header: &[H], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.into_inner().map_err(|e| CliError::Usage(e.to_string()))
}

pub fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes the whole artifact at once, to `path` or standard output.
pub fn emit(path: Option<&str>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Usage(format!("cannot write {p}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}
