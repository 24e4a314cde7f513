//! Text and CSV formatting.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::CliError;

/// Six significant digits, fixed notation where it stays readable.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (5 - mag).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

/// Seventeen significant digits: enough to round-trip any `f64`.
pub fn full(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes rows of numbers under `header` to `out`, or stdout when `None`.
pub fn write_csv(out: Option<&Path>, header: &[String], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).map_err(|e| CliError::Io(path.display().to_string(), e))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| full(x)))?;
    }
    w.flush().map_err(|e| CliError::Io("csv".into(), e))?;
    Ok(())
}
