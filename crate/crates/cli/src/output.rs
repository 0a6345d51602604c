//! Deterministic rendering: pretty JSON or CSV, floats in reports rounded
//! to 15 significant digits.

use std::fs;
use std::io::{self, Write};

use serde::Serialize;

use crate::{Common, Format};

pub type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

/// `x` rounded to 15 significant digits; JSON then prints it exactly.
pub fn sig15(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.14e}").parse().expect("formatted float parses")
    } else {
        x
    }
}

pub fn float(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Renders `header` and `rows` as CSV with a trailing newline.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Writes the rendered document to `--out` or stdout.
pub fn emit(common: &Common, text: &str) -> CliResult<()> {
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn render<T: Serialize>(
    common: &Common,
    value: &T,
    header: &[&str],
    rows: impl FnOnce() -> Vec<Vec<String>>,
) -> CliResult<()> {
    let text = match common.format {
        Format::Json => json(value)?,
        Format::Csv => csv_table(header, rows())?,
    };
    emit(common, &text)
}
