//! Report writing. CSV numbers carry 17 significant digits; `#` lines hold summaries.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use quatspec::{QMatrix, Quaternion};

use crate::commands::CliError;

/// Round-trip formatting of a double.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn quat_cells(q: Quaternion) -> String {
    q.to_array().map(num).join(",")
}

/// Accumulates CSV text.
#[derive(Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn comment(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.text, "# {}", line.as_ref());
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = String>) {
        let cells: Vec<String> = cells.into_iter().collect();
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    /// Rows `label,i,k,w,x,y,z` for every entry of `m`.
    pub fn matrix(&mut self, label: &str, m: &QMatrix) {
        for i in 0..m.dim() {
            for k in 0..m.dim() {
                self.row([label.to_string(), i.to_string(), k.to_string(), quat_cells(m[(i, k)])]);
            }
        }
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string(value).map_err(|e| CliError::Input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(e.to_string())),
    }
}
