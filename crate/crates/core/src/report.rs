//! Report files: `<prefix>.report.json` and `<prefix>.csv`.
//!
//! CSV floats use `{:.16e}` (17 significant digits, '.' separator) so values
//! round-trip bit for bit; JSON uses serde_json's shortest round-trip form.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

/// Float formatting for CSV cells.
pub fn fmt_f(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

#[derive(Clone, Debug, Default)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_to(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| escape(c)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// `<prefix><suffix>`, creating the parent directory.
pub fn output_path(prefix: &str, suffix: &str) -> Result<PathBuf> {
    let path = PathBuf::from(format!("{prefix}{suffix}"));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(path)
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize> {
    command: &'a str,
    status: &'a str,
    config: &'a C,
    result: &'a Value,
}

/// Writes `<prefix>.report.json` embedding the resolved configuration.
pub fn write_report<C: Serialize>(
    prefix: &str,
    command: &str,
    ok: bool,
    config: &C,
    result: &Value,
) -> Result<PathBuf> {
    let path = output_path(prefix, ".report.json")?;
    let env = Envelope {
        command,
        status: if ok { "ok" } else { "failed" },
        config,
        result,
    };
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

pub fn write_csv(prefix: &str, suffix: &str, table: &CsvTable) -> Result<PathBuf> {
    let path = output_path(prefix, suffix)?;
    let mut buf = Vec::new();
    table.write_to(&mut buf)?;
    fs::write(&path, buf)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 13.928203230275509, 6.02e23, -2.5e-300] {
            let s = fmt_f(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
        assert_eq!(fmt_f(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_quoting() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.push(vec!["1".into(), "x, y".into()]);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,\"x, y\"\n");
    }
}
