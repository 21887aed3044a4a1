//! Run reports: aligned key-value text plus an optional JSON sidecar.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// `None` when the check does not apply to this run.
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Field {
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputHash>,
    pub fields: Vec<Field>,
    pub checks: Vec<Check>,
    pub table: Option<Table>,
    pub timing_ms: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunReport {
    pub fn new(command: String) -> Self {
        RunReport {
            command,
            inputs: Vec::new(),
            fields: Vec::new(),
            checks: Vec::new(),
            table: None,
            timing_ms: 0.0,
        }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputHash {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push(Field {
            key: key.to_string(),
            value: value.to_string(),
        });
        self
    }

    pub fn check(&mut self, name: &str, passed: Option<bool>, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    /// False if any applicable check failed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed != Some(false))
    }

    pub fn finish(&mut self, elapsed: Duration) {
        self.timing_ms = elapsed.as_secs_f64() * 1e3;
    }

    pub fn to_text(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![("command".into(), self.command.clone())];
        for h in &self.inputs {
            rows.push((format!("input.sha256[{}]", h.path), h.sha256.clone()));
        }
        rows.extend(self.fields.iter().map(|f| (f.key.clone(), f.value.clone())));
        for c in &self.checks {
            let status = match c.passed {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "n/a",
            };
            let value = if c.detail.is_empty() {
                status.to_string()
            } else {
                format!("{status} ({})", c.detail)
            };
            rows.push((format!("check.{}", c.name), value));
        }
        let width = rows
            .iter()
            .map(|(k, _)| k.len())
            .max()
            .unwrap_or(0)
            .max("timing_ms".len());
        let mut out = String::new();
        for (k, v) in &rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        if let Some(t) = &self.table {
            out.push('\n');
            out.push_str(&t.to_text());
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "{:<width$}  {:.3}", "timing_ms", self.timing_ms);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Table {
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = line(&self.columns);
        for row in &self.rows {
            out.push('\n');
            out.push_str(&line(row));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn text_layout() {
        let mut r = RunReport::new("label --in g.el".into());
        r.field("n", 4);
        r.check("decode", Some(true), "");
        r.check("factor2", None, "custom ordering");
        let text = r.to_text();
        assert!(text.starts_with("command        label --in g.el\n"));
        assert!(text.contains("check.factor2  n/a (custom ordering)\n"));
        assert!(text.ends_with("timing_ms      0.000\n"));
        let short = RunReport::new("vc".into()).to_text();
        assert_eq!(short, "command    vc\ntiming_ms  0.000\n");
        assert!(r.all_passed());
        r.check("x", Some(false), "");
        assert!(!r.all_passed());
    }

    #[test]
    fn table_alignment() {
        let t = Table {
            columns: vec!["q".into(), "n".into()],
            rows: vec![vec!["5".into(), "20".into()], vec!["13".into(), "156".into()]],
        };
        assert_eq!(t.to_text(), " q    n\n 5   20\n13  156");
    }
}
