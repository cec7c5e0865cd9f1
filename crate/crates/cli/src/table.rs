//! Tabular results with provenance.
//!
//! Every run produces one [`ResultTable`]: named numeric columns plus
//! metadata comments that make the CSV self-describing — tool version,
//! protocol tag, seed, the exact resolved configuration, free-form notes, and
//! the outcome of each internal consistency check. A file written by this
//! tool can therefore be reproduced from its own header.

use std::fmt::Write as _;

use crate::config::{emit_config, RunConfig};

#[derive(Debug, Clone)]
pub struct ResultTable {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    metadata: Vec<(String, String)>,
    notes: Vec<String>,
    checks: Vec<(&'static str, bool)>,
}

impl ResultTable {
    /// Start a table for one run. `protocol` is a short human label for what
    /// was simulated; the config echo embeds the full parameter set.
    pub fn new(protocol: &str, cfg: &RunConfig, columns: Vec<&'static str>) -> Self {
        let mut metadata = vec![
            ("tool".to_string(), format!("aqg {}", env!("CARGO_PKG_VERSION"))),
            ("protocol".to_string(), protocol.to_string()),
            ("seed".to_string(), cfg.seed.to_string()),
        ];
        for line in emit_config(cfg).lines() {
            metadata.push(("config".to_string(), line.to_string()));
        }
        ResultTable { columns, rows: Vec::new(), metadata, notes: Vec::new(), checks: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row arity {} does not match {} columns",
            row.len(),
            self.columns.len()
        );
        self.rows.push(row);
    }

    /// Attach a derived scalar (effective defaults, summary figures, …).
    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn meta_float(&mut self, key: &str, value: f64) {
        self.metadata.push((key.to_string(), format!("{value:.12e}")));
    }

    /// Free-form caveat surfaced in the header.
    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Record an internal consistency check. Failed checks still emit (the
    /// data may be the point), but they block `--regen-golden`.
    pub fn check(&mut self, label: &'static str, pass: bool) {
        self.checks.push((label, pass));
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(l, _)| *l).collect()
    }

    /// Render the table: `# key: value` header comments, then the CSV header
    /// row, then data rows at full float precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            let _ = writeln!(out, "# {key}: {value}");
        }
        for note in &self.notes {
            let _ = writeln!(out, "# note: {note}");
        }
        for (label, pass) in &self.checks {
            let _ = writeln!(out, "# check: {label}: {}", if *pass { "pass" } else { "FAIL" });
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn csv_layout_is_stable() {
        let cfg = parse_config("[laser-timing]\ndelay = 70 ns\n", "laser-timing").unwrap();
        let mut t = ResultTable::new("demo", &cfg, vec!["a", "b"]);
        t.push_row(vec![1.0, 2.0]);
        t.meta("extra", "x");
        t.check("sane", true);
        let csv = t.to_csv();
        assert!(csv.starts_with("# tool: aqg "));
        assert!(csv.contains("# protocol: demo\n"));
        assert!(csv.contains("# config: [laser-timing]\n"));
        assert!(csv.contains("# check: sane: pass\n"));
        let mut lines = csv.lines().rev();
        assert_eq!(lines.next().unwrap(), "1.000000000000e0,2.000000000000e0");
        assert_eq!(lines.next().unwrap(), "a,b");
    }

    #[test]
    #[should_panic(expected = "row arity")]
    fn arity_mismatch_panics() {
        let cfg = parse_config("[laser-timing]\ndelay = 70 ns\n", "laser-timing").unwrap();
        let mut t = ResultTable::new("demo", &cfg, vec!["a", "b"]);
        t.push_row(vec![1.0]);
    }
}
