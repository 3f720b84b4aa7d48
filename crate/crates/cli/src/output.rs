//! Result sinks: human text or JSON on stdout, plus JSON/CSV files under
//! `--out`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;

use crate::spec::ExperimentSpec;

/// One CSV table. The first line written is a `#` comment carrying the spec
/// hash and seed.
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Whether the table is echoed to stdout when no `--out` is given.
    pub echo: bool,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            echo: true,
        }
    }

    /// Only written to files, never echoed.
    pub fn files_only(mut self) -> Self {
        self.echo = false;
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, command: &str, spec: &ExperimentSpec) -> Result<Vec<u8>> {
        let mut buf = format!("# eqpolar {command} spec_hash={} seed={}\n", spec.hash(), spec.seed()).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.header)?;
            for row in &self.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Ok(buf)
    }
}

/// Everything a command produces.
pub struct Report<R: Serialize> {
    pub command: &'static str,
    pub spec: ExperimentSpec,
    pub result: R,
    pub text: String,
    pub tables: Vec<Table>,
}

/// Prints the report and writes files. With `--json` stdout gets the JSON
/// document; otherwise it gets the text followed by any tables that were not
/// written to files.
pub fn emit<R: Serialize>(report: Report<R>, as_json: bool) -> Result<()> {
    let doc = json!({
        "command": report.command,
        "spec": report.spec,
        "spec_hash": report.spec.hash(),
        "result": report.result,
    });
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if as_json {
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)?;
    } else {
        write!(out, "{}", report.text)?;
    }
    match &report.spec.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path: PathBuf = dir.join(format!("{}.json", report.command));
            fs::write(&path, serde_json::to_vec_pretty(&doc)?).with_context(|| format!("writing {}", path.display()))?;
            for table in &report.tables {
                let path = dir.join(format!("{}.csv", table.name));
                fs::write(&path, table.render(report.command, &report.spec)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        None if !as_json => {
            for table in report.tables.iter().filter(|t| t.echo) {
                writeln!(out)?;
                out.write_all(&table.render(report.command, &report.spec)?)?;
            }
        }
        None => {}
    }
    Ok(())
}

/// Formats a float with enough digits to round-trip in CSV.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Makes a label safe to use in a file name.
pub fn file_label(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect::<String>()
        .trim_matches('_')
        .to_string()
}
