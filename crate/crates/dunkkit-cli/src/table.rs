//! Tabular output: a small column/row container that renders to CSV or
//! JSON, with typed cells so numbers stay numbers in JSON.

use std::io::Write as _;
use std::path::PathBuf;

use crate::CliError;

/// Four-significant-digit scientific notation (`9.136e0`), the house style
/// for every numeric column.
pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

#[derive(Clone, Debug, serde::Serialize)]
#[serde(untagged)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
    /// A machine-checkable comparison outcome; renders as `pass`/`FAIL`.
    Status(bool),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    /// Placeholder for a value that is reported but not checked.
    pub fn unchecked() -> Self {
        Cell::Text("-".to_owned())
    }

    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => sci(*x),
            Cell::Status(ok) => (if *ok { "pass" } else { "FAIL" }).to_owned(),
        }
    }
}

/// `pass` when `value` is within the relative tolerance of `expected`.
pub fn status_rel(value: f64, expected: f64, rtol: f64) -> Cell {
    let scale = expected.abs().max(f64::MIN_POSITIVE);
    Cell::Status((value - expected).abs() <= rtol * scale)
}

/// `pass` when `value` is within the absolute tolerance of `expected`.
pub fn status_abs(value: f64, expected: f64, atol: f64) -> Cell {
    Cell::Status((value - expected).abs() <= atol)
}

#[derive(Debug, serde::Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            title: title.into(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn render_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    /// (passed, total) over all `Status` cells; `None` when the table
    /// carries no checks.
    pub fn pass_summary(&self) -> Option<(usize, usize)> {
        let mut passed = 0;
        let mut total = 0;
        for row in &self.rows {
            for cell in row {
                if let Cell::Status(ok) = cell {
                    total += 1;
                    passed += usize::from(*ok);
                }
            }
        }
        (total > 0).then_some((passed, total))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Where and how table-shaped output is written.
#[derive(Debug, clap::Args)]
pub struct OutputOpts {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format (commands that emit a single JSON record ignore this).
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

impl OutputOpts {
    pub fn write(&self, body: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, body)?,
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(body.as_bytes())?;
            }
        }
        Ok(())
    }

    /// Render a table per `--format`, write it, and summarize any checks
    /// on stderr.
    pub fn emit_table(&self, table: &Table) -> Result<(), CliError> {
        let body = match self.format {
            Format::Csv => table.render_csv(),
            Format::Json => table.render_json(),
        };
        self.write(&body)?;
        if let Some((passed, total)) = table.pass_summary() {
            eprintln!("{}: {passed}/{total} checks pass", table.title);
        }
        Ok(())
    }

    /// Write a JSON document (for record-shaped outputs).
    pub fn emit_json(&self, value: &serde_json::Value) -> Result<(), CliError> {
        let mut body = serde_json::to_string_pretty(value).expect("value serializes");
        body.push('\n');
        self.write(&body)
    }
}
