//! Check records, CSV tables and the JSON summary.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::spec::{Format, ResolvedSpec};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub observed: Value,
    pub expected: Value,
    pub tolerance: Value,
    /// Report-only checks are listed but do not set the exit code.
    pub blocking: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        passed: bool,
        observed: impl Into<Value>,
        expected: impl Into<Value>,
        tolerance: impl Into<Value>,
    ) -> Self {
        Check {
            name: name.into(),
            passed,
            observed: observed.into(),
            expected: expected.into(),
            tolerance: tolerance.into(),
            blocking: true,
        }
    }

    pub fn report_only(mut self) -> Self {
        self.blocking = false;
        self
    }
}

/// Rows of one CSV file.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let row: Vec<String> = row.into_iter().map(|x| x.to_string()).collect();
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(CliError::io)?;
        for r in &self.rows {
            w.write_record(r).map_err(CliError::io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::io(e.into_error()))?;
        String::from_utf8(bytes).map_err(CliError::io)
    }
}

pub struct Outcome {
    pub table: Table,
    pub checks: Vec<Check>,
}

#[derive(Serialize)]
struct Summary<'a> {
    spec: &'a ResolvedSpec,
    checks: &'a [Check],
    runtime_seconds: f64,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.blocking)
    }

    /// Write the CSV body and JSON summary; returns whether every blocking
    /// check passed.
    pub fn emit(&self, spec: &ResolvedSpec, runtime_seconds: f64) -> Result<bool, CliError> {
        let csv = self.table.to_csv()?;
        let summary = Summary {
            spec,
            checks: &self.checks,
            runtime_seconds,
        };
        let json = serde_json::to_string_pretty(&summary).map_err(CliError::io)? + "\n";
        for c in &self.checks {
            let verdict = match (c.passed, c.blocking) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "NOTE",
            };
            eprintln!("{verdict} {}: observed {} expected {}", c.name, c.observed, c.expected);
        }
        match &spec.out {
            Some(dir) => {
                let dir = Path::new(dir);
                fs::create_dir_all(dir).map_err(CliError::io)?;
                let stem = spec.experiment.id();
                fs::write(dir.join(format!("{stem}.csv")), csv).map_err(CliError::io)?;
                fs::write(dir.join(format!("{stem}.json")), json).map_err(CliError::io)?;
            }
            None => {
                let body = match spec.format {
                    Format::Csv => csv,
                    Format::Json => json,
                };
                std::io::stdout().write_all(body.as_bytes()).map_err(CliError::io)?;
            }
        }
        Ok(self.passed())
    }
}
