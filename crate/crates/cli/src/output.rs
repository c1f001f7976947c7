use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::args::{Format, Output};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// A report as JSON, optionally with a flat table for CSV output.
pub enum Report {
    Json(serde_json::Value),
    Table {
        json: serde_json::Value,
        header: &'static [&'static str],
        rows: Vec<Vec<String>>,
    },
}

impl Report {
    pub fn json_or_table(
        value: &impl Serialize,
        header: &'static [&'static str],
        rows: Vec<Vec<String>>,
    ) -> Result<Self, CliError> {
        Ok(Report::Table {
            json: serde_json::to_value(value).map_err(|e| CliError::Compute(e.to_string()))?,
            header,
            rows,
        })
    }

    fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match (self, format) {
            (Report::Json(json) | Report::Table { json, .. }, Format::Json) => {
                let mut text = serde_json::to_vec_pretty(json).map_err(|e| CliError::Compute(e.to_string()))?;
                text.push(b'\n');
                Ok(text)
            }
            (Report::Table { header, rows, .. }, Format::Csv) => {
                let mut out = csv::Writer::from_writer(Vec::new());
                let csv_err = |e: csv::Error| CliError::Compute(e.to_string());
                out.write_record(*header).map_err(csv_err)?;
                for row in rows {
                    out.write_record(row).map_err(csv_err)?;
                }
                out.into_inner().map_err(|e| CliError::Compute(e.to_string()))
            }
            (Report::Json(_), Format::Csv) => Err(CliError::Usage("this command has no CSV output".into())),
        }
    }

    pub fn emit(&self, out: &Output) -> Result<(), CliError> {
        let bytes = self.render(out.format)?;
        match &out.output {
            Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            }),
            None => std::io::stdout().write_all(&bytes).map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
        }
    }
}
