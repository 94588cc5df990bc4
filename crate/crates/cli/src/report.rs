use serde::Serialize;
use serde_json::Value;

use crate::{CliError, CliResult, Format};

/// A finished report: a JSON document plus the flat rows used for CSV.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(json: impl Serialize) -> CliResult<Self> {
        let json = serde_json::to_value(json).map_err(|e| CliError::Invariant(e.to_string()))?;
        Ok(Self { json, csv_header: Vec::new(), csv_rows: Vec::new() })
    }

    pub fn with_table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.csv_header = header.iter().map(|s| s.to_string()).collect();
        self.csv_rows = rows;
        self
    }

    /// Adds `generated_at` (seconds since the Unix epoch).
    pub fn stamp(&mut self) {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        if let Value::Object(map) = &mut self.json {
            map.insert("generated_at".into(), Value::from(secs));
        }
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| CliError::Invariant(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| CliError::Invariant(e.to_string());
                w.write_record(&self.csv_header).map_err(io)?;
                for row in &self.csv_rows {
                    w.write_record(row).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Invariant(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Invariant(e.to_string()))
            }
        }
    }
}
