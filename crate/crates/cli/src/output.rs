use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    /// One plain line per record; only partition listings use it.
    Text,
}

/// Where and how a command writes its table.
pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Sink {
    fn write_bytes(&self, bytes: &[u8]) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }

    /// A single record: a JSON object, or a one-row CSV table.
    pub fn record<T: Serialize>(&self, row: &T) -> Result<(), CliError> {
        match self.format {
            Format::Json => self.json(row),
            Format::Csv => self.csv(std::slice::from_ref(row)),
            Format::Text => Err(CliError::Usage("text output is only available for partition listings".into())),
        }
    }

    /// A table: a JSON array, or CSV with a header row.
    pub fn table<T: Serialize>(&self, rows: &[T]) -> Result<(), CliError> {
        match self.format {
            Format::Json => self.json(&rows),
            Format::Csv => self.csv(rows),
            Format::Text => Err(CliError::Usage("text output is only available for partition listings".into())),
        }
    }

    pub fn json<T: Serialize + ?Sized>(&self, value: &T) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        self.write_bytes(s.as_bytes())
    }

    fn csv<T: Serialize>(&self, rows: &[T]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        self.write_bytes(&bytes)
    }

    pub fn lines<I: IntoIterator<Item = String>>(&self, lines: I) -> Result<(), CliError> {
        let mut buf = String::new();
        for l in lines {
            buf.push_str(&l);
            buf.push('\n');
        }
        self.write_bytes(buf.as_bytes())
    }
}
