//! Record emission as JSONL or CSV.
//!
//! Both formats start with a header carrying the tool version, command, seed
//! and the full configuration: a `"record": "header"` object in JSONL, a `#`
//! comment line in CSV. Everything after it is data. CSV floats are written
//! with 17 significant digits so they parse back to the identical `f64`.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

pub type Record = Map<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Jsonl => "jsonl",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub config: Value,
}

impl Header {
    pub fn new(command: &str, seed: Option<u64>, config: Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            config,
        }
    }
}

/// Serialize any record struct into an ordered field map.
pub fn to_record<S: Serialize>(value: &S) -> Record {
    match serde_json::to_value(value).expect("records serialize to JSON") {
        Value::Object(map) => map,
        other => panic!("record must serialize to an object, got {other}"),
    }
}

/// CSV cell text for a JSON value.
pub fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => {
            if n.is_u64() || n.is_i64() {
                n.to_string()
            } else {
                format_float(n.as_f64().unwrap_or(f64::NAN))
            }
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Seventeen significant digits, scientific notation, no locale.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub struct Emitter<W: Write> {
    format: Format,
    out: W,
    columns: Option<Vec<String>>,
}

fn write_err(e: impl Into<std::io::Error>) -> CliError {
    CliError::io("writing output", e.into())
}

impl<W: Write> Emitter<W> {
    pub fn new(format: Format, out: W) -> Self {
        Self {
            format,
            out,
            columns: None,
        }
    }

    pub fn header(&mut self, header: &Header) -> Result<()> {
        match self.format {
            Format::Jsonl => {
                let mut rec = Record::new();
                rec.insert("record".into(), "header".into());
                rec.extend(to_record(header));
                serde_json::to_writer(&mut self.out, &rec).map_err(write_err)?;
                writeln!(self.out).map_err(write_err)
            }
            Format::Csv => {
                let config = serde_json::to_string(&header.config).map_err(write_err)?;
                let seed = header
                    .seed
                    .map_or_else(|| "none".to_string(), |s| s.to_string());
                writeln!(
                    self.out,
                    "# {} {} command={} seed={} config={}",
                    header.tool, header.version, header.command, seed, config
                )
                .map_err(write_err)
            }
        }
    }

    pub fn record(&mut self, rec: &Record) -> Result<()> {
        match self.format {
            Format::Jsonl => {
                serde_json::to_writer(&mut self.out, rec).map_err(write_err)?;
                writeln!(self.out).map_err(write_err)
            }
            Format::Csv => {
                let keys: Vec<String> = rec.keys().cloned().collect();
                let mut w = csv::WriterBuilder::new()
                    .has_headers(false)
                    .from_writer(&mut self.out);
                match &self.columns {
                    None => {
                        w.write_record(&keys).map_err(write_err)?;
                        self.columns = Some(keys);
                    }
                    Some(cols) if *cols != keys => {
                        return Err(CliError::Usage(format!(
                            "record columns {keys:?} differ from header {cols:?}"
                        )))
                    }
                    Some(_) => {}
                }
                w.write_record(rec.values().map(csv_cell))
                    .map_err(write_err)?;
                w.flush().map_err(write_err)
            }
        }
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush().map_err(write_err)?;
        Ok(self.out)
    }
}
