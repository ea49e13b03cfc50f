use crate::config::{Common, Format};
use crate::CliError;
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, B: Serialize> {
    schema_version: u32,
    command: &'a str,
    passed: bool,
    #[serde(flatten)]
    body: &'a B,
}

fn sink(common: &Common) -> Result<Box<dyn Write>, CliError> {
    Ok(match &common.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(std::io::stdout().lock()),
    })
}

/// Writes `rows` as CSV, or `body` wrapped in the versioned JSON envelope.
pub fn emit<T: Serialize, B: Serialize>(
    common: &Common,
    command: &str,
    passed: bool,
    rows: &[T],
    body: &B,
) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    let mut out = sink(common)?;
    match common.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
            }
            w.flush().map_err(io)?;
        }
        Format::Json => {
            let doc = Envelope { schema_version: SCHEMA_VERSION, command, passed, body };
            serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(out).map_err(io)?;
        }
    }
    out.flush().map_err(io)
}
