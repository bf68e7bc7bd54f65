//! CSV and JSON emission.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::Result;

/// 17 significant digits, enough to round-trip an `f64`.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Header, rows, then a `# config-sha256=` trailer.
pub fn write_csv<W: Write>(
    w: W,
    cfg: &RunConfig,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(row)?;
    }
    out.flush()?;
    let mut w = out.into_inner().map_err(|e| e.into_error())?;
    writeln!(w, "# config-sha256={}", cfg.hash())?;
    w.flush()?;
    Ok(())
}

/// Rows as an array of objects keyed by the header, with the config echo.
pub fn rows_json(cfg: &RunConfig, header: &[&str], rows: &[Vec<String>]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let obj = header
                .iter()
                .zip(r)
                .map(|(k, v)| {
                    let v = v.parse::<f64>().ok().filter(|x| x.is_finite()).map_or_else(
                        || if v.is_empty() { Value::Null } else { json!(v) },
                        |x| json!(x),
                    );
                    (k.to_string(), v)
                })
                .collect::<serde_json::Map<_, _>>();
            Value::Object(obj)
        })
        .collect();
    envelope(cfg, json!(rows))
}

pub fn envelope<T: Serialize>(cfg: &RunConfig, result: T) -> Value {
    json!({
        "config": cfg.canonical(),
        "config_sha256": cfg.hash(),
        "seed": cfg.seed,
        "result": result,
    })
}

pub fn write_json<W: Write>(mut w: W, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// A table in the configured format.
pub fn emit_table(cfg: &RunConfig, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let w = sink(cfg.out.as_deref())?;
    match cfg.format {
        crate::config::Format::Csv => write_csv(w, cfg, header, rows),
        crate::config::Format::Json => write_json(w, &rows_json(cfg, header, rows)),
    }
}
