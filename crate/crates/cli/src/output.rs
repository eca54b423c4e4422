//! Artifact writers. Floats carry 17 significant digits, JSON keys are sorted,
//! and files appear only once fully written.

use serde::Serialize;
use serde_json::{Number, Value};
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

pub const VERSION: &str = concat!("logfreq ", env!("CARGO_PKG_VERSION"));

pub fn float(x: f64) -> String {
    if x.is_finite() {
        let text = format!("{x:.16e}");
        match text.split_once('e') {
            Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
            _ => text,
        }
    } else {
        x.to_string()
    }
}

/// Serialize and rewrite every float with [`float`].
pub fn to_value<T: Serialize>(item: &T) -> Result<Value, CliError> {
    let mut value = serde_json::to_value(item).map_err(|e| CliError::Output(e.to_string()))?;
    normalize(&mut value);
    Ok(value)
}

fn normalize(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Ok(fixed) = Number::from_str(&float(x)) {
                    *n = fixed;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(normalize),
        Value::Object(map) => map.values_mut().for_each(normalize),
        _ => {}
    }
}

/// Top-level JSON document with `config` and `version` keys added.
pub fn json_document<C: Serialize>(config: &C, mut body: Value) -> Result<Vec<u8>, CliError> {
    let Value::Object(map) = &mut body else {
        return Err(CliError::Output("report body is not an object".into()));
    };
    map.insert("config".into(), to_value(config)?);
    map.insert("version".into(), Value::String(VERSION.into()));
    normalize(&mut body);
    let mut bytes =
        serde_json::to_vec_pretty(&body).map_err(|e| CliError::Output(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// CSV with `#` comment lines for the version, the resolved config and any extra notes.
pub struct CsvDocument {
    bytes: Vec<u8>,
}

impl CsvDocument {
    pub fn new<C: Serialize>(config: &C, notes: &[(String, String)]) -> Result<Self, CliError> {
        let config = serde_json::to_string(&to_value(config)?)
            .map_err(|e| CliError::Output(e.to_string()))?;
        let mut bytes = Vec::new();
        writeln!(bytes, "# version: {VERSION}")?;
        writeln!(bytes, "# config: {config}")?;
        for (key, value) in notes {
            writeln!(bytes, "# {key}: {value}")?;
        }
        Ok(Self { bytes })
    }

    pub fn rows<I, R>(mut self, header: &[&str], rows: I) -> Result<Vec<u8>, CliError>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        for row in rows {
            writer.write_record(row)?;
        }
        let body = writer
            .into_inner()
            .map_err(|e| CliError::Output(e.to_string()))?;
        self.bytes.extend(body);
        Ok(self.bytes)
    }
}

/// Stdout when `path` is `None`, otherwise a sibling temp file renamed into place.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
        }
    }
    Ok(())
}
