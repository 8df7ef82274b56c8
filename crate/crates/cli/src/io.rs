//! Reading and writing metric spaces as JSON or CSV.
//!
//! JSON: `{"labels": ["a", "b"], "distances": [["0", "1/2"], ["1/2", "0"]]}`
//! with every distance a string holding an integer, a decimal or `p/q`.
//! CSV: a header row of labels followed by the square matrix.

use std::fmt;
use std::path::Path;

use loometric::rational::{format_rational, parse_rational};
use loometric::{FiniteMetricSpace, MetricError, Rational};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// Guesses from the extension; anything but `.csv` is JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}, expected json or csv")),
        }
    }
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Validation {
        path: String,
        #[source]
        source: MetricError,
    },
}

/// A rational carried through serde as its string form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visitor;
        impl de::Visitor<'_> for Visitor {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational number as a string, such as \"3/4\" or \"0.75\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                parse_rational(v).map(Exact).map_err(E::custom)
            }
        }
        d.deserialize_str(Visitor)
    }
}

impl Serialize for Exact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    labels: Vec<String>,
    distances: Vec<Vec<Exact>>,
}

pub fn parse_space(path: &Path, format: Format) -> Result<FiniteMetricSpace, InputError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: name.clone(),
        source,
    })?;
    parse_space_str(&text, format, &name)
}

/// Parses file contents; `name` only labels error messages.
pub fn parse_space_str(text: &str, format: Format, name: &str) -> Result<FiniteMetricSpace, InputError> {
    let (labels, matrix) = match format {
        Format::Json => parse_json(text, name)?,
        Format::Csv => parse_csv(text, name)?,
    };
    loometric::validate_metric(labels, matrix).map_err(|source| InputError::Validation {
        path: name.to_string(),
        source,
    })
}

fn parse_json(text: &str, name: &str) -> Result<(Vec<String>, Vec<Vec<Rational>>), InputError> {
    let file: SpaceFile = serde_json::from_str(text).map_err(|e| InputError::Parse {
        path: name.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let matrix = file
        .distances
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.0).collect())
        .collect();
    Ok((file.labels, matrix))
}

/// serde_json appends " at line L column C"; the error already carries both.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(k) => message[..k].to_string(),
        None => message.to_string(),
    }
}

fn parse_csv(text: &str, name: &str) -> Result<(Vec<String>, Vec<Vec<Rational>>), InputError> {
    let parse_error = |line: usize, column: usize, message: String| InputError::Parse {
        path: name.to_string(),
        line,
        column,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let labels: Vec<String> = reader
        .headers()
        .map_err(|e| parse_error(1, 1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let n = labels.len();
    let mut matrix = Vec::with_capacity(n);
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != n {
            return Err(parse_error(
                line,
                1,
                format!("row has {} entries, expected {n}", record.len()),
            ));
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                parse_rational(field).map_err(|e| parse_error(line, col + 1, e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        matrix.push(row);
    }
    if matrix.len() != n {
        return Err(parse_error(
            matrix.len() + 2,
            1,
            format!("matrix has {} rows, expected {n}", matrix.len()),
        ));
    }
    Ok((labels, matrix))
}

pub fn space_to_json(space: &FiniteMetricSpace) -> serde_json::Value {
    let file = SpaceFile {
        labels: space.labels().to_vec(),
        distances: (0..space.len())
            .map(|i| space.row(i).iter().cloned().map(Exact).collect())
            .collect(),
    };
    serde_json::to_value(file).expect("plain data serializes")
}

pub fn write_space(space: &FiniteMetricSpace, format: Format) -> String {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&space_to_json(space)).expect("serializable");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(space.labels()).expect("in-memory write");
            for i in 0..space.len() {
                writer
                    .write_record(space.row(i).iter().map(format_rational))
                    .expect("in-memory write");
            }
            String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
        }
    }
}
