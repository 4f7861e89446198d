use std::fs::File;
use std::io::Read;
use std::path::Path;

use mfdfa::{log_returns, SeriesKind, TimeSeries};
use serde::{Deserialize, Serialize};

use crate::config::{ColumnSelector, InputKind};
use crate::error::{CliError, Result};

/// What was read from the input and how it was turned into the analysed
/// series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub column: String,
    pub header: bool,
    /// Data rows read from the file.
    pub rows: usize,
    pub kind: InputKind,
    /// True when prices were converted to log returns.
    pub log_returns: bool,
    /// Length of the analysed series.
    pub length: usize,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub series: TimeSeries<f64>,
    pub summary: InputSummary,
}

pub fn ingest(path: &Path, column: &ColumnSelector, kind: InputKind, delimiter: u8) -> Result<Ingested> {
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::FileNotFound(path.to_path_buf()),
        _ => CliError::Read {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    ingest_reader(file, column, kind, delimiter).map_err(|e| match e {
        CliError::Read { source, .. } => CliError::Read {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// [`ingest`] over any reader; row numbers are 1-based lines.
pub fn ingest_reader<R: Read>(
    reader: R,
    column: &ColumnSelector,
    kind: InputKind,
    delimiter: u8,
) -> Result<Ingested> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .delimiter(delimiter)
        .from_reader(reader);

    let mut index: Option<usize> = match column {
        ColumnSelector::Index(i) => Some(*i),
        ColumnSelector::Name(_) => None,
    };
    let mut label: Option<String> = None;
    let mut header = false;
    let mut first = true;
    let mut values = Vec::new();

    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(e, &label, index))?;
        let row = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if first {
            first = false;
            match column {
                ColumnSelector::Name(name) => {
                    let found = record.iter().position(|f| f == name).ok_or_else(|| {
                        CliError::Config(format!(
                            "column `{name}` not in header [{}]",
                            record.iter().collect::<Vec<_>>().join(", ")
                        ))
                    })?;
                    index = Some(found);
                    label = Some(name.clone());
                    header = true;
                    continue;
                }
                ColumnSelector::Index(i) => {
                    if let Some(field) = record.get(*i) {
                        if field.parse::<f64>().is_err() {
                            label = Some(field.to_string());
                            header = true;
                            continue;
                        }
                    }
                }
            }
        }
        let col = index.expect("column resolved on the first row");
        let column_name = || label.clone().unwrap_or_else(|| format!("#{col}"));
        let field = record.get(col).ok_or_else(|| CliError::Parse {
            row,
            column: column_name(),
            message: format!("row has {} fields", record.len()),
        })?;
        let value: f64 = field
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| CliError::Parse {
                row,
                column: column_name(),
                message: format!("`{field}` is not a finite number"),
            })?;
        if kind == InputKind::Price && value <= 0.0 {
            return Err(CliError::Parse {
                row,
                column: column_name(),
                message: format!("price {value} is not positive"),
            });
        }
        values.push(value);
    }

    let rows = values.len();
    let column_label = label.unwrap_or_else(|| format!("#{}", index.unwrap_or(0)));
    let raw = TimeSeries::new(
        values,
        column_label.clone(),
        match kind {
            InputKind::Price => SeriesKind::Price,
            InputKind::Return => SeriesKind::Return,
        },
    )?;
    let series = match kind {
        InputKind::Price => log_returns(&raw)?,
        InputKind::Return => raw,
    };
    Ok(Ingested {
        summary: InputSummary {
            column: column_label,
            header,
            rows,
            kind,
            log_returns: kind == InputKind::Price,
            length: series.len(),
        },
        series,
    })
}

fn csv_error(err: csv::Error, label: &Option<String>, index: Option<usize>) -> CliError {
    let row = err.position().map_or(0, |p| p.line());
    match err.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Read {
            path: Default::default(),
            source,
        },
        other => CliError::Parse {
            row,
            column: label
                .clone()
                .unwrap_or_else(|| index.map_or_else(|| "?".into(), |i| format!("#{i}"))),
            message: format!("{other:?}"),
        },
    }
}
