//! Featurized dataset CSV: a header of the 30 layout names plus `label`,
//! then one row per window. Values are written in shortest round-trip form,
//! so a write/read cycle reproduces every `f64` bit for bit.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::features::{feature_names, FEATURE_LAYOUT};
use crate::signal::{Dataset, FeatureVector, FEATURE_COUNT};

pub const LABEL_COLUMN: &str = "label";

pub fn write_dataset_csv<W: Write>(dataset: &Dataset, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(feature_names().chain([LABEL_COLUMN]))?;
    for row in dataset.rows() {
        w.write_record(
            row.values
                .iter()
                .map(f64::to_string)
                .chain([row.label.to_string()]),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a feature CSV. Columns are matched by name, so extra or reordered
/// columns are accepted. `class_count` defaults to the largest label + 1.
pub fn read_dataset_csv<R: Read>(input: R, class_count: Option<usize>) -> Result<Dataset> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let mut missing = Vec::new();
    let mut columns = [0usize; FEATURE_COUNT];
    for (slot, d) in FEATURE_LAYOUT.iter().enumerate() {
        match find(d.name) {
            Some(c) => columns[slot] = c,
            None => missing.push(d.name.to_string()),
        }
    }
    let label_column = find(LABEL_COLUMN);
    if label_column.is_none() {
        missing.push(LABEL_COLUMN.to_string());
    }
    let Some(label_column) = label_column.filter(|_| missing.is_empty()) else {
        return Err(Error::MissingColumns(missing));
    };

    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let field = |c: usize| record.get(c).map(str::trim).unwrap_or("");
        let mut values = [0.0; FEATURE_COUNT];
        for (slot, &c) in columns.iter().enumerate() {
            let raw = field(c);
            values[slot] = raw.parse().map_err(|_| Error::Parse {
                line,
                message: format!(
                    "`{raw}` is not a number in column {}",
                    FEATURE_LAYOUT[slot].name
                ),
            })?;
        }
        let raw = field(label_column);
        let label = raw.parse().map_err(|_| Error::Parse {
            line,
            message: format!("`{raw}` is not a class label"),
        })?;
        rows.push(FeatureVector { values, label });
    }
    match class_count {
        Some(k) => Dataset::new(rows, k),
        None => Dataset::from_rows(rows),
    }
}
