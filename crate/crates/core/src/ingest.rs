//! Recording CSV parsing, corpus discovery and window segmentation.
//!
//! A recording file holds one `x,y,z` sample per line, optionally preceded
//! by a single header line. Rows with four fields are read as
//! `timestamp,x,y,z`; the timestamp is dropped because samples are taken to
//! be uniform at the declared rate.
//!
//! A corpus is a directory with one subdirectory per user
//! (`data/<user_label>/<recording>.csv`).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{Recording, Window, DEFAULT_WINDOW_WIDTH};

/// Parses recording CSV text.
pub fn parse_recording(text: &str, user_id: usize, rate_hz: f64) -> Result<Recording> {
    let mut xyz = Vec::new();
    let mut first_content_line = true;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if first_content_line {
            first_content_line = false;
            if fields[0].parse::<f64>().is_err() {
                continue;
            }
        }
        let values = match fields.len() {
            3 => &fields[..],
            4 => &fields[1..],
            n => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 3 fields (x,y,z), found {n}"),
                })
            }
        };
        let mut sample = [0.0; 3];
        for (axis, field) in values.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("`{field}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    line: line_no,
                    column: axis + 1,
                    value: (*field).to_string(),
                });
            }
            sample[axis] = v;
        }
        xyz.push(sample);
    }
    if xyz.is_empty() {
        return Err(Error::EmptyRecording);
    }
    Recording::from_xyz(user_id, rate_hz, xyz)
}

/// Reads and parses one recording file.
pub fn read_recording(path: &Path, user_id: usize, rate_hz: f64) -> Result<Recording> {
    let text = fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
    parse_recording(&text, user_id, rate_hz).map_err(|e| e.in_file(path))
}

/// Writes a recording in the format [`parse_recording`] reads.
pub fn write_recording<W: Write>(rec: &Recording, mut out: W) -> Result<()> {
    writeln!(out, "x,y,z")?;
    for s in rec.samples() {
        writeln!(out, "{},{},{}", s.x, s.y, s.z)?;
    }
    Ok(())
}

/// Window geometry: width in samples and the fraction shared by neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub width: usize,
    pub overlap_fraction: f64,
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec {
            width: DEFAULT_WINDOW_WIDTH,
            overlap_fraction: 0.5,
        }
    }
}

impl WindowSpec {
    pub fn new(width: usize, overlap_fraction: f64) -> Result<Self> {
        let spec = WindowSpec {
            width,
            overlap_fraction,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 2 {
            return Err(Error::InvalidParameter(format!(
                "window width must be at least 2, got {}",
                self.width
            )));
        }
        if !(0.0..1.0).contains(&self.overlap_fraction) {
            return Err(Error::InvalidParameter(format!(
                "overlap fraction must lie in [0, 1), got {}",
                self.overlap_fraction
            )));
        }
        if self.step() < 1 {
            return Err(Error::InvalidParameter(format!(
                "width {} with overlap {} gives a zero step",
                self.width, self.overlap_fraction
            )));
        }
        Ok(())
    }

    /// Distance between consecutive window starts.
    pub fn step(&self) -> usize {
        (self.width as f64 * (1.0 - self.overlap_fraction)).round() as usize
    }

    /// Start offsets of every full window in a stream of `n` samples.
    pub fn offsets(&self, n: usize) -> Vec<usize> {
        if n < self.width {
            return Vec::new();
        }
        let count = (n - self.width) / self.step() + 1;
        (0..count).map(|i| i * self.step()).collect()
    }

    /// Samples needed to yield exactly `windows` windows.
    pub fn samples_for(&self, windows: usize) -> usize {
        match windows {
            0 => 0,
            w => self.width + (w - 1) * self.step(),
        }
    }
}

/// Cuts a recording into full-width overlapping windows. Trailing samples
/// that do not fill a window are dropped.
pub fn segment_windows(rec: &Recording, spec: WindowSpec) -> Result<Vec<Window>> {
    spec.validate()?;
    let samples = rec.samples();
    spec.offsets(samples.len())
        .into_iter()
        .map(|start| {
            let slice = &samples[start..start + spec.width];
            Window::new(
                slice.iter().map(|s| s.x).collect(),
                slice.iter().map(|s| s.y).collect(),
                slice.iter().map(|s| s.z).collect(),
                rec.rate_hz(),
                rec.user_id(),
            )
        })
        .collect()
}

/// Maps user names (corpus directory names) to dense labels `0..K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    pub names: Vec<String>,
}

impl LabelMap {
    /// Sorts names numerically when they are all integers, lexically
    /// otherwise, and assigns labels in that order.
    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        if names.iter().all(|n| n.parse::<u64>().is_ok()) {
            names.sort_by_key(|n| n.parse::<u64>().unwrap_or(0));
        }
        LabelMap { names }
    }

    /// Identity map `"0", "1", ...` for datasets without named users.
    pub fn numeric(class_count: usize) -> Self {
        LabelMap {
            names: (0..class_count).map(|i| i.to_string()).collect(),
        }
    }

    pub fn label_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name_of(&self, label: usize) -> Option<&str> {
        self.names.get(label).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// A recording file discovered in a corpus directory.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordingFile {
    pub path: PathBuf,
    pub rate_hz: f64,
    pub user_label: String,
}

/// Lists `<root>/<user>/*.csv` files, sorted by user then file name, with
/// the label map implied by the user directories.
pub fn discover_corpus(root: &Path, rate_hz: f64) -> Result<(LabelMap, Vec<RecordingFile>)> {
    let mut users = Vec::new();
    for entry in fs::read_dir(root).map_err(|e| Error::from(e).in_file(root))? {
        let entry = entry?;
        if entry.file_type()?.is_dir() {
            users.push(entry.file_name().to_string_lossy().into_owned());
        }
    }
    let labels = LabelMap::from_names(users);
    let mut files = Vec::new();
    for user in &labels.names {
        let dir = root.join(user);
        let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(|e| Error::from(e).in_file(&dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "csv"))
            .collect();
        paths.sort();
        files.extend(paths.into_iter().map(|path| RecordingFile {
            path,
            rate_hz,
            user_label: user.clone(),
        }));
    }
    Ok((labels, files))
}
