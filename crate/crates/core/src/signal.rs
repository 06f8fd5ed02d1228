//! Domain types shared across the pipeline.
//!
//! Everything here is immutable once built; the constructors are the only
//! place invariants are checked.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample rate of the reference capture setup.
pub const DEFAULT_RATE_HZ: f64 = 50.0;

/// Width, in samples, of one identification window.
pub const DEFAULT_WINDOW_WIDTH: usize = 100;

/// Number of entries in a [`FeatureVector`].
pub const FEATURE_COUNT: usize = 30;

/// One tri-axial accelerometer reading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxialSample {
    pub t: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A labeled, uniformly sampled accelerometer stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    user_id: usize,
    rate_hz: f64,
    samples: Vec<AxialSample>,
}

impl Recording {
    /// Builds a recording from `(x, y, z)` triples in time order. Sample
    /// indices are assigned `0..n`.
    pub fn from_xyz<I>(user_id: usize, rate_hz: f64, xyz: I) -> Result<Self>
    where
        I: IntoIterator<Item = [f64; 3]>,
    {
        if !(rate_hz.is_finite() && rate_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sample rate must be positive, got {rate_hz}"
            )));
        }
        let mut samples = Vec::new();
        for (t, [x, y, z]) in xyz.into_iter().enumerate() {
            for (column, v) in [x, y, z].into_iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        line: t + 1,
                        column: column + 1,
                        value: v.to_string(),
                    });
                }
            }
            samples.push(AxialSample { t, x, y, z });
        }
        Ok(Recording {
            user_id,
            rate_hz,
            samples,
        })
    }

    pub fn user_id(&self) -> usize {
        self.user_id
    }

    pub fn rate_hz(&self) -> f64 {
        self.rate_hz
    }

    pub fn samples(&self) -> &[AxialSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// A fixed-width slice of a recording, stored per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub series_x: Vec<f64>,
    pub series_y: Vec<f64>,
    pub series_z: Vec<f64>,
    pub rate_hz: f64,
    pub user_id: usize,
}

impl Window {
    pub fn new(
        series_x: Vec<f64>,
        series_y: Vec<f64>,
        series_z: Vec<f64>,
        rate_hz: f64,
        user_id: usize,
    ) -> Result<Self> {
        if series_x.len() != series_y.len() {
            return Err(Error::LengthMismatch {
                left: series_x.len(),
                right: series_y.len(),
            });
        }
        if series_x.len() != series_z.len() {
            return Err(Error::LengthMismatch {
                left: series_x.len(),
                right: series_z.len(),
            });
        }
        Ok(Window {
            series_x,
            series_y,
            series_z,
            rate_hz,
            user_id,
        })
    }

    pub fn len(&self) -> usize {
        self.series_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series_x.is_empty()
    }

    pub fn axes(&self) -> [&[f64]; 3] {
        [&self.series_x, &self.series_y, &self.series_z]
    }
}

/// Two-sided DFT magnitude spectrum; `bins.len()` equals the source length.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub bins: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }
}

/// The per-window feature row. Slot meaning is given by
/// [`crate::features::FEATURE_LAYOUT`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub values: [f64; FEATURE_COUNT],
    pub label: usize,
}

/// A labeled collection of feature rows with dense labels `0..class_count`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    rows: Vec<FeatureVector>,
    class_count: usize,
}

impl Dataset {
    pub fn new(rows: Vec<FeatureVector>, class_count: usize) -> Result<Self> {
        for row in &rows {
            if row.label >= class_count {
                return Err(Error::LabelOutOfRange {
                    label: row.label,
                    class_count,
                });
            }
            if let Some(v) = row.values.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "feature row contains non-finite value {v}"
                )));
            }
        }
        Ok(Dataset { rows, class_count })
    }

    /// Like [`Dataset::new`] with `class_count = max label + 1`.
    pub fn from_rows(rows: Vec<FeatureVector>) -> Result<Self> {
        let class_count = rows.iter().map(|r| r.label + 1).max().unwrap_or(0);
        Self::new(rows, class_count)
    }

    pub fn rows(&self) -> &[FeatureVector] {
        &self.rows
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.label).collect()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_count];
        for row in &self.rows {
            counts[row.label] += 1;
        }
        counts
    }

    /// Rows at `indices`, in that order (duplicates allowed).
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            rows: indices.iter().map(|&i| self.rows[i]).collect(),
            class_count: self.class_count,
        }
    }
}
