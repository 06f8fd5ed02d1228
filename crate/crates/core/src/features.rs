//! The 30-slot per-window feature vector.
//!
//! Slot layout (`t` = time domain, `f` = magnitude spectrum):
//!
//! | slots | feature |
//! |-------|---------|
//! | 0-2   | mean x/y/z (t) |
//! | 3-5   | mean x/y/z (f) |
//! | 6-8   | median x/y/z (t) |
//! | 9-11  | median x/y/z (f) |
//! | 12    | magnitude (t) |
//! | 13    | magnitude (f) |
//! | 14-15 | mean ratio x/z, y/z (t) |
//! | 16-17 | mean ratio x/z, y/z (f) |
//! | 18-20 | peak count x/y/z (t) |
//! | 21-23 | mean peak spacing x/y/z in seconds (t) |
//! | 24-26 | spectral centroid x/y/z |
//! | 27-29 | mean absolute deviation x/y/z (t) |
//!
//! Peak count and spacing are kept per axis rather than averaged across
//! axes, which is what brings the total to 30.
//!
//! The "correlation" slots are ratios of axis means against z, not
//! statistical correlation. A z mean within [`RATIO_EPSILON`] of zero
//! yields 0 and is counted in [`Featurized::degenerate_ratios`].

use rayon::prelude::*;
use serde::Serialize;

use crate::dsp::{dft_magnitude, find_peaks, spectral_centroid};
use crate::error::{Error, Result};
use crate::signal::{FeatureVector, Window, FEATURE_COUNT};

pub const RATIO_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Time,
    Frequency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FeatureDescriptor {
    pub name: &'static str,
    pub domain: Domain,
    pub axis: &'static str,
}

const fn slot(name: &'static str, domain: Domain, axis: &'static str) -> FeatureDescriptor {
    FeatureDescriptor { name, domain, axis }
}

use Domain::{Frequency as F, Time as T};

pub const FEATURE_LAYOUT: [FeatureDescriptor; FEATURE_COUNT] = [
    slot("mean_time_x", T, "x"),
    slot("mean_time_y", T, "y"),
    slot("mean_time_z", T, "z"),
    slot("mean_freq_x", F, "x"),
    slot("mean_freq_y", F, "y"),
    slot("mean_freq_z", F, "z"),
    slot("median_time_x", T, "x"),
    slot("median_time_y", T, "y"),
    slot("median_time_z", T, "z"),
    slot("median_freq_x", F, "x"),
    slot("median_freq_y", F, "y"),
    slot("median_freq_z", F, "z"),
    slot("magnitude_time", T, "xyz"),
    slot("magnitude_freq", F, "xyz"),
    slot("corr_xz_time", T, "xz"),
    slot("corr_yz_time", T, "yz"),
    slot("corr_xz_freq", F, "xz"),
    slot("corr_yz_freq", F, "yz"),
    slot("peak_count_x", T, "x"),
    slot("peak_count_y", T, "y"),
    slot("peak_count_z", T, "z"),
    slot("peak_spacing_x", T, "x"),
    slot("peak_spacing_y", T, "y"),
    slot("peak_spacing_z", T, "z"),
    slot("spectral_centroid_x", F, "x"),
    slot("spectral_centroid_y", F, "y"),
    slot("spectral_centroid_z", F, "z"),
    slot("mad_x", T, "x"),
    slot("mad_y", T, "y"),
    slot("mad_z", T, "z"),
];

pub fn feature_names() -> impl Iterator<Item = &'static str> {
    FEATURE_LAYOUT.iter().map(|d| d.name)
}

/// Resolves a feature name to its slot. A bare family name such as
/// `magnitude` or `corr_xz` resolves to its time-domain slot.
pub fn feature_index(name: &str) -> Option<usize> {
    let position = |n: &str| FEATURE_LAYOUT.iter().position(|d| d.name == n);
    position(name).or_else(|| position(&format!("{name}_time")))
}

/// Arithmetic mean, accumulated relative to the first sample so that a
/// constant series returns its value exactly.
pub fn mean(series: &[f64]) -> Result<f64> {
    let Some(&origin) = series.first() else {
        return Err(Error::EmptySeries("mean"));
    };
    let shift = series.iter().map(|v| v - origin).sum::<f64>() / series.len() as f64;
    Ok(origin + shift)
}

pub fn median(series: &[f64]) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::EmptySeries("median"));
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Ok(if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    })
}

/// Mean Euclidean norm of the tri-axial samples. Pass spectra bins for the
/// frequency-domain variant.
pub fn magnitude(x: &[f64], y: &[f64], z: &[f64]) -> Result<f64> {
    for other in [y.len(), z.len()] {
        if other != x.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: other,
            });
        }
    }
    if x.is_empty() {
        return Err(Error::EmptySeries("magnitude"));
    }
    let total: f64 = x
        .iter()
        .zip(y)
        .zip(z)
        .map(|((a, b), c)| (a * a + b * b + c * c).sqrt())
        .sum();
    Ok(total / x.len() as f64)
}

/// Result of a guarded ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio {
    pub value: f64,
    pub degenerate: bool,
}

/// `numerator_mean / z_mean`, or 0 flagged degenerate when
/// `|z_mean| <= RATIO_EPSILON`.
pub fn cross_correlation(numerator_mean: f64, z_mean: f64) -> Ratio {
    if z_mean.abs() > RATIO_EPSILON {
        Ratio {
            value: numerator_mean / z_mean,
            degenerate: false,
        }
    } else {
        Ratio {
            value: 0.0,
            degenerate: true,
        }
    }
}

pub fn peak_count(series: &[f64]) -> usize {
    find_peaks(series).len()
}

/// Mean gap between successive peaks, in seconds. Fewer than two peaks
/// gives 0.
pub fn mean_peak_spacing(series: &[f64], rate_hz: f64) -> f64 {
    spacing_of(&find_peaks(series), rate_hz)
}

fn spacing_of(peaks: &[usize], rate_hz: f64) -> f64 {
    if peaks.len() < 2 {
        return 0.0;
    }
    let gaps: usize = peaks.windows(2).map(|w| w[1] - w[0]).sum();
    gaps as f64 / (peaks.len() - 1) as f64 / rate_hz
}

pub fn mean_abs_deviation(series: &[f64]) -> Result<f64> {
    let m = mean(series)?;
    Ok(series.iter().map(|v| (v - m).abs()).sum::<f64>() / series.len() as f64)
}

/// A feature vector together with the number of degenerate ratio slots
/// (0..=4) that were substituted with 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Featurized {
    pub vector: FeatureVector,
    pub degenerate_ratios: usize,
}

pub fn extract_feature_vector(win: &Window) -> Result<Featurized> {
    if win.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "window must hold at least 2 samples, got {}",
            win.len()
        )));
    }
    let time = win.axes();
    let spectra = time.map(dft_magnitude);
    let freq = [
        &spectra[0].bins[..],
        &spectra[1].bins[..],
        &spectra[2].bins[..],
    ];

    let mut v = [0.0; FEATURE_COUNT];
    let mut time_means = [0.0; 3];
    let mut freq_means = [0.0; 3];
    for axis in 0..3 {
        time_means[axis] = mean(time[axis])?;
        freq_means[axis] = mean(freq[axis])?;
        v[axis] = time_means[axis];
        v[3 + axis] = freq_means[axis];
        v[6 + axis] = median(time[axis])?;
        v[9 + axis] = median(freq[axis])?;

        let peaks = find_peaks(time[axis]);
        v[18 + axis] = peaks.len() as f64;
        v[21 + axis] = spacing_of(&peaks, win.rate_hz);
        v[24 + axis] = spectral_centroid(time[axis], &spectra[axis])?;
        v[27 + axis] = mean_abs_deviation(time[axis])?;
    }
    v[12] = magnitude(time[0], time[1], time[2])?;
    v[13] = magnitude(freq[0], freq[1], freq[2])?;

    let ratios = [
        cross_correlation(time_means[0], time_means[2]),
        cross_correlation(time_means[1], time_means[2]),
        cross_correlation(freq_means[0], freq_means[2]),
        cross_correlation(freq_means[1], freq_means[2]),
    ];
    for (i, r) in ratios.iter().enumerate() {
        v[14 + i] = r.value;
    }

    Ok(Featurized {
        vector: FeatureVector {
            values: v,
            label: win.user_id,
        },
        degenerate_ratios: ratios.iter().filter(|r| r.degenerate).count(),
    })
}

/// Featurizes windows in parallel, preserving input order.
pub fn featurize_windows(windows: &[Window]) -> Result<Vec<Featurized>> {
    windows.par_iter().map(extract_feature_vector).collect()
}
