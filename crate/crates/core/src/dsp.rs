//! Signal-processing primitives behind the frequency features.

use std::cell::RefCell;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::Spectrum;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Full two-sided magnitude spectrum `|X[m]|`, `m = 0..l`, DC included and
/// no normalisation applied.
pub fn dft_magnitude(series: &[f64]) -> Spectrum {
    if series.is_empty() {
        return Spectrum { bins: Vec::new() };
    }
    let mut buf: Vec<Complex<f64>> = series.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(series.len()));
    fft.process(&mut buf);
    Spectrum {
        bins: buf.iter().map(|c| c.norm()).collect(),
    }
}

/// Indices of strict interior local maxima. Plateaus and endpoints never
/// count.
pub fn find_peaks(series: &[f64]) -> Vec<usize> {
    series
        .windows(3)
        .enumerate()
        .filter(|(_, w)| w[0] < w[1] && w[1] > w[2])
        .map(|(i, _)| i + 1)
        .collect()
}

/// Time samples weighted by the magnitude bin at the same index, averaged
/// over the window length.
pub fn spectral_centroid(time_series: &[f64], spectrum: &Spectrum) -> Result<f64> {
    if time_series.len() != spectrum.len() {
        return Err(Error::LengthMismatch {
            left: time_series.len(),
            right: spectrum.len(),
        });
    }
    if time_series.is_empty() {
        return Ok(0.0);
    }
    let weighted: f64 = time_series
        .iter()
        .zip(&spectrum.bins)
        .map(|(x, f)| x * f)
        .sum();
    Ok(weighted / time_series.len() as f64)
}
