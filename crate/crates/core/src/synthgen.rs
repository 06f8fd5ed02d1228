//! Seeded synthetic walking data.
//!
//! Each axis of a user's signal is
//!
//! ```text
//! baseline + amp sin(2 pi f k / rate + phase)
//!          + h2 amp sin(4 pi f k / rate + 2 phase) + N(0, sigma)
//! ```
//!
//! Step frequencies sit on a 0.05 Hz grid over [1.4, 2.35] Hz. Users are
//! spread over the 20 grid slots with a stride coprime to 20, so any 20
//! consecutive user ids get pairwise distinct frequencies. The z axis
//! carries a gravity-like offset.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::featurize_windows;
use crate::ingest::{segment_windows, WindowSpec};
use crate::seed::{derive_seed, rng_for};
use crate::signal::{Dataset, Recording, DEFAULT_RATE_HZ};

pub const DEFAULT_USERS: usize = 10;
pub const DEFAULT_WINDOWS_PER_USER: usize = 360;

pub const STEP_FREQ_MIN: f64 = 1.4;
pub const STEP_FREQ_SPACING: f64 = 0.05;
const FREQ_SLOTS: u64 = 20;
const SLOT_STRIDE: u64 = 7;

const PROFILE_STREAM: u64 = 0x5052_4f46;
const SLOT_STREAM: u64 = 0x534c_4f54;
const RECORDING_STREAM: u64 = 0x5245_4344;

pub const GRAVITY: f64 = 9.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitProfile {
    pub user_id: usize,
    pub step_freq: f64,
    pub amplitude: [f64; 3],
    pub phase: [f64; 3],
    pub harmonic_2_gain: f64,
    pub noise_sigma: f64,
    pub baseline: [f64; 3],
}

impl GaitProfile {
    pub fn validate(&self) -> Result<()> {
        if !(0.5..=5.0).contains(&self.step_freq) {
            return Err(Error::InvalidParameter(format!(
                "step frequency {} Hz outside [0.5, 5]",
                self.step_freq
            )));
        }
        let negative = |v: f64| v.is_nan() || v < 0.0;
        if negative(self.noise_sigma) || self.amplitude.iter().any(|&a| negative(a)) {
            return Err(Error::InvalidParameter(
                "noise sigma and amplitudes must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

pub fn generate_profile(user_id: usize, seed: u64) -> GaitProfile {
    let offset = derive_seed(seed, SLOT_STREAM) % FREQ_SLOTS;
    let slot = (offset + SLOT_STRIDE * user_id as u64) % FREQ_SLOTS;
    let mut rng = rng_for(derive_seed(seed, PROFILE_STREAM), user_id as u64);
    let mut uniform = |lo: f64, hi: f64| rng.random_range(lo..hi);
    let amplitude = [uniform(0.5, 2.0), uniform(0.5, 2.0), uniform(0.5, 2.0)];
    let phase = [uniform(0.0, TAU), uniform(0.0, TAU), uniform(0.0, TAU)];
    let harmonic_2_gain = uniform(0.1, 0.6);
    let noise_sigma = uniform(0.8, 1.5);
    let baseline = [
        uniform(-1.0, 1.0),
        uniform(-1.0, 1.0),
        -GRAVITY + uniform(-0.5, 0.5),
    ];
    GaitProfile {
        user_id,
        step_freq: STEP_FREQ_MIN + STEP_FREQ_SPACING * slot as f64,
        amplitude,
        phase,
        harmonic_2_gain,
        noise_sigma,
        baseline,
    }
}

/// Samples `round(duration_s * rate_hz)` readings of `profile`; `seed`
/// drives the noise only.
pub fn generate_recording(
    profile: &GaitProfile,
    duration_s: f64,
    rate_hz: f64,
    seed: u64,
) -> Result<Recording> {
    if !(duration_s > 0.0 && duration_s.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "duration must be positive, got {duration_s}"
        )));
    }
    profile.validate()?;
    let n = (duration_s * rate_hz).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, profile.noise_sigma)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let w = 2.0 * PI * profile.step_freq / rate_hz;
    let samples: Vec<[f64; 3]> = (0..n)
        .map(|k| {
            let angle = w * k as f64;
            let mut s = [0.0; 3];
            for (axis, v) in s.iter_mut().enumerate() {
                let amp = profile.amplitude[axis];
                let phase = profile.phase[axis];
                *v = profile.baseline[axis]
                    + amp * (angle + phase).sin()
                    + profile.harmonic_2_gain * amp * (2.0 * angle + 2.0 * phase).sin();
                if profile.noise_sigma > 0.0 {
                    *v += noise.sample(&mut rng);
                }
            }
            s
        })
        .collect();
    Recording::from_xyz(profile.user_id, rate_hz, samples)
}

/// Noise seed of user `user_id`'s benchmark recording.
pub fn recording_seed(seed: u64, user_id: usize) -> u64 {
    derive_seed(derive_seed(seed, RECORDING_STREAM), user_id as u64)
}

/// Duration yielding exactly `windows` default-geometry windows at
/// `rate_hz`.
pub fn duration_for_windows(windows: usize, rate_hz: f64) -> f64 {
    WindowSpec::default().samples_for(windows) as f64 / rate_hz
}

/// One recording per user, each long enough for `windows_per_user`
/// default windows.
pub fn generate_benchmark_recordings(
    user_count: usize,
    windows_per_user: usize,
    seed: u64,
) -> Result<Vec<(GaitProfile, Recording)>> {
    if user_count < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 users, got {user_count}"
        )));
    }
    if windows_per_user == 0 {
        return Err(Error::InvalidParameter(
            "windows per user must be positive".into(),
        ));
    }
    let duration = duration_for_windows(windows_per_user, DEFAULT_RATE_HZ);
    (0..user_count)
        .map(|user| {
            let profile = generate_profile(user, seed);
            let rec = generate_recording(
                &profile,
                duration,
                DEFAULT_RATE_HZ,
                recording_seed(seed, user),
            )?;
            Ok((profile, rec))
        })
        .collect()
}

/// Featurized benchmark corpus: `user_count * windows_per_user` rows.
pub fn generate_benchmark_dataset(
    user_count: usize,
    windows_per_user: usize,
    seed: u64,
) -> Result<Dataset> {
    let mut rows = Vec::with_capacity(user_count * windows_per_user);
    for (_, rec) in generate_benchmark_recordings(user_count, windows_per_user, seed)? {
        let windows = segment_windows(&rec, WindowSpec::default())?;
        rows.extend(featurize_windows(&windows)?.into_iter().map(|f| f.vector));
    }
    Dataset::new(rows, user_count)
}
