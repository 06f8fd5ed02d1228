//! Person recognition from tri-axial accelerometer walking data.
//!
//! The pipeline runs recording CSV ([`ingest`]) through 50%-overlap
//! windows and a 30-slot time/frequency feature vector ([`features`],
//! [`dsp`]) into a bagged CART forest ([`cart`], [`forest`]) scored by
//! stratified cross-validation ([`eval`]). [`synthgen`] produces seeded
//! walking-like data for testing and benchmarking.

pub mod bench;
pub mod cart;
pub mod dataset_io;
pub mod dsp;
pub mod error;
pub mod eval;
pub mod features;
pub mod forest;
pub mod ingest;
pub mod report;
pub mod seed;
pub mod signal;
pub mod synthgen;

pub use error::{Error, Result};
pub use signal::{AxialSample, Dataset, FeatureVector, Recording, Spectrum, Window, FEATURE_COUNT};
