//! Laser pulse shapes, their classical invariants, and regime classification.
//!
//! A pulse is a shape function `f(t)` supported on `[0, tau]`; the physical
//! field is `E(t) = E0 f(t)`. Everything downstream is organized around the
//! shape-normalized momentum transfer `b0` and displacement `c0` and the
//! three-way regime split they induce.

mod analysis;
mod config;
mod engine;
mod shape;

pub use analysis::{PartitionInterval, PulseClass, PulseInvariants, ZeroStructure};
pub use config::{load_samples_csv, PulseConfig};
pub use shape::{Envelope, PulseKind, PulseShape};

/// Errors from pulse construction, evaluation, and classification.
#[derive(Debug, thiserror::Error)]
pub enum PulseError {
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("pulse duration must be positive and finite, got {0}")]
    BadDuration(f64),
    #[error("ramp fraction must lie in (0, 0.5], got {0}")]
    BadRampFraction(f64),
    #[error("gaussian width must be positive and finite, got {0}")]
    BadWidth(f64),
    #[error("carrier frequency must be positive and finite, got {0}")]
    BadFrequency(f64),
    #[error("bad sampled waveform: {0}")]
    BadSamples(String),
    #[error("pulse shape is identically zero on its support")]
    IdenticallyZero,
    #[error("classification tolerance must lie in (0, 1e-3], got {0}")]
    BadTolerance(f64),
    #[error("zero-structure scan needs at least 64 samples, got {0}")]
    TooFewSamples(usize),
    #[error("bad pulse train: {0}")]
    BadTrain(String),
    #[error("bad pulse configuration: {0}")]
    BadConfig(String),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
