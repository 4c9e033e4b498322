//! AFDM radar/communication simulation library.
//!
//! Implements the discrete affine Fourier transform pair, chirp-periodic
//! prefix handling, delay-Doppler channel simulation, ambiguity-function
//! analysis, matched-filter range estimation with CA-CFAR detection, and an
//! LMMSE communication receiver with OFDM/OTFS baselines.

pub mod ambiguity;
pub mod baselines;
pub mod channel;
pub mod comm;
pub mod counting;
pub mod error;
pub mod estimator;
pub mod fft;
pub mod phase;
pub mod radar;
pub mod waveform;

pub use error::Error;
pub use waveform::{ChirpDomainVector, GeometryMode, TimeSignal, WaveformParams, C2};

/// Library result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
