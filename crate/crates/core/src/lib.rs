//! Phase extraction for hidden-grid background oriented schlieren.
//!
//! A printed cosine grid seen through a refractive flow picks up a phase
//! modulation proportional to the line-of-sight density gradient. This crate
//! renders such grids, recovers the modulation with a windowed Fourier
//! ridge search, and provides Fourier-transform and wavelet baselines plus
//! the sequence and contour tools around them.

pub mod analysis;
pub mod bench;
pub mod cwt;
pub mod error;
pub mod ftm;
pub mod io;
pub mod mask;
pub mod parallel;
pub mod phase;
pub(crate) mod spectral;
pub mod synth;
pub mod types;
pub mod wfr;

pub use error::{Error, Result};
pub use phase::{phase_diff, wrap_phase};
pub use types::{FrameMeta, Image, Mask, PhaseMap};
