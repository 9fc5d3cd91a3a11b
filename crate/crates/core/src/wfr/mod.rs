//! Windowed Fourier ridge phase extraction.
//!
//! For every pixel the windowed Fourier transform is searched over a lattice
//! of candidate frequencies; the frequency pair with the largest magnitude is
//! the ridge, and the phase of the transform there (with the carrier term
//! `ω_x·u + ω_y·v` restored) is the wrapped local phase.

mod direct;
mod engine;
mod grid;
mod ridge;
mod window;

pub use direct::wft_eval_direct;
pub use grid::FreqGrid;
pub use ridge::{ridge_phase, ridge_search, RidgeMap, WfrOutput};
pub use window::{make_window, Window, WindowSpec};

pub(crate) use engine::WftEngine;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Image;

/// Windowed Fourier transform at one frequency pair, row-major.
#[derive(Debug, Clone)]
pub struct Spectrogram {
    pub width: usize,
    pub height: usize,
    pub xi: f64,
    pub eta: f64,
    pub data: Vec<Complex64>,
}

impl Spectrogram {
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Complex64 {
        self.data[v * self.width + u]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self - other‖_F / ‖other‖_F`.
    pub fn relative_error(&self, other: &Spectrogram) -> f64 {
        let diff: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        diff.sqrt() / other.frobenius_norm()
    }
}

/// Window, search lattice and ridge-validity thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WfrParams {
    pub window: WindowSpec,
    pub grid: FreqGrid,
    /// Pixels below this fraction of the median interior ridge magnitude are invalid.
    pub relative_threshold: f64,
    /// Pixels whose ridge magnitude is below this fraction of `Σw · mean|I|`
    /// are invalid; catches frames with no grating at all.
    pub contrast_threshold: f64,
}

impl Default for WfrParams {
    fn default() -> Self {
        Self {
            window: WindowSpec::default(),
            grid: FreqGrid::default(),
            relative_threshold: 1e-3,
            contrast_threshold: 1e-2,
        }
    }
}

impl WfrParams {
    pub fn validate(&self) -> Result<()> {
        self.window.validate()?;
        self.grid.validate()?;
        for (name, v) in [
            ("relative threshold", self.relative_threshold),
            ("contrast threshold", self.contrast_threshold),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} {v} must be >= 0")));
            }
        }
        Ok(())
    }
}

/// FFT-accelerated `S(u, v; ξ, η)` with reflection padding.
pub fn wft_eval(image: &Image, spec: &WindowSpec, xi: f64, eta: f64) -> Result<Spectrogram> {
    let engine = WftEngine::new(image, spec)?;
    let (w, h) = image.dims();
    let mut data = engine.evaluate(xi, eta);
    for v in 0..h {
        for u in 0..w {
            data[v * w + u] *= Complex64::from_polar(1.0, -(xi * u as f64 + eta * v as f64));
        }
    }
    Ok(Spectrogram {
        width: w,
        height: h,
        xi,
        eta,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fft_matches_direct_on_random_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..4 {
            let (w, h) = (rng.random_range(12..24), rng.random_range(12..24));
            let vals: Vec<f64> = (0..w * h).map(|_| rng.random::<f64>()).collect();
            let img = Image::new(w, h, vals).unwrap();
            let spec = WindowSpec::new(rng.random_range(1.0..2.5), rng.random_range(1.0..2.5)).unwrap();
            let (xi, eta) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let fast = wft_eval(&img, &spec, xi, eta).unwrap();
            let slow = wft_eval_direct(&img, &spec, xi, eta).unwrap();
            assert!(fast.relative_error(&slow) < 1e-12, "{}", fast.relative_error(&slow));
        }
    }

    #[test]
    fn zero_image_gives_zero() {
        let img = Image::constant(32, 32, 0.0).unwrap();
        let s = wft_eval(&img, &WindowSpec::new(3.0, 3.0).unwrap(), 0.7, 0.0).unwrap();
        assert!(s.data.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn window_larger_than_image_is_rejected() {
        let img = Image::constant(40, 80, 0.5).unwrap();
        assert!(matches!(
            wft_eval(&img, &WindowSpec::default(), 0.7, 0.0),
            Err(Error::WindowTooLarge { support: 61, .. })
        ));
        assert!(wft_eval_direct(&img, &WindowSpec::default(), 0.7, 0.0).is_err());
    }
}
