//! Global Fourier-transform (Takeda) phase extraction.
//!
//! One sideband of the frame spectrum is kept by a rectangular region of
//! interest, the rest is zeroed, and the angle of the inverse transform is
//! the wrapped phase, carrier included.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::wrap_phase;
use crate::spectral::{bin_frequency, fft2};
use crate::types::{Image, PhaseMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Taper {
    #[default]
    Hard,
    /// Flat over the inner half of each half-width, cosine roll-off to zero at the edge.
    RaisedCosine,
}

/// Rectangular passband around one spectral lobe, radians/pixel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobeRoi {
    pub xi0: f64,
    pub eta0: f64,
    pub half_xi: f64,
    pub half_eta: f64,
    pub taper: Taper,
}

impl LobeRoi {
    pub fn new(xi0: f64, eta0: f64, half_xi: f64, half_eta: f64, taper: Taper) -> Result<Self> {
        let roi = Self {
            xi0,
            eta0,
            half_xi,
            half_eta,
            taper,
        };
        roi.validate()?;
        Ok(roi)
    }

    /// Default passband: `Δξ = ξ₀/2`, `Δη = π/8`, hard edges.
    pub fn around(xi0: f64, eta0: f64) -> Result<Self> {
        Self::new(xi0, eta0, xi0 / 2.0, PI / 8.0, Taper::Hard)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.xi0, self.eta0, self.half_xi, self.half_eta];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("ROI parameters must be finite"));
        }
        if !(self.xi0 > 0.0 && self.xi0 < PI) {
            return Err(Error::invalid(format!("ROI center {} must lie in (0, pi)", self.xi0)));
        }
        if !(self.half_xi > 0.0 && self.half_eta > 0.0) {
            return Err(Error::invalid("ROI half-widths must be positive"));
        }
        if self.contains_offset(self.xi0, self.eta0) {
            return Err(Error::RoiCoversDc);
        }
        Ok(())
    }

    // Whether the point at offset (dxi, deta) from the center lies inside,
    // i.e. the origin when called with the center itself.
    fn contains_offset(&self, dxi: f64, deta: f64) -> bool {
        dxi.abs() <= self.half_xi && deta.abs() <= self.half_eta
    }

    fn weight(&self, xi: f64, eta: f64) -> f64 {
        let (dx, dy) = (xi - self.xi0, eta - self.eta0);
        if !self.contains_offset(dx, dy) {
            return 0.0;
        }
        match self.taper {
            Taper::Hard => 1.0,
            Taper::RaisedCosine => roll_off(dx.abs() / self.half_xi) * roll_off(dy.abs() / self.half_eta),
        }
    }
}

fn roll_off(t: f64) -> f64 {
    if t <= 0.5 {
        1.0
    } else {
        0.5 * (1.0 + (PI * (t - 0.5) / 0.5).cos())
    }
}

/// Parameters of the Fourier-transform baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FtParams {
    /// Fixed passband; `None` locates the carrier on the reference frame.
    pub roi: Option<LobeRoi>,
    /// Bins with `ξ` at or below this are ignored by the peak search.
    pub exclusion_radius: f64,
    /// Border pixels flagged invalid in the output.
    pub border: usize,
}

impl Default for FtParams {
    fn default() -> Self {
        Self {
            roi: None,
            exclusion_radius: 0.25,
            border: 30,
        }
    }
}

fn spectrum(image: &Image) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = image.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    fft2(&mut planner, &mut data, image.width(), image.height(), false);
    data
}

/// Frequency `(ξ₀, η₀)` of the strongest bin with `ξ > exclusion`.
///
/// Bins are scanned by ascending `kx` and then ascending row index, and only
/// a strictly larger magnitude replaces the current peak. A spectrum whose
/// best bin is at rounding level relative to the frame energy has no carrier.
pub fn find_carrier_peak(image: &Image, exclusion: f64) -> Result<(f64, f64)> {
    if !(exclusion > 0.0) {
        return Err(Error::invalid(format!("exclusion radius {exclusion} must be > 0")));
    }
    let (w, h) = image.dims();
    let spec = spectrum(image);
    let mut best: Option<(f64, usize, usize)> = None;
    for kx in 0..w {
        let xi = bin_frequency(kx, w);
        if xi <= exclusion {
            continue;
        }
        for ky in 0..h {
            let m = spec[ky * w + kx].norm();
            if best.is_none_or(|(bm, _, _)| m > bm) {
                best = Some((m, kx, ky));
            }
        }
    }
    let scale: f64 = image.data().iter().map(|v| v.abs()).sum();
    match best {
        Some((m, kx, ky)) if m > 1e-10 * scale => Ok((bin_frequency(kx, w), bin_frequency(ky, h))),
        _ => Err(Error::NoCarrier),
    }
}

/// Spectrum restricted to the ROI and transformed back: the complex
/// analytic field whose angle is the phase.
pub fn band_pass(image: &Image, roi: &LobeRoi) -> Result<Vec<Complex64>> {
    roi.validate()?;
    let (w, h) = image.dims();
    let mut data = spectrum(image);
    for ky in 0..h {
        let eta = bin_frequency(ky, h);
        for kx in 0..w {
            data[ky * w + kx] *= roi.weight(bin_frequency(kx, w), eta);
        }
    }
    let mut planner = FftPlanner::new();
    fft2(&mut planner, &mut data, w, h, true);
    let scale = 1.0 / (w * h) as f64;
    for v in &mut data {
        *v *= scale;
    }
    Ok(data)
}

/// Wrapped phase of the band-passed field; exactly-zero samples are invalid.
pub fn ft_extract(image: &Image, roi: &LobeRoi) -> Result<PhaseMap> {
    let field = band_pass(image, roi)?;
    let data = field
        .iter()
        .map(|c| {
            if c.norm_sqr() == 0.0 {
                f64::NAN
            } else {
                wrap_phase(c.arg())
            }
        })
        .collect();
    PhaseMap::wrapped(image.width(), image.height(), data)
}
