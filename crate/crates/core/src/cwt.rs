//! Row-wise Morlet wavelet ridge phase extraction.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::wrap_phase;
use crate::types::{Image, PhaseMap};
use crate::wfr::FreqGrid;

/// Complex Morlet analysis with L¹ scale normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorletSpec {
    pub omega0: f64,
    /// Ascending scales, in pixels.
    pub scales: Vec<f64>,
    /// Remove the row mean and divide by the row RMS before analysis.
    pub normalize_rows: bool,
}

impl Default for MorletSpec {
    fn default() -> Self {
        let g = FreqGrid::default();
        Self::from_frequencies(6.0, g.x_low, g.x_step, g.x_high).expect("default spec is valid")
    }
}

impl MorletSpec {
    pub fn new(omega0: f64, mut scales: Vec<f64>, normalize_rows: bool) -> Result<Self> {
        if !(omega0 >= 5.0 && omega0.is_finite()) {
            return Err(Error::invalid(format!("Morlet omega0 {omega0} must be >= 5")));
        }
        if scales.is_empty() {
            return Err(Error::invalid("scale set is empty"));
        }
        if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::invalid("scales must be positive and finite"));
        }
        scales.sort_by(f64::total_cmp);
        Ok(Self {
            omega0,
            scales,
            normalize_rows,
        })
    }

    /// Scales `ω₀/ξ` for the frequency range `low:step:high` (radians/pixel).
    pub fn from_frequencies(omega0: f64, low: f64, step: f64, high: f64) -> Result<Self> {
        let axis = FreqGrid::new((low, step, high), (0.0, 1.0, 0.0))?;
        if !(low > 0.0) {
            return Err(Error::invalid("wavelet frequencies must be > 0"));
        }
        let scales = (0..axis.x_count()?).map(|i| omega0 / axis.xi(i)).collect();
        Self::new(omega0, scales, false)
    }

    /// Analysis frequency of scale index `k`, radians/pixel.
    pub fn frequency(&self, k: usize) -> f64 {
        self.omega0 / self.scales[k]
    }

    /// Half-width `ceil(3a)` of the truncated wavelet at the largest scale.
    pub fn margin(&self) -> usize {
        half_width(*self.scales.last().expect("non-empty"))
    }
}

fn half_width(scale: f64) -> usize {
    (3.0 * scale).ceil() as usize
}

/// Phase plus the winning scale index per pixel, row-major.
#[derive(Debug, Clone)]
pub struct CwtOutput {
    pub phase: PhaseMap,
    pub scale_index: Vec<u32>,
    pub modulus: Vec<f64>,
}

struct Taps {
    half: usize,
    /// `(1/a)·π^{-1/4}·exp(-t²/2a²)·exp(-iω₀t/a)` for `t = -half..=half`.
    coeffs: Vec<Complex64>,
}

fn build_taps(spec: &MorletSpec) -> Vec<Taps> {
    let norm = PI.powf(-0.25);
    spec.scales
        .iter()
        .map(|&a| {
            let half = half_width(a);
            let coeffs = (-(half as isize)..=half as isize)
                .map(|t| {
                    let s = t as f64 / a;
                    Complex64::from_polar(norm * (-0.5 * s * s).exp() / a, -spec.omega0 * s)
                })
                .collect();
            Taps { half, coeffs }
        })
        .collect()
}

fn analyze_row(row: &[f64], spec: &MorletSpec, taps: &[Taps], margin: usize) -> (Vec<f64>, Vec<u32>, Vec<f64>) {
    let w = row.len();
    let mut phase = vec![f64::NAN; w];
    let mut index = vec![0u32; w];
    let mut modulus = vec![0.0; w];

    let normalized: Vec<f64>;
    let signal: &[f64] = if spec.normalize_rows {
        let mean = row.iter().sum::<f64>() / w as f64;
        let rms = (row.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / w as f64).sqrt();
        let scale = if rms > 0.0 { 1.0 / rms } else { 0.0 };
        normalized = row.iter().map(|v| (v - mean) * scale).collect();
        &normalized
    } else {
        row
    };

    for u in margin..w - margin {
        let mut best = (f64::NEG_INFINITY, 0usize, Complex64::new(0.0, 0.0));
        for (k, tap) in taps.iter().enumerate() {
            let window = &signal[u - tap.half..=u + tap.half];
            let c: Complex64 = window.iter().zip(&tap.coeffs).map(|(&s, &t)| t * s).sum();
            let m = c.norm_sqr();
            if m > best.0 {
                best = (m, k, c);
            }
        }
        let (m, k, c) = best;
        index[u] = k as u32;
        modulus[u] = m.sqrt();
        if m > 0.0 {
            // Centered wavelet: the angle already includes the ξ·u carrier term.
            phase[u] = wrap_phase(c.arg());
        }
    }
    (phase, index, modulus)
}

/// Per-row ridge of the Morlet transform over the scale set.
///
/// Samples closer than `ceil(3·a_max)` to either row end are invalid, as are
/// samples where every scale gives a zero coefficient.
pub fn cwt_row_ridge(image: &Image, spec: &MorletSpec) -> Result<CwtOutput> {
    MorletSpec::new(spec.omega0, spec.scales.clone(), spec.normalize_rows)?;
    let margin = spec.margin();
    let (w, h) = image.dims();
    if w < 2 * margin + 1 {
        return Err(Error::invalid(format!(
            "image width {w} below wavelet support {}",
            2 * margin + 1
        )));
    }
    let taps = build_taps(spec);
    let rows: Vec<_> = (0..h)
        .into_par_iter()
        .map(|y| analyze_row(image.row(y), spec, &taps, margin))
        .collect();

    let mut phase = Vec::with_capacity(w * h);
    let mut scale_index = Vec::with_capacity(w * h);
    let mut modulus = Vec::with_capacity(w * h);
    for (p, i, m) in rows {
        phase.extend(p);
        scale_index.extend(i);
        modulus.extend(m);
    }
    Ok(CwtOutput {
        phase: PhaseMap::wrapped(w, h, phase)?,
        scale_index,
        modulus,
    })
}
