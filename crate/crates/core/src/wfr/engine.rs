//! FFT evaluation of the windowed Fourier transform.
//!
//! The image is reflection-padded by the window radius and transformed once.
//! Because the window is separable and even, the spectrum of the modulated
//! kernel `w(p)·exp(-iξp)` along each axis is real and is computed directly
//! in O(len·R). Per x-frequency one inverse pass along x is shared by every
//! y-frequency; each y-frequency then costs one inverse pass along y over
//! the output columns only.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::window::WindowSpec;
use crate::error::{Error, Result};
use crate::spectral::{fast_len, fft2};
use crate::types::Image;

/// Reflect-101 index map (`... c b | a b c ... | b a ...`), edge not repeated.
#[inline]
pub(crate) fn reflect_index(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

pub(crate) fn check_fits(image: &Image, spec: &WindowSpec) -> Result<()> {
    spec.validate()?;
    let support = spec.support();
    if support > image.width() || support > image.height() {
        return Err(Error::WindowTooLarge {
            support,
            width: image.width(),
            height: image.height(),
        });
    }
    Ok(())
}

pub(crate) struct WftEngine {
    pub width: usize,
    pub height: usize,
    pub radius: usize,
    pad_w: usize,
    pad_h: usize,
    /// Forward spectrum of the padded image, `[ky][kx]`.
    spectrum: Vec<Complex64>,
    taps_x: Vec<f64>,
    taps_y: Vec<f64>,
    inv_x: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
}

impl WftEngine {
    pub fn new(image: &Image, spec: &WindowSpec) -> Result<Self> {
        check_fits(image, spec)?;
        let (width, height) = image.dims();
        let radius = spec.radius;
        let pad_w = fast_len(width + 2 * radius);
        let pad_h = fast_len(height + 2 * radius);
        let r = radius as isize;

        let mut spectrum = Vec::with_capacity(pad_w * pad_h);
        for py in 0..pad_h {
            let y = reflect_index(py as isize - r, height);
            let row = image.row(y);
            for px in 0..pad_w {
                let x = reflect_index(px as isize - r, width);
                spectrum.push(Complex64::new(row[x], 0.0));
            }
        }
        let mut planner = FftPlanner::new();
        fft2(&mut planner, &mut spectrum, pad_w, pad_h, false);

        Ok(Self {
            width,
            height,
            radius,
            pad_w,
            pad_h,
            spectrum,
            taps_x: spec.half_taps(spec.sigma_x),
            taps_y: spec.half_taps(spec.sigma_y),
            inv_x: planner.plan_fft_inverse(pad_w),
            inv_y: planner.plan_fft_inverse(pad_h),
        })
    }

    /// Bytes held by the engine plus the transient buffers of one x-frequency task.
    pub fn memory_estimate(width: usize, height: usize, spec: &WindowSpec) -> (usize, usize) {
        let c = std::mem::size_of::<Complex64>();
        let pad_w = fast_len(width + 2 * spec.radius);
        let pad_h = fast_len(height + 2 * spec.radius);
        let shared = pad_w * pad_h * c;
        // Working copy of the spectrum, hybrid buffer, y-scratch, output and task-local best.
        let task = pad_w * pad_h * c + 2 * width * pad_h * c + width * height * (2 * c + 8 + 4);
        (shared, task)
    }

    /// DFT of the circularly placed kernel `k(p) = w(p)·exp(-i·freq·p)` for
    /// correlation, `H(m) = Σ_p w(p)·cos((2πm/len - freq)·p)` (real because `w` is even).
    fn kernel_response(taps: &[f64], len: usize, freq: f64, scale: f64) -> Vec<f64> {
        (0..len)
            .map(|m| {
                let theta = TAU * m as f64 / len as f64 - freq;
                let mut acc = taps[0];
                for (p, &w) in taps.iter().enumerate().skip(1) {
                    acc += 2.0 * w * (theta * p as f64).cos();
                }
                acc * scale
            })
            .collect()
    }

    /// Filters along x at frequency `xi`; returns the image-width output
    /// columns still in y-frequency space, laid out `[u][ky]`.
    pub fn row_pass(&self, xi: f64) -> Vec<Complex64> {
        let scale = 1.0 / (self.pad_w * self.pad_h) as f64;
        let hx = Self::kernel_response(&self.taps_x, self.pad_w, xi, scale);
        let mut buf = self.spectrum.clone();
        for row in buf.chunks_exact_mut(self.pad_w) {
            for (v, &h) in row.iter_mut().zip(&hx) {
                *v *= h;
            }
        }
        self.inv_x.process(&mut buf);

        let mut hybrid = vec![Complex64::new(0.0, 0.0); self.width * self.pad_h];
        for (ky, row) in buf.chunks_exact(self.pad_w).enumerate() {
            for (u, &v) in row[self.radius..self.radius + self.width].iter().enumerate() {
                hybrid[u * self.pad_h + ky] = v;
            }
        }
        hybrid
    }

    /// Finishes the transform at y-frequency `eta`, writing the correlation
    /// `T(u, v) = Σ I(u+p, v+q)·w(p, q)·exp(-i(ξp + ηq))` into `out` laid out `[u][v]`.
    pub fn column_pass(
        &self,
        hybrid: &[Complex64],
        eta: f64,
        scratch: &mut Vec<Complex64>,
        out: &mut [Complex64],
    ) {
        let hy = Self::kernel_response(&self.taps_y, self.pad_h, eta, 1.0);
        scratch.clear();
        scratch.extend_from_slice(hybrid);
        for col in scratch.chunks_exact_mut(self.pad_h) {
            for (v, &h) in col.iter_mut().zip(&hy) {
                *v *= h;
            }
        }
        self.inv_y.process(scratch);
        let (r, h) = (self.radius, self.height);
        for (col, dst) in scratch.chunks_exact(self.pad_h).zip(out.chunks_exact_mut(h)) {
            dst.copy_from_slice(&col[r..r + h]);
        }
    }

    /// Correlation `T` at one frequency pair, row-major `[v][u]`.
    pub fn evaluate(&self, xi: f64, eta: f64) -> Vec<Complex64> {
        let hybrid = self.row_pass(xi);
        let mut scratch = Vec::new();
        let mut cols = vec![Complex64::new(0.0, 0.0); self.width * self.height];
        self.column_pass(&hybrid, eta, &mut scratch, &mut cols);
        let mut out = vec![Complex64::new(0.0, 0.0); cols.len()];
        for u in 0..self.width {
            for v in 0..self.height {
                out[v * self.width + u] = cols[u * self.height + v];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_101() {
        let idx: Vec<usize> = (-4..9).map(|i| reflect_index(i, 5)).collect();
        assert_eq!(idx, vec![4, 3, 2, 1, 0, 1, 2, 3, 4, 3, 2, 1, 0]);
        assert_eq!(reflect_index(-3, 1), 0);
        assert_eq!(reflect_index(-10, 3), 2);
    }

    #[test]
    fn kernel_response_is_kernel_dft() {
        let spec = WindowSpec::with_radius(1.5, 1.5, 4).unwrap();
        let taps = spec.half_taps(1.5);
        let (len, freq) = (16, 0.9);
        let h = WftEngine::kernel_response(&taps, len, freq, 1.0);
        for (m, &hm) in h.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for p in -4isize..=4 {
                let k = taps[p.unsigned_abs()] * Complex64::from_polar(1.0, -freq * p as f64);
                // Kernel placed at circular index -p for correlation.
                let n = (-p).rem_euclid(len as isize) as f64;
                acc += k * Complex64::from_polar(1.0, -TAU * m as f64 * n / len as f64);
            }
            assert!((acc.re - hm).abs() < 1e-12 && acc.im.abs() < 1e-12);
        }
    }
}
