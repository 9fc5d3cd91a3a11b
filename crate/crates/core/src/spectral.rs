//! FFT plumbing shared by the Fourier-domain extractors.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Smallest length `>= n` whose only prime factors are 2, 3 and 5.
pub(crate) fn fast_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Angular frequency (radians/pixel) of DFT bin `k` of a length-`n` transform,
/// using the signed convention `k >= ceil(n/2)` maps to `k - n`.
pub(crate) fn bin_frequency(k: usize, n: usize) -> f64 {
    let signed = if k < n.div_ceil(2) {
        k as f64
    } else {
        k as f64 - n as f64
    };
    TAU * signed / n as f64
}

/// Out-of-place transpose of a row-major `rows x cols` buffer.
pub(crate) fn transpose(src: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    const BLOCK: usize = 32;
    let mut dst = vec![Complex64::new(0.0, 0.0); src.len()];
    for rb in (0..rows).step_by(BLOCK) {
        for cb in (0..cols).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(rows) {
                for c in cb..(cb + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
    dst
}

/// Unnormalized 2-D DFT of a row-major `width x height` buffer, in place.
pub(crate) fn fft2(planner: &mut FftPlanner<f64>, data: &mut Vec<Complex64>, width: usize, height: usize, inverse: bool) {
    let (row_fft, col_fft) = if inverse {
        (planner.plan_fft_inverse(width), planner.plan_fft_inverse(height))
    } else {
        (planner.plan_fft_forward(width), planner.plan_fft_forward(height))
    };
    row_fft.process(data);
    let mut t = transpose(data, height, width);
    col_fft.process(&mut t);
    *data = transpose(&t, width, height);
}
