//! Per-pixel argmax over the frequency lattice.
//!
//! Each x-frequency is an independent task. Tasks run in parallel in
//! batches and their partial maxima are folded into the running result in
//! ascending lattice order with a strict comparison, so the winner on ties
//! is always the lowest `(ξ, η)` index and the output does not depend on how
//! many threads ran the batch.

use num_complex::Complex64;
use rayon::prelude::*;

use super::engine::WftEngine;
use super::grid::FreqGrid;
use super::window::WindowSpec;
use super::WfrParams;
use crate::error::{Error, Result};
use crate::phase::wrap_phase;
use crate::types::{Image, PhaseMap};

/// Winning frequency and magnitude per pixel, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeMap {
    pub width: usize,
    pub height: usize,
    pub xi_index: Vec<u32>,
    pub eta_index: Vec<u32>,
    pub omega_x: Vec<f64>,
    pub omega_y: Vec<f64>,
    pub magnitude: Vec<f64>,
}

impl RidgeMap {
    #[inline]
    pub fn index(&self, u: usize, v: usize) -> usize {
        v * self.width + u
    }
}

/// Phase, ridge, and the bookkeeping of which pixels were flagged.
#[derive(Debug, Clone)]
pub struct WfrOutput {
    pub phase: PhaseMap,
    pub ridge: RidgeMap,
    /// Magnitude below which ridge pixels were invalidated.
    pub threshold: f64,
    pub margin_flagged: usize,
    pub low_magnitude_flagged: usize,
}

/// Running maximum, laid out `[u][v]` like the engine output.
struct Best {
    norm: Vec<f64>,
    value: Vec<Complex64>,
    index: Vec<u32>,
}

impl Best {
    fn new(n: usize) -> Self {
        Self {
            norm: vec![f64::NEG_INFINITY; n],
            value: vec![Complex64::new(0.0, 0.0); n],
            index: vec![0; n],
        }
    }

    fn offer(&mut self, values: &[Complex64], index: u32) {
        for (k, t) in values.iter().enumerate() {
            let m = t.norm_sqr();
            if m > self.norm[k] {
                self.norm[k] = m;
                self.value[k] = *t;
                self.index[k] = index;
            }
        }
    }

    fn merge(&mut self, other: Best) {
        for k in 0..self.norm.len() {
            if other.norm[k] > self.norm[k] {
                self.norm[k] = other.norm[k];
                self.value[k] = other.value[k];
                self.index[k] = other.index[k];
            }
        }
    }
}

fn sweep_xi(engine: &WftEngine, grid: &FreqGrid, ix: usize, ny: usize) -> Best {
    let n = engine.width * engine.height;
    let hybrid = engine.row_pass(grid.xi(ix));
    let mut scratch = Vec::with_capacity(hybrid.len());
    let mut t = vec![Complex64::new(0.0, 0.0); n];
    let mut best = Best::new(n);
    for iy in 0..ny {
        engine.column_pass(&hybrid, grid.eta(iy), &mut scratch, &mut t);
        best.offer(&t, (ix * ny + iy) as u32);
    }
    best
}

struct Sweep {
    ridge: RidgeMap,
    /// Correlation at the ridge, row-major.
    value: Vec<Complex64>,
}

fn sweep(image: &Image, spec: &WindowSpec, grid: &FreqGrid) -> Result<Sweep> {
    let nx = grid.x_count()?;
    let ny = grid.y_count()?;
    if nx == 0 || ny == 0 {
        return Err(Error::EmptyGrid);
    }
    if nx * ny > u32::MAX as usize {
        return Err(Error::invalid("frequency grid too large"));
    }
    let engine = WftEngine::new(image, spec)?;
    let (w, h) = image.dims();

    let batch = rayon::current_num_threads().max(1);
    let order: Vec<usize> = (0..nx).collect();
    let mut best = Best::new(w * h);
    for chunk in order.chunks(batch) {
        let partial: Vec<Best> = chunk
            .par_iter()
            .map(|&ix| sweep_xi(&engine, grid, ix, ny))
            .collect();
        for p in partial {
            best.merge(p);
        }
    }

    let n = w * h;
    let mut ridge = RidgeMap {
        width: w,
        height: h,
        xi_index: vec![0; n],
        eta_index: vec![0; n],
        omega_x: vec![0.0; n],
        omega_y: vec![0.0; n],
        magnitude: vec![0.0; n],
    };
    let mut value = vec![Complex64::new(0.0, 0.0); n];
    for u in 0..w {
        for v in 0..h {
            let src = u * h + v;
            let dst = v * w + u;
            let idx = best.index[src] as usize;
            let (ix, iy) = (idx / ny, idx % ny);
            ridge.xi_index[dst] = ix as u32;
            ridge.eta_index[dst] = iy as u32;
            ridge.omega_x[dst] = grid.xi(ix);
            ridge.omega_y[dst] = grid.eta(iy);
            ridge.magnitude[dst] = best.norm[src].sqrt();
            value[dst] = best.value[src];
        }
    }
    Ok(Sweep { ridge, value })
}

/// Ridge `[ω_x, ω_y] = argmax_{ξ,η} |S(u, v; ξ, η)|` at every pixel.
pub fn ridge_search(image: &Image, spec: &WindowSpec, grid: &FreqGrid) -> Result<RidgeMap> {
    Ok(sweep(image, spec, grid)?.ridge)
}

fn median(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mid = values.len() / 2;
    let (_, m, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    *m
}

/// Wrapped phase `φ₀ = angle(S at the ridge) + ω_x·u + ω_y·v`.
///
/// Since `S = exp(-i(ξu + ηv))·T` for the window correlation `T` the engine
/// computes, `φ₀` is taken as `angle(T)` directly, which is the same
/// quantity without the round trip through the carrier factor.
///
/// Pixels within the window radius of the border are invalid, as are pixels
/// whose ridge magnitude falls under the relative or contrast threshold.
pub fn ridge_phase(image: &Image, params: &WfrParams) -> Result<WfrOutput> {
    params.validate()?;
    let Sweep { ridge, value } = sweep(image, &params.window, &params.grid)?;
    let (w, h) = image.dims();
    let r = params.window.radius;
    let interior = |u: usize, v: usize| u >= r && v >= r && u + r < w && v + r < h;

    let mut interior_mags = Vec::new();
    for v in 0..h {
        for u in 0..w {
            if interior(u, v) {
                interior_mags.push(ridge.magnitude[v * w + u]);
            }
        }
    }
    let taps_x = params.window.half_taps(params.window.sigma_x);
    let taps_y = params.window.half_taps(params.window.sigma_y);
    let full_sum = |t: &[f64]| 2.0 * t.iter().sum::<f64>() - t[0];
    let window_sum = full_sum(&taps_x) * full_sum(&taps_y);
    let mean_abs = image.data().iter().map(|v| v.abs()).sum::<f64>() / (w * h) as f64;
    let threshold = (params.relative_threshold * median(interior_mags))
        .max(params.contrast_threshold * window_sum * mean_abs);

    let mut data = vec![f64::NAN; w * h];
    let mut margin_flagged = 0;
    let mut low_magnitude_flagged = 0;
    for v in 0..h {
        for u in 0..w {
            let k = v * w + u;
            if !interior(u, v) {
                margin_flagged += 1;
            } else if ridge.magnitude[k] < threshold || ridge.magnitude[k] == 0.0 {
                low_magnitude_flagged += 1;
            } else {
                data[k] = wrap_phase(value[k].arg());
            }
        }
    }
    Ok(WfrOutput {
        phase: PhaseMap::wrapped(w, h, data)?,
        ridge,
        threshold,
        margin_flagged,
        low_magnitude_flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn carrier(w: usize, h: usize, freq: f64) -> Image {
        Image::from_fn(w, h, |x, _| (freq * x as f64).cos()).unwrap()
    }

    #[test]
    fn singleton_grid_everywhere() {
        let img = carrier(24, 20, 0.7);
        let spec = WindowSpec::new(2.0, 2.0).unwrap();
        let ridge = ridge_search(&img, &spec, &FreqGrid::single(0.3, 0.1)).unwrap();
        assert!(ridge.omega_x.iter().all(|&v| v == 0.3));
        assert!(ridge.omega_y.iter().all(|&v| v == 0.1));
        assert!(ridge.xi_index.iter().all(|&i| i == 0));
    }

    #[test]
    fn ties_go_to_lowest_index() {
        // A zero image has |S| = 0 at every lattice point.
        let img = Image::constant(24, 24, 0.0).unwrap();
        let spec = WindowSpec::new(2.0, 2.0).unwrap();
        let grid = FreqGrid::new((0.5, 0.1, 1.0), (0.0, 0.1, 0.3)).unwrap();
        let ridge = ridge_search(&img, &spec, &grid).unwrap();
        assert!(ridge.xi_index.iter().all(|&i| i == 0));
        assert!(ridge.eta_index.iter().all(|&i| i == 0));
    }

    #[test]
    fn empty_grid_is_rejected() {
        let img = carrier(24, 24, 0.7);
        let grid = FreqGrid {
            x_low: 1.0,
            x_high: 0.5,
            ..FreqGrid::default()
        };
        assert!(matches!(
            ridge_search(&img, &WindowSpec::new(2.0, 2.0).unwrap(), &grid),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn blank_frame_is_flagged() {
        let img = Image::constant(80, 80, 0.5).unwrap();
        let out = ridge_phase(&img, &WfrParams::default()).unwrap();
        assert_eq!(out.phase.valid_count(), 0);
        assert_eq!(out.margin_flagged, 80 * 80 - 20 * 20);
        assert_eq!(out.low_magnitude_flagged, 20 * 20);
    }

    #[test]
    fn median_of_odd_and_empty() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![]), 0.0);
    }
}
