//! Pixel-lattice containers shared by every stage of the pipeline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::invalid(format!(
            "dimensions must be positive, got {width}x{height}"
        )));
    }
    if width.checked_mul(height) != Some(len) {
        return Err(Error::invalid(format!(
            "{width}x{height} lattice needs {} values, got {len}",
            width.saturating_mul(height)
        )));
    }
    Ok(())
}

/// Scalar intensity image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "intensity at ({}, {}) is not finite",
                i % width,
                i / width
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// Applies `f` to every intensity; the result must stay finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Image> {
        Image::new(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }
}

/// Field of phase values in radians. Invalid pixels hold NaN.
///
/// A wrapped map keeps every valid value in `(-π, π]`; unwrapped maps are
/// unbounded.
#[derive(Debug, Clone)]
pub struct PhaseMap {
    width: usize,
    height: usize,
    data: Vec<f64>,
    wrapped: bool,
}

impl PhaseMap {
    /// Builds a wrapped map, rejecting finite values outside `(-π, π]`.
    pub fn wrapped(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        let pi = std::f64::consts::PI;
        if let Some(i) = data
            .iter()
            .position(|v| v.is_infinite() || (!v.is_nan() && !(*v > -pi && *v <= pi)))
        {
            return Err(Error::invalid(format!(
                "wrapped phase {} at index {i} outside (-pi, pi]",
                data[i]
            )));
        }
        Ok(Self {
            width,
            height,
            data,
            wrapped: true,
        })
    }

    pub fn unwrapped(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        if data.iter().any(|v| v.is_infinite()) {
            return Err(Error::invalid("phase values must be finite or NaN"));
        }
        Ok(Self {
            width,
            height,
            data,
            wrapped: false,
        })
    }

    /// Wrapped if every valid value already lies in `(-π, π]`, unwrapped otherwise.
    pub fn infer(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        let pi = std::f64::consts::PI;
        if data.iter().all(|v| v.is_nan() || (*v > -pi && *v <= pi)) {
            Self::wrapped(width, height, data)
        } else {
            Self::unwrapped(width, height, data)
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn is_wrapped(&self) -> bool {
        self.wrapped
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        !self.get(x, y).is_nan()
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// Boolean view of the NaN sentinel: true where the pixel carries a phase.
    pub fn validity(&self) -> Vec<bool> {
        self.data.iter().map(|v| !v.is_nan()).collect()
    }

    pub fn valid_count(&self) -> usize {
        self.data.iter().filter(|v| !v.is_nan()).count()
    }

    pub fn invalid_count(&self) -> usize {
        self.data.len() - self.valid_count()
    }

    pub fn invalidate(&mut self, x: usize, y: usize) {
        let w = self.width;
        self.data[y * w + x] = f64::NAN;
    }

    /// Marks every pixel excluded by `mask` invalid.
    pub fn apply_mask(&mut self, mask: &Mask) -> Result<()> {
        if mask.dims() != self.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                actual: mask.dims(),
            });
        }
        for (v, &excluded) in self.data.iter_mut().zip(mask.data()) {
            if excluded {
                *v = f64::NAN;
            }
        }
        Ok(())
    }

    /// Invalidates a frame of `margin` pixels along every border.
    pub fn invalidate_border(&mut self, margin: usize) {
        let (w, h) = self.dims();
        for y in 0..h {
            for x in 0..w {
                if x < margin || y < margin || x + margin >= w || y + margin >= h {
                    self.data[y * w + x] = f64::NAN;
                }
            }
        }
    }
}

/// Per-pixel exclusion mask; `true` excludes the pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width.saturating_mul(height)])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut data = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// Excludes the half-open rectangle `[x0, x1) × [y0, y1)`.
    pub fn rectangle(
        width: usize,
        height: usize,
        x0: usize,
        y0: usize,
        x1: usize,
        y1: usize,
    ) -> Result<Self> {
        Self::from_fn(width, height, |x, y| x >= x0 && x < x1 && y >= y0 && y < y1)
    }

    /// Pixels at or above `threshold` are excluded.
    pub fn from_image(image: &Image, threshold: f64) -> Self {
        Self {
            width: image.width(),
            height: image.height(),
            data: image.data().iter().map(|&v| v >= threshold).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn is_excluded(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn excluded_count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// True when every pixel excluded here is also excluded in `other`.
    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.dims() == other.dims() && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }
}

/// Frame bookkeeping. Temperature is informational only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameMeta {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
}

impl FrameMeta {
    pub fn new(index: usize, temperature_k: Option<f64>) -> Result<Self> {
        if let Some(t) = temperature_k {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::invalid(format!("temperature {t} K must be >= 0")));
            }
        }
        Ok(Self {
            index,
            temperature_k,
        })
    }
}
