use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaussian window widths and truncation radius, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub radius: usize,
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self::new(10.0, 10.0).expect("default window is valid")
    }
}

impl WindowSpec {
    /// Window truncated at `ceil(3·max(σx, σy))`.
    pub fn new(sigma_x: f64, sigma_y: f64) -> Result<Self> {
        let radius = (3.0 * sigma_x.max(sigma_y)).ceil();
        Self::with_radius(sigma_x, sigma_y, radius as usize)
    }

    pub fn with_radius(sigma_x: f64, sigma_y: f64, radius: usize) -> Result<Self> {
        if !(sigma_x > 0.0 && sigma_y > 0.0 && sigma_x.is_finite() && sigma_y.is_finite()) {
            return Err(Error::invalid(format!(
                "window sigmas ({sigma_x}, {sigma_y}) must be positive"
            )));
        }
        let min_radius = (2.0 * sigma_x.max(sigma_y)).ceil() as usize;
        if radius < min_radius {
            return Err(Error::invalid(format!(
                "truncation radius {radius} below ceil(2*sigma) = {min_radius}"
            )));
        }
        Ok(Self {
            sigma_x,
            sigma_y,
            radius,
        })
    }

    pub fn validate(&self) -> Result<()> {
        Self::with_radius(self.sigma_x, self.sigma_y, self.radius).map(|_| ())
    }

    /// Side length of the square support, `2R + 1`.
    pub fn support(&self) -> usize {
        2 * self.radius + 1
    }

    /// One-dimensional factor `exp(-p²/(2σ²))` for `p = 0..=R`.
    pub(crate) fn half_taps(&self, sigma: f64) -> Vec<f64> {
        (0..=self.radius)
            .map(|p| {
                let p = p as f64;
                (-p * p / (2.0 * sigma * sigma)).exp()
            })
            .collect()
    }
}

/// Sampled window `w(x, y)` on offsets `|x|, |y| <= R`, row-major.
#[derive(Debug, Clone)]
pub struct Window {
    pub radius: usize,
    pub values: Vec<f64>,
}

impl Window {
    pub fn support(&self) -> usize {
        2 * self.radius + 1
    }

    /// Value at offset `(dx, dy)`; zero outside the support.
    pub fn at(&self, dx: isize, dy: isize) -> f64 {
        let r = self.radius as isize;
        if dx.abs() > r || dy.abs() > r {
            return 0.0;
        }
        let n = self.support();
        self.values[(dy + r) as usize * n + (dx + r) as usize]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Samples `w(x, y) = exp(-x²/(2σx²) - y²/(2σy²))`; the peak is exactly 1.
pub fn make_window(spec: &WindowSpec) -> Result<Window> {
    spec.validate()?;
    let r = spec.radius as isize;
    let mut values = Vec::with_capacity(spec.support() * spec.support());
    for dy in -r..=r {
        for dx in -r..=r {
            let (x, y) = (dx as f64, dy as f64);
            values.push(
                (-x * x / (2.0 * spec.sigma_x * spec.sigma_x)
                    - y * y / (2.0 * spec.sigma_y * spec.sigma_y))
                    .exp(),
            );
        }
    }
    Ok(Window {
        radius: spec.radius,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_values() {
        let spec = WindowSpec::new(10.0, 10.0).unwrap();
        assert_eq!(spec.radius, 30);
        let w = make_window(&spec).unwrap();
        assert_eq!(w.support(), 61);
        assert_eq!(w.values.len(), 61 * 61);
        assert_eq!(w.at(0, 0), 1.0);
        assert!((w.at(10, 0) - (-0.5f64).exp()).abs() < 1e-15);
        assert!((w.at(10, 0) - 0.60653).abs() < 1e-5);
        assert_eq!(w.at(31, 0), 0.0);
        assert_eq!(w.at(-7, 3), w.at(7, -3));
    }

    #[test]
    fn anisotropic_radius_uses_larger_sigma() {
        let spec = WindowSpec::new(2.0, 4.5).unwrap();
        assert_eq!(spec.radius, 14);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(WindowSpec::new(0.0, 1.0).is_err());
        assert!(WindowSpec::new(1.0, f64::NAN).is_err());
        assert!(WindowSpec::with_radius(10.0, 10.0, 19).is_err());
        assert!(WindowSpec::with_radius(10.0, 10.0, 20).is_ok());
    }
}
