use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Search lattice of candidate angular frequencies, radians/pixel.
///
/// Each axis is `low, low + step, ...` up to and including `high` when the
/// span is a whole number of steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqGrid {
    pub x_low: f64,
    pub x_step: f64,
    pub x_high: f64,
    pub y_low: f64,
    pub y_step: f64,
    pub y_high: f64,
}

impl Default for FreqGrid {
    /// 0.5:0.01:1.0 along x and 0:0.00025:0.001 along y (51 × 5 samples).
    fn default() -> Self {
        Self {
            x_low: 0.5,
            x_step: 0.01,
            x_high: 1.0,
            y_low: 0.0,
            y_step: 0.00025,
            y_high: 0.001,
        }
    }
}

fn axis_count(low: f64, step: f64, high: f64, axis: &str) -> Result<usize> {
    if !(low.is_finite() && step.is_finite() && high.is_finite()) {
        return Err(Error::invalid(format!("{axis} frequency range must be finite")));
    }
    if !(step > 0.0) {
        return Err(Error::invalid(format!("{axis} frequency step must be > 0")));
    }
    if low > high {
        return Err(Error::EmptyGrid);
    }
    // Relative slack so that 0.5:0.01:1.0 includes 1.0 despite rounding.
    let span = (high - low) / step;
    Ok((span + 1e-9 * span.max(1.0)).floor() as usize + 1)
}

impl FreqGrid {
    pub fn new(
        (x_low, x_step, x_high): (f64, f64, f64),
        (y_low, y_step, y_high): (f64, f64, f64),
    ) -> Result<Self> {
        let g = Self {
            x_low,
            x_step,
            x_high,
            y_low,
            y_step,
            y_high,
        };
        g.validate()?;
        Ok(g)
    }

    /// One-sample grid at `(xi, eta)`.
    pub fn single(xi: f64, eta: f64) -> Self {
        Self {
            x_low: xi,
            x_step: 1.0,
            x_high: xi,
            y_low: eta,
            y_step: 1.0,
            y_high: eta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.x_count()?;
        self.y_count()?;
        Ok(())
    }

    pub fn x_count(&self) -> Result<usize> {
        axis_count(self.x_low, self.x_step, self.x_high, "x")
    }

    pub fn y_count(&self) -> Result<usize> {
        axis_count(self.y_low, self.y_step, self.y_high, "y")
    }

    pub fn len(&self) -> Result<usize> {
        Ok(self.x_count()? * self.y_count()?)
    }

    #[inline]
    pub fn xi(&self, i: usize) -> f64 {
        self.x_low + i as f64 * self.x_step
    }

    #[inline]
    pub fn eta(&self, j: usize) -> f64 {
        self.y_low + j as f64 * self.y_step
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_counts() {
        let g = FreqGrid::default();
        assert_eq!(g.x_count().unwrap(), 51);
        assert_eq!(g.y_count().unwrap(), 5);
        assert_eq!(g.len().unwrap(), 255);
        assert!((g.xi(20) - 0.7).abs() < 1e-15);
        assert!((g.xi(50) - 1.0).abs() < 1e-15);
        assert!((g.eta(4) - 0.001).abs() < 1e-18);
    }

    #[test]
    fn partial_last_step_is_excluded() {
        let g = FreqGrid::new((0.5, 0.3, 1.0), (0.0, 1.0, 0.0)).unwrap();
        assert_eq!(g.x_count().unwrap(), 2);
        assert_eq!(g.y_count().unwrap(), 1);
    }

    #[test]
    fn invalid_grids() {
        assert!(matches!(
            FreqGrid::new((1.0, 0.1, 0.5), (0.0, 1.0, 0.0)),
            Err(Error::EmptyGrid)
        ));
        assert!(FreqGrid::new((0.5, 0.0, 1.0), (0.0, 1.0, 0.0)).is_err());
        assert!(FreqGrid::new((0.5, 0.1, 1.0), (0.0, -1.0, 0.0)).is_err());
        assert_eq!(FreqGrid::single(0.7, 0.0).len().unwrap(), 1);
    }
}
