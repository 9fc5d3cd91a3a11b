//! Synthetic hidden-grid frames with closed-form phase modulation.
//!
//! Frames follow the two-grating intensity model
//! `I = a + b·F(ω_cx·x + φ(x, y)) + c·F(ω_cy·y) + n(x, y)`, where `F` is a
//! cosine or a unit square wave and the y-grating carries no modulation.
//! The known `φ` is the ground truth against which extractors are scored.

use std::f64::consts::PI;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Image, PhaseMap};

/// Periodic profile of the grating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Waveform {
    #[default]
    Cosine,
    /// `sign(cos θ)`, with `+1` on the zero crossings.
    Square,
}

impl Waveform {
    #[inline]
    fn eval(self, theta: f64) -> f64 {
        match self {
            Waveform::Cosine => theta.cos(),
            Waveform::Square => {
                if theta.cos() >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Background, grating amplitudes and carriers of a rendered frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridModel {
    pub background: f64,
    pub amp_x: f64,
    pub amp_y: f64,
    /// Angular carrier along x, radians/pixel.
    pub carrier_x: f64,
    /// Angular carrier along y, radians/pixel.
    pub carrier_y: f64,
    pub waveform: Waveform,
}

impl Default for GridModel {
    /// Carrier 0.7 rad/px on both axes, y-grating at a tenth of the x amplitude.
    fn default() -> Self {
        Self {
            background: 0.5,
            amp_x: 0.25,
            amp_y: 0.025,
            carrier_x: 0.7,
            carrier_y: 0.7,
            waveform: Waveform::Cosine,
        }
    }
}

impl GridModel {
    pub fn validate(&self) -> Result<()> {
        let swing = self.amp_x.abs() + self.amp_y.abs();
        let vals = [
            self.background,
            self.amp_x,
            self.amp_y,
            self.carrier_x,
            self.carrier_y,
        ];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("grid model parameters must be finite"));
        }
        if self.background - swing < 0.0 || self.background + swing > 1.0 {
            return Err(Error::invalid(format!(
                "grid intensity range [{}, {}] leaves [0, 1]",
                self.background - swing,
                self.background + swing
            )));
        }
        if !(self.carrier_x > 0.0 && self.carrier_x < PI) {
            return Err(Error::invalid(format!(
                "x carrier {} must lie in (0, pi)",
                self.carrier_x
            )));
        }
        if !(self.carrier_y >= 0.0 && self.carrier_y < PI) {
            return Err(Error::invalid(format!(
                "y carrier {} must lie in [0, pi)",
                self.carrier_y
            )));
        }
        Ok(())
    }
}

/// Closed-form modulation `φ(x, y)` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum PhaseField {
    Zero,
    Ramp {
        slope_x: f64,
        slope_y: f64,
    },
    GaussianPlume {
        amplitude: f64,
        center_x: f64,
        center_y: f64,
        width: f64,
    },
    /// `A·exp(-(x - x_w)/δ)` right of the wall, zero left of it.
    BoundaryLayer {
        amplitude: f64,
        wall_x: f64,
        decay: f64,
    },
}

impl PhaseField {
    pub fn validate(&self) -> Result<()> {
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        match *self {
            PhaseField::Zero => Ok(()),
            PhaseField::Ramp { slope_x, slope_y } => {
                if finite(&[slope_x, slope_y]) {
                    Ok(())
                } else {
                    Err(Error::invalid("ramp slopes must be finite"))
                }
            }
            PhaseField::GaussianPlume {
                amplitude,
                center_x,
                center_y,
                width,
            } => {
                if !finite(&[amplitude, center_x, center_y, width]) || width <= 0.0 {
                    Err(Error::invalid("plume needs finite parameters and width > 0"))
                } else {
                    Ok(())
                }
            }
            PhaseField::BoundaryLayer {
                amplitude,
                wall_x,
                decay,
            } => {
                if !finite(&[amplitude, wall_x, decay]) || decay <= 0.0 {
                    Err(Error::invalid(
                        "boundary layer needs finite parameters and decay > 0",
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            PhaseField::Zero => 0.0,
            PhaseField::Ramp { slope_x, slope_y } => slope_x * x + slope_y * y,
            PhaseField::GaussianPlume {
                amplitude,
                center_x,
                center_y,
                width,
            } => {
                let r2 = (x - center_x).powi(2) + (y - center_y).powi(2);
                amplitude * (-r2 / (2.0 * width * width)).exp()
            }
            PhaseField::BoundaryLayer {
                amplitude,
                wall_x,
                decay,
            } => {
                if x >= wall_x {
                    amplitude * (-(x - wall_x) / decay).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// The same preset with its amplitude (or ramp slopes) multiplied by `k`.
    pub fn scaled(&self, k: f64) -> PhaseField {
        match *self {
            PhaseField::Zero => PhaseField::Zero,
            PhaseField::Ramp { slope_x, slope_y } => PhaseField::Ramp {
                slope_x: slope_x * k,
                slope_y: slope_y * k,
            },
            PhaseField::GaussianPlume {
                amplitude,
                center_x,
                center_y,
                width,
            } => PhaseField::GaussianPlume {
                amplitude: amplitude * k,
                center_x,
                center_y,
                width,
            },
            PhaseField::BoundaryLayer {
                amplitude,
                wall_x,
                decay,
            } => PhaseField::BoundaryLayer {
                amplitude: amplitude * k,
                wall_x,
                decay,
            },
        }
    }

    /// Ground truth sampled on the pixel lattice, as an unwrapped map.
    pub fn truth_map(&self, width: usize, height: usize) -> Result<PhaseMap> {
        self.validate()?;
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(self.eval(x as f64, y as f64));
            }
        }
        PhaseMap::unwrapped(width, height, data)
    }
}

/// Additive white Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(format!("noise sigma {sigma} must be >= 0")));
        }
        Ok(Self { sigma, seed })
    }
}

/// A rendered frame and how many pixels were clamped into `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub image: Image,
    pub clamped: usize,
}

// Four 32-bit words per pixel: two u64 draws feed one Box-Muller sample.
const WORDS_PER_PIXEL: u128 = 4;

fn unit_open_closed(bits: u64) -> f64 {
    ((bits >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn unit_closed_open(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Renders one row; the noise for pixel `(x, y)` of frame `frame` comes from
/// a fixed counter position of the `(seed, frame)` ChaCha stream.
fn render_row(
    model: &GridModel,
    field: &PhaseField,
    noise: &NoiseSpec,
    frame: u64,
    width: usize,
    y: usize,
    out: &mut [f64],
) -> usize {
    let mut rng = (noise.sigma > 0.0).then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
        rng.set_stream(frame);
        rng.set_word_pos((y * width) as u128 * WORDS_PER_PIXEL);
        rng
    });
    let yf = y as f64;
    let y_term = model.amp_y * model.waveform.eval(model.carrier_y * yf);
    let mut clamped = 0;
    for (x, px) in out.iter_mut().enumerate() {
        let xf = x as f64;
        let mut v = model.background
            + model.amp_x * model.waveform.eval(model.carrier_x * xf + field.eval(xf, yf))
            + y_term;
        if let Some(rng) = rng.as_mut() {
            let u1 = unit_open_closed(rng.next_u64());
            let u2 = unit_closed_open(rng.next_u64());
            let n = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
            v += noise.sigma * n;
            if !(0.0..=1.0).contains(&v) {
                v = v.clamp(0.0, 1.0);
                clamped += 1;
            }
        }
        *px = v;
    }
    clamped
}

fn render_frame(
    model: &GridModel,
    field: &PhaseField,
    noise: &NoiseSpec,
    frame: u64,
    width: usize,
    height: usize,
) -> Result<Rendered> {
    model.validate()?;
    field.validate()?;
    NoiseSpec::new(noise.sigma, noise.seed)?;
    if width == 0 || height == 0 {
        return Err(Error::invalid("image dimensions must be positive"));
    }
    let mut data = vec![0.0; width * height];
    let clamped = data
        .par_chunks_mut(width)
        .enumerate()
        .map(|(y, row)| render_row(model, field, noise, frame, width, y, row))
        .sum();
    Ok(Rendered {
        image: Image::new(width, height, data)?,
        clamped,
    })
}

/// Renders a single frame (noise stream of frame 0).
pub fn render_grid(
    model: &GridModel,
    field: &PhaseField,
    noise: &NoiseSpec,
    width: usize,
    height: usize,
) -> Result<Rendered> {
    render_frame(model, field, noise, 0, width, height)
}

/// Renders one frame per field; frame `i` draws noise from stream `i`.
pub fn render_sequence(
    model: &GridModel,
    fields: &[PhaseField],
    noise: &NoiseSpec,
    width: usize,
    height: usize,
) -> Result<Vec<Rendered>> {
    if fields.is_empty() {
        return Err(Error::invalid("field list is empty"));
    }
    fields
        .iter()
        .enumerate()
        .map(|(i, field)| render_frame(model, field, noise, i as u64, width, height))
        .collect()
}

/// `frames` copies of `base` with amplitude ramped linearly from 0 (the
/// reference frame) to `amp_max`.
///
/// `base` should carry unit amplitude; for a ramp preset the slopes scale.
pub fn ramped_fields(base: &PhaseField, frames: usize, amp_max: f64) -> Vec<PhaseField> {
    match frames {
        0 => Vec::new(),
        1 => vec![PhaseField::Zero],
        n => (0..n)
            .map(|i| {
                if i == 0 {
                    PhaseField::Zero
                } else {
                    base.scaled(amp_max * i as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plume(amplitude: f64) -> PhaseField {
        PhaseField::GaussianPlume {
            amplitude,
            center_x: 128.0,
            center_y: 128.0,
            width: 30.0,
        }
    }

    #[test]
    fn phase_presets() {
        assert_eq!(PhaseField::Zero.eval(17.0, 3.0), 0.0);
        assert_eq!(plume(2.0).eval(128.0, 128.0), 2.0);
        let bl = PhaseField::BoundaryLayer {
            amplitude: 2.0,
            wall_x: 100.0,
            decay: 40.0,
        };
        assert!((bl.eval(140.0, 5.0) - 0.7357588823428847).abs() < 1e-15);
        assert_eq!(bl.eval(99.0, 5.0), 0.0);
        let ramp = PhaseField::Ramp {
            slope_x: 0.1,
            slope_y: -0.2,
        };
        assert!((ramp.eval(10.0, 5.0) - 0.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_grating_is_constant() {
        let model = GridModel {
            amp_x: 0.0,
            amp_y: 0.0,
            ..GridModel::default()
        };
        let r = render_grid(&model, &plume(2.0), &NoiseSpec::none(), 16, 8).unwrap();
        assert!(r.image.data().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn carrier_samples() {
        let model = GridModel {
            amp_y: 0.0,
            ..GridModel::default()
        };
        let r = render_grid(&model, &PhaseField::Zero, &NoiseSpec::none(), 16, 2).unwrap();
        assert_eq!(r.image.get(0, 0), 0.75);
        // Frozen from 0.5 + 0.25*cos(0.7*9) evaluated by an independent scalar script.
        assert!((r.image.get(9, 1) - 0.7499646590958537).abs() < 1e-15);
    }

    #[test]
    fn square_wave_levels() {
        let model = GridModel {
            amp_y: 0.0,
            waveform: Waveform::Square,
            ..GridModel::default()
        };
        let r = render_grid(&model, &PhaseField::Zero, &NoiseSpec::none(), 32, 1).unwrap();
        assert!(r.image.data().iter().all(|&v| v == 0.75 || v == 0.25));
    }

    #[test]
    fn rejects_bad_models() {
        let bright = GridModel {
            background: 0.9,
            ..GridModel::default()
        };
        assert!(render_grid(&bright, &PhaseField::Zero, &NoiseSpec::none(), 4, 4).is_err());
        let aliased = GridModel {
            carrier_x: 3.2,
            ..GridModel::default()
        };
        assert!(aliased.validate().is_err());
        assert!(NoiseSpec::new(-1.0, 0).is_err());
        assert!(PhaseField::GaussianPlume {
            amplitude: 1.0,
            center_x: 0.0,
            center_y: 0.0,
            width: 0.0
        }
        .validate()
        .is_err());
    }

    #[test]
    fn noise_is_deterministic_and_clamped() {
        let noise = NoiseSpec::new(0.3, 42).unwrap();
        let a = render_grid(&GridModel::default(), &plume(1.0), &noise, 64, 32).unwrap();
        let b = render_grid(&GridModel::default(), &plume(1.0), &noise, 64, 32).unwrap();
        assert_eq!(a.image, b.image);
        assert!(a.clamped > 0);
        assert!(a.image.data().iter().all(|v| (0.0..=1.0).contains(v)));

        let other = render_grid(
            &GridModel::default(),
            &plume(1.0),
            &NoiseSpec::new(0.3, 43).unwrap(),
            64,
            32,
        )
        .unwrap();
        assert_ne!(a.image, other.image);
    }

    #[test]
    fn noise_statistics() {
        let model = GridModel {
            amp_x: 0.0,
            amp_y: 0.0,
            ..GridModel::default()
        };
        let noise = NoiseSpec::new(0.05, 7).unwrap();
        let r = render_grid(&model, &PhaseField::Zero, &noise, 128, 128).unwrap();
        let n = r.image.data().len() as f64;
        let mean = r.image.data().iter().sum::<f64>() / n;
        let var = r.image.data().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        assert!((mean - 0.5).abs() < 1e-3);
        assert!((var.sqrt() - 0.05).abs() < 1e-3);
    }

    #[test]
    fn sequence_protocol() {
        let noise = NoiseSpec::new(0.02, 9).unwrap();
        let fields = ramped_fields(&plume(1.0), 10, 2.0);
        assert_eq!(fields.len(), 10);
        assert_eq!(fields[0], PhaseField::Zero);
        assert_eq!(fields[9], plume(2.0));
        let seq = render_sequence(&GridModel::default(), &fields, &noise, 32, 32).unwrap();
        assert_eq!(seq.len(), 10);
        let reference =
            render_grid(&GridModel::default(), &PhaseField::Zero, &noise, 32, 32).unwrap();
        assert_eq!(seq[0].image, reference.image);
        let again = render_sequence(&GridModel::default(), &fields, &noise, 32, 32).unwrap();
        for (a, b) in seq.iter().zip(&again) {
            assert_eq!(a.image, b.image);
        }
        // Different frames draw from different streams.
        let flat = [PhaseField::Zero, PhaseField::Zero];
        let two = render_sequence(&GridModel::default(), &flat, &noise, 32, 32).unwrap();
        assert_ne!(two[0].image, two[1].image);

        assert!(render_sequence(&GridModel::default(), &[], &noise, 8, 8).is_err());
    }
}
