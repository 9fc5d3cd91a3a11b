use crate::error::{Error, Result};
use crate::phase::wrap_phase;
use crate::types::PhaseMap;

/// One row of a phase map; NaN where invalid.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub row: usize,
    pub values: Vec<f64>,
}

impl Profile {
    /// `(column, value)` pairs for CSV export.
    pub fn series(&self) -> Vec<(usize, f64)> {
        self.values.iter().copied().enumerate().collect()
    }
}

pub fn line_profile(map: &PhaseMap, row: usize) -> Result<Profile> {
    if row >= map.height() {
        return Err(Error::RowOutOfRange {
            row,
            height: map.height(),
        });
    }
    Ok(Profile {
        row,
        values: map.row(row).to_vec(),
    })
}

/// Root mean square of `wrap(estimate - truth)` over jointly valid pixels.
pub fn rmse(estimate: &PhaseMap, truth: &PhaseMap) -> Result<f64> {
    if estimate.dims() != truth.dims() {
        return Err(Error::DimensionMismatch {
            expected: truth.dims(),
            actual: estimate.dims(),
        });
    }
    let (sum, count) = estimate
        .data()
        .iter()
        .zip(truth.data())
        .filter(|(e, t)| !e.is_nan() && !t.is_nan())
        .fold((0.0, 0usize), |(s, n), (e, t)| {
            (s + wrap_phase(e - t).powi(2), n + 1)
        });
    if count == 0 {
        return Err(Error::NoValidPixels);
    }
    Ok((sum / count as f64).sqrt())
}

/// Maximal runs of consecutive valid samples, as index ranges.
fn valid_runs(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, v) in values.iter().enumerate() {
        match (v.is_nan(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                runs.push(s..i);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push(s..values.len());
    }
    runs
}

/// Mean squared second difference over all maximal valid runs.
pub fn roughness(profile: &Profile) -> Result<f64> {
    let runs = valid_runs(&profile.values);
    let longest = runs.iter().map(|r| r.len()).max().unwrap_or(0);
    if longest < 3 {
        return Err(Error::InsufficientSamples {
            needed: 3,
            found: longest,
        });
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for run in runs.into_iter().filter(|r| r.len() >= 3) {
        let p = &profile.values[run];
        for w in p.windows(3) {
            sum += (w[2] - 2.0 * w[1] + w[0]).powi(2);
            count += 1;
        }
    }
    Ok(sum / count as f64)
}

/// Least-squares fit of `A·exp(-(x - x_start)/δ)` to a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub amplitude: f64,
    pub length: f64,
    pub samples: usize,
}

/// Fits `ln(value)` linearly against the column over `[x_start, x_end)`,
/// using valid samples with positive value.
pub fn fit_exponential_decay(profile: &Profile, x_start: usize, x_end: usize) -> Result<DecayFit> {
    let end = x_end.min(profile.values.len());
    let pts: Vec<(f64, f64)> = (x_start..end)
        .filter_map(|x| {
            let v = profile.values[x];
            (v > 0.0).then(|| ((x - x_start) as f64, v.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            found: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(Error::invalid("profile does not decay"));
    }
    Ok(DecayFit {
        amplitude: (my - slope * mx).exp(),
        length: -1.0 / slope,
        samples: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(values: Vec<f64>) -> Profile {
        Profile { row: 0, values }
    }

    #[test]
    fn line_profile_copies_row() {
        let map = PhaseMap::wrapped(3, 2, vec![1.2, 1.2, 1.2, f64::NAN, f64::NAN, f64::NAN]).unwrap();
        assert_eq!(line_profile(&map, 0).unwrap().values, vec![1.2; 3]);
        assert!(line_profile(&map, 1).unwrap().values.iter().all(|v| v.is_nan()));
        assert!(matches!(
            line_profile(&map, 2),
            Err(Error::RowOutOfRange { row: 2, height: 2 })
        ));
    }

    #[test]
    fn rmse_cases() {
        let truth = PhaseMap::wrapped(2, 2, vec![0.1, -0.5, 1.0, f64::NAN]).unwrap();
        assert_eq!(rmse(&truth, &truth).unwrap(), 0.0);
        let shifted = PhaseMap::wrapped(2, 2, vec![0.2, -0.4, 1.1, 2.0]).unwrap();
        assert!((rmse(&shifted, &truth).unwrap() - 0.1).abs() < 1e-12);
        let empty = PhaseMap::wrapped(2, 2, vec![f64::NAN; 4]).unwrap();
        assert!(matches!(rmse(&empty, &truth), Err(Error::NoValidPixels)));
    }

    #[test]
    fn roughness_cases() {
        let ramp = profile((0..10).map(|x| 0.3 * x as f64 - 1.0).collect());
        assert!(roughness(&ramp).unwrap() < 1e-28);
        let k = 0.2;
        let quad = profile((0..10).map(|x| 0.5 * k * (x * x) as f64).collect());
        assert!((roughness(&quad).unwrap() - k * k).abs() < 1e-12);
        // A NaN gap splits the runs; second differences never straddle it.
        let split = profile(vec![0.0, 1.0, 2.0, f64::NAN, 10.0, 20.0, 30.0]);
        assert_eq!(roughness(&split).unwrap(), 0.0);
        let short = profile(vec![0.0, 1.0, f64::NAN, 2.0]);
        assert!(matches!(
            roughness(&short),
            Err(Error::InsufficientSamples { found: 2, .. })
        ));
    }

    #[test]
    fn decay_fit_recovers_exponential() {
        let p = profile((0..100).map(|x| 1.5 * (-(x as f64 - 20.0) / 12.0).exp()).collect());
        let fit = fit_exponential_decay(&p, 20, 80).unwrap();
        assert!((fit.length - 12.0).abs() < 1e-9);
        assert!((fit.amplitude - 1.5).abs() < 1e-9);
        assert!(fit_exponential_decay(&profile(vec![1.0; 10]), 0, 10).is_err());
    }
}
