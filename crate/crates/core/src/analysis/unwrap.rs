use crate::phase::wrap_phase;
use crate::types::PhaseMap;

/// Itoh unwrapping along each row: within every maximal run of valid
/// samples the output starts at the run's first value and accumulates
/// wrapped first differences. Assumes the true gradient stays below π per
/// pixel.
pub fn unwrap_rows(map: &PhaseMap) -> PhaseMap {
    let (w, h) = map.dims();
    let mut data = map.data().to_vec();
    for y in 0..h {
        let row = &mut data[y * w..(y + 1) * w];
        let mut prev_in: Option<f64> = None;
        let mut prev_out = 0.0;
        for v in row.iter_mut() {
            if v.is_nan() {
                prev_in = None;
                continue;
            }
            let x = *v;
            if let Some(p) = prev_in {
                prev_out += wrap_phase(x - p);
                *v = prev_out;
            } else {
                prev_out = x;
            }
            prev_in = Some(x);
        }
    }
    PhaseMap::unwrapped(w, h, data).expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_steep_ramp() {
        let truth: Vec<f64> = (0..40).map(|x| 0.9 * x as f64 - 2.0).collect();
        let wrapped = PhaseMap::wrapped(40, 1, truth.iter().map(|&v| wrap_phase(v)).collect()).unwrap();
        let out = unwrap_rows(&wrapped);
        assert!(!out.is_wrapped());
        for (a, b) in out.data().iter().zip(&truth) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn smooth_in_range_map_is_unchanged() {
        let vals: Vec<f64> = (0..30).map(|x| 2.5 * (x as f64 / 5.0).sin()).collect();
        let map = PhaseMap::wrapped(30, 1, vals.clone()).unwrap();
        let out = unwrap_rows(&map);
        for (a, b) in out.data().iter().zip(&vals) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gaps_restart_the_run() {
        let truth = [3.0, 3.5, 4.0, f64::NAN, 3.9, 4.4];
        let wrapped: Vec<f64> = truth.iter().map(|&v| wrap_phase(v)).collect();
        let out = unwrap_rows(&PhaseMap::wrapped(6, 1, wrapped.clone()).unwrap());
        let d = out.data();
        assert!((d[2] - 4.0).abs() < 1e-12);
        assert!(d[3].is_nan());
        // Second run anchored at its own first (wrapped) sample.
        assert_eq!(d[4], wrapped[4]);
        assert!((d[5] - (wrapped[4] + 0.5)).abs() < 1e-12);
        let lone = PhaseMap::wrapped(1, 1, vec![0.4]).unwrap();
        assert_eq!(unwrap_rows(&lone).data(), &[0.4]);
    }
}
