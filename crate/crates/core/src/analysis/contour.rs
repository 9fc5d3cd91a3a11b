//! Marching-squares level sets with linear edge interpolation.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::save_fgrid;
use crate::types::PhaseMap;

/// Contour segment in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub level: f64,
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

fn validate_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::EmptyLevels);
    }
    if levels.iter().any(|l| !l.is_finite()) {
        return Err(Error::invalid("contour levels must be finite"));
    }
    if levels.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("contour levels must be sorted ascending"));
    }
    Ok(())
}

/// Segments for every level. Cells with any invalid corner are skipped;
/// saddle cells are resolved by the mean of the four corners.
pub fn contour_segments(map: &PhaseMap, levels: &[f64]) -> Result<Vec<Segment>> {
    validate_levels(levels)?;
    let (w, h) = map.dims();
    let mut out = Vec::new();
    for &level in levels {
        for y in 0..h.saturating_sub(1) {
            for x in 0..w.saturating_sub(1) {
                march_cell(map, x, y, level, &mut out);
            }
        }
    }
    Ok(out)
}

fn march_cell(map: &PhaseMap, x: usize, y: usize, level: f64, out: &mut Vec<Segment>) {
    // Corners counter-clockwise from (x, y).
    let v = [
        map.get(x, y),
        map.get(x + 1, y),
        map.get(x + 1, y + 1),
        map.get(x, y + 1),
    ];
    if v.iter().any(|c| c.is_nan()) {
        return;
    }
    let (xf, yf) = (x as f64, y as f64);
    let pos = [(xf, yf), (xf + 1.0, yf), (xf + 1.0, yf + 1.0), (xf, yf + 1.0)];
    let above = v.map(|c| c >= level);

    // Edge k joins corner k and corner k+1.
    let mut crossings: [Option<(f64, f64)>; 4] = [None; 4];
    for k in 0..4 {
        let j = (k + 1) % 4;
        if above[k] != above[j] {
            let t = (level - v[k]) / (v[j] - v[k]);
            crossings[k] = Some((
                pos[k].0 + t * (pos[j].0 - pos[k].0),
                pos[k].1 + t * (pos[j].1 - pos[k].1),
            ));
        }
    }
    let mut emit = |a: usize, b: usize| {
        if let (Some(p), Some(q)) = (crossings[a], crossings[b]) {
            out.push(Segment {
                level,
                x0: p.0,
                y0: p.1,
                x1: q.0,
                y1: q.1,
            });
        }
    };
    let count = crossings.iter().filter(|c| c.is_some()).count();
    match count {
        2 => {
            let mut it = (0..4).filter(|&k| crossings[k].is_some());
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            emit(a, b);
        }
        4 => {
            let center = v.iter().sum::<f64>() / 4.0 >= level;
            if center == above[0] {
                // Corners 0 and 2 connect through the center.
                emit(0, 1);
                emit(2, 3);
            } else {
                emit(3, 0);
                emit(1, 2);
            }
        }
        _ => {}
    }
}

/// `level,x0,y0,x1,y1` rows.
pub fn export_segments_csv(segments: &[Segment]) -> String {
    let mut out = String::from("level,x0,y0,x1,y1\n");
    for s in segments {
        writeln!(out, "{},{},{},{},{}", s.level, s.x0, s.y0, s.x1, s.y1).unwrap();
    }
    out
}

/// Writes the map as FGRID and its contour segments as CSV.
pub fn contour_grid(
    map: &PhaseMap,
    levels: &[f64],
    fgrid_path: impl AsRef<Path>,
    csv_path: impl AsRef<Path>,
) -> Result<Vec<Segment>> {
    let segments = contour_segments(map, levels)?;
    save_fgrid(map, fgrid_path)?;
    fs::write(csv_path, export_segments_csv(&segments))?;
    Ok(segments)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize, k: f64) -> PhaseMap {
        PhaseMap::unwrapped(w, h, (0..w * h).map(|i| k * (i % w) as f64).collect()).unwrap()
    }

    #[test]
    fn constant_map_has_no_segments() {
        let map = PhaseMap::wrapped(5, 5, vec![1.0; 25]).unwrap();
        assert!(contour_segments(&map, &[0.5, 1.5]).unwrap().is_empty());
    }

    #[test]
    fn ramp_gives_straight_lines() {
        let map = ramp(20, 10, 0.1);
        let segs = contour_segments(&map, &[0.5, 1.0, 1.5]).unwrap();
        for (level, x) in [(0.5, 5.0), (1.0, 10.0), (1.5, 15.0)] {
            let on_level: Vec<_> = segs.iter().filter(|s| s.level == level).collect();
            assert_eq!(on_level.len(), 9);
            for s in on_level {
                assert!((s.x0 - x).abs() < 1e-9 && (s.x1 - x).abs() < 1e-9);
                assert!((s.y1 - s.y0).abs() == 1.0);
            }
        }
    }

    #[test]
    fn nan_cells_are_skipped() {
        let mut map = ramp(4, 2, 1.0);
        map.invalidate(1, 0);
        let segs = contour_segments(&map, &[1.5]).unwrap();
        // Only the cell spanning columns 1..2 crosses 1.5 and it touches the NaN.
        assert!(segs.is_empty());
    }

    #[test]
    fn saddle_uses_center() {
        // Diagonal highs with a high center: the two low corners are cut off.
        let map = PhaseMap::unwrapped(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let segs = contour_segments(&map, &[0.4]).unwrap();
        assert_eq!(segs.len(), 2);
        // Corner (1, 0) is low: one segment joins the bottom and right edges.
        assert!(segs.iter().any(|s| s.y0 == 0.0 && s.x1 == 1.0));
    }

    #[test]
    fn level_validation() {
        let map = ramp(3, 3, 1.0);
        assert!(matches!(contour_segments(&map, &[]), Err(Error::EmptyLevels)));
        assert!(contour_segments(&map, &[1.0, 0.5]).is_err());
        assert!(contour_segments(&map, &[f64::NAN]).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = Segment {
            level: 0.5,
            x0: 1.0,
            y0: 2.25,
            x1: 1.5,
            y1: 3.0,
        };
        assert_eq!(export_segments_csv(&[s]), "level,x0,y0,x1,y1\n0.5,1,2.25,1.5,3\n");
    }
}
