use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::types::PhaseMap;

// `Display` for f64 is the shortest representation that parses back to the
// same bits, so no precision is lost at 17 or fewer significant digits.
fn push_value(out: &mut String, v: f64) {
    if !v.is_nan() {
        write!(out, "{v}").unwrap();
    }
}

/// Renders an `(x, value)` series as `x,value` CSV; NaN becomes an empty field.
pub fn export_series_csv(series: &[(usize, f64)]) -> String {
    let mut out = String::from("x,value\n");
    for &(x, v) in series {
        write!(out, "{x},").unwrap();
        push_value(&mut out, v);
        out.push('\n');
    }
    out
}

/// Renders a phase map as `x,y,value` triples in row-major order.
pub fn export_map_csv(map: &PhaseMap) -> String {
    let mut out = String::from("x,y,value\n");
    for y in 0..map.height() {
        for x in 0..map.width() {
            write!(out, "{x},{y},").unwrap();
            push_value(&mut out, map.get(x, y));
            out.push('\n');
        }
    }
    out
}

pub fn write_series_csv(series: &[(usize, f64)], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, export_series_csv(series))?;
    Ok(())
}

pub fn write_map_csv(map: &PhaseMap, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, export_map_csv(map))?;
    Ok(())
}
