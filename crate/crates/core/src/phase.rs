//! Wrapped-phase arithmetic on the principal interval `(-π, π]`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::types::PhaseMap;

/// Reduces an angle to `(-π, π]`. NaN propagates.
///
/// Values already in range are returned unchanged, so the map is exactly
/// idempotent.
#[inline]
pub fn wrap_phase(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Per-pixel `wrap(a - b)`; a NaN in either operand yields an invalid pixel.
pub fn phase_diff(a: &PhaseMap, b: &PhaseMap) -> Result<PhaseMap> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch {
            expected: a.dims(),
            actual: b.dims(),
        });
    }
    let data = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&p, &q)| wrap_phase(p - q))
        .collect();
    PhaseMap::wrapped(a.width(), a.height(), data)
}
