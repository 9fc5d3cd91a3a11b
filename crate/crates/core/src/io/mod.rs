//! File formats: binary PGM for intensity frames, FGRID for lossless
//! float fields, and CSV for profiles, maps and contour segments.

mod csv;
mod fgrid;
mod pgm;

pub use self::csv::{export_map_csv, export_series_csv, write_map_csv, write_series_csv};
pub use self::fgrid::{
    decode_fgrid, encode_fgrid, load_fgrid, load_fgrid_image, save_fgrid, save_fgrid_image,
    FGRID_MAGIC,
};
pub use self::pgm::{decode_pgm, encode_pgm, load_pgm, save_pgm, BitDepth};

use std::path::Path;

use crate::error::Result;
use crate::types::Image;

/// Loads an intensity frame, choosing the decoder by file extension
/// (`.fgrid` for float grids, PGM otherwise).
pub fn load_image(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("fgrid") => load_fgrid_image(path),
        _ => load_pgm(path),
    }
}
