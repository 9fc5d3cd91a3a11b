use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::{Image, PhaseMap};

const FORMAT: &str = "FGRID";

pub const FGRID_MAGIC: &[u8; 4] = b"FGR1";

const HEADER_LEN: usize = 12;

/// Encodes a raw float lattice: magic, LE u32 width and height, LE f64 values.
pub fn encode_fgrid(width: usize, height: usize, values: &[f64]) -> Result<Vec<u8>> {
    let w = u32::try_from(width).map_err(|_| Error::invalid("width exceeds u32"))?;
    let h = u32::try_from(height).map_err(|_| Error::invalid("height exceeds u32"))?;
    if values.len() != width * height {
        return Err(Error::invalid(format!(
            "{width}x{height} grid needs {} values, got {}",
            width * height,
            values.len()
        )));
    }
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * values.len());
    out.extend_from_slice(FGRID_MAGIC);
    out.extend_from_slice(&w.to_le_bytes());
    out.extend_from_slice(&h.to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_bits().to_le_bytes());
    }
    Ok(out)
}

/// Decodes an FGRID payload into `(width, height, values)`, bit for bit.
pub fn decode_fgrid(bytes: &[u8]) -> Result<(usize, usize, Vec<f64>)> {
    if bytes.len() < 4 || &bytes[..4] != FGRID_MAGIC {
        return Err(Error::format(FORMAT, 0, "bad magic, expected FGR1"));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::format(FORMAT, bytes.len() as u64, "truncated header"));
    }
    let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::format(FORMAT, 4, "dimensions overflow"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != count * 8 {
        return Err(Error::format(
            FORMAT,
            (HEADER_LEN + payload.len().min(count * 8)) as u64,
            format!(
                "{width}x{height} grid needs {} payload bytes, found {}",
                count * 8,
                payload.len()
            ),
        ));
    }
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_bits(u64::from_le_bytes(c.try_into().unwrap())))
        .collect();
    Ok((width, height, values))
}

/// Loads a phase map; it is flagged wrapped when every valid value lies in `(-π, π]`.
pub fn load_fgrid(path: impl AsRef<Path>) -> Result<PhaseMap> {
    let (w, h, values) = decode_fgrid(&fs::read(path)?)?;
    PhaseMap::infer(w, h, values)
}

pub fn save_fgrid(map: &PhaseMap, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_fgrid(map.width(), map.height(), map.data())?)?;
    Ok(())
}

/// Loads an FGRID as an intensity image; NaN entries are rejected.
pub fn load_fgrid_image(path: impl AsRef<Path>) -> Result<Image> {
    let (w, h, values) = decode_fgrid(&fs::read(path)?)?;
    Image::new(w, h, values)
}

pub fn save_fgrid_image(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_fgrid(image.width(), image.height(), image.data())?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn round_trip_keeps_nan_bits() {
        let values = [0.0, PI, f64::NAN, -0.0];
        let bytes = encode_fgrid(2, 2, &values).unwrap();
        assert_eq!(bytes.len(), 12 + 32);
        let (w, h, back) = decode_fgrid(&bytes).unwrap();
        assert_eq!((w, h), (2, 2));
        let bits: Vec<u64> = values.iter().map(|v| v.to_bits()).collect();
        let back_bits: Vec<u64> = back.iter().map(|v| v.to_bits()).collect();
        assert_eq!(bits, back_bits);
    }

    #[test]
    fn rejects_bad_magic() {
        let mut bytes = encode_fgrid(1, 1, &[1.0]).unwrap();
        bytes[..4].copy_from_slice(b"XXXX");
        assert!(matches!(
            decode_fgrid(&bytes),
            Err(Error::Format { offset: 0, .. })
        ));
    }

    #[test]
    fn rejects_short_payload() {
        let mut bytes = encode_fgrid(4, 4, &[0.5; 16]).unwrap();
        bytes.truncate(12 + 15 * 8);
        assert!(matches!(decode_fgrid(&bytes), Err(Error::Format { .. })));
    }

    #[test]
    fn header_layout_is_little_endian() {
        let bytes = encode_fgrid(3, 1, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(&bytes[..12], b"FGR1\x03\x00\x00\x00\x01\x00\x00\x00");
        assert_eq!(&bytes[12..20], &1.0f64.to_le_bytes());
    }
}
