use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::Image;

const FORMAT: &str = "PGM";

/// Sample width used when writing a PGM.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    fn max_value(self) -> u32 {
        match self {
            BitDepth::Eight => 255,
            BitDepth::Sixteen => 65535,
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn read_uint(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::format(
                FORMAT,
                start as u64,
                format!("expected {what}"),
            ));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| Error::format(FORMAT, start as u64, format!("{what} out of range")))
    }
}

/// Decodes a binary ("P5") PGM, mapping samples to `[0, 1]` by the max value.
pub fn decode_pgm(bytes: &[u8]) -> Result<Image> {
    if bytes.len() < 2 {
        return Err(Error::format(FORMAT, 0, "missing magic number"));
    }
    match &bytes[..2] {
        b"P5" => {}
        b"P2" => return Err(Error::format(FORMAT, 0, "ASCII PGM (P2) is not supported")),
        _ => return Err(Error::format(FORMAT, 0, "expected magic number P5")),
    }
    let mut cur = Cursor { bytes, pos: 2 };
    if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
        return Err(Error::format(FORMAT, 2, "expected whitespace after magic"));
    }
    let width = cur.read_uint("width")? as usize;
    let height = cur.read_uint("height")? as usize;
    let maxval_offset = cur.pos;
    let maxval = cur.read_uint("max value")?;
    if width == 0 || height == 0 {
        return Err(Error::format(FORMAT, 3, "zero image dimension"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::format(
            FORMAT,
            maxval_offset as u64,
            format!("max value {maxval} outside 1..=65535"),
        ));
    }
    if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
        return Err(Error::format(
            FORMAT,
            cur.pos as u64,
            "expected single whitespace before raster",
        ));
    }
    let start = cur.pos + 1;
    let bytes_per_sample = if maxval < 256 { 1 } else { 2 };
    let count = width * height;
    let needed = count * bytes_per_sample;
    let available = bytes.len() - start;
    if available < needed {
        return Err(Error::format(
            FORMAT,
            bytes.len() as u64,
            format!("truncated raster: need {needed} bytes from offset {start}, found {available}"),
        ));
    }
    let raster = &bytes[start..start + needed];
    let scale = f64::from(maxval);
    let mut data = Vec::with_capacity(count);
    for (i, chunk) in raster.chunks_exact(bytes_per_sample).enumerate() {
        let v = if bytes_per_sample == 1 {
            u32::from(chunk[0])
        } else {
            u32::from(u16::from_be_bytes([chunk[0], chunk[1]]))
        };
        if v > maxval {
            return Err(Error::format(
                FORMAT,
                (start + i * bytes_per_sample) as u64,
                format!("sample {v} exceeds max value {maxval}"),
            ));
        }
        data.push(f64::from(v) / scale);
    }
    Image::new(width, height, data)
}

/// Encodes an image with intensities in `[0, 1]`, rounding half to even.
pub fn encode_pgm(image: &Image, depth: BitDepth) -> Result<Vec<u8>> {
    let maxval = depth.max_value();
    let mut out = format!("P5\n{} {}\n{}\n", image.width(), image.height(), maxval).into_bytes();
    let scale = f64::from(maxval);
    for (i, &v) in image.data().iter().enumerate() {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::invalid(format!(
                "intensity {v} at index {i} outside [0, 1]"
            )));
        }
        let q = (v * scale).round_ties_even() as u32;
        match depth {
            BitDepth::Eight => out.push(q as u8),
            BitDepth::Sixteen => out.extend_from_slice(&(q as u16).to_be_bytes()),
        }
    }
    Ok(out)
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<Image> {
    decode_pgm(&fs::read(path)?)
}

pub fn save_pgm(image: &Image, path: impl AsRef<Path>, depth: BitDepth) -> Result<()> {
    fs::write(path, encode_pgm(image, depth)?)?;
    Ok(())
}
