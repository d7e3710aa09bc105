//! PGM (P5 binary, P2 ASCII) decoding and P5 encoding.
//!
//! Samples with a maxval other than 255 are rescaled with
//! `(v * 255 + maxval / 2) / maxval`. 16-bit P5 rasters (maxval > 255) are
//! read big-endian as the format requires.

use super::GrayImage;
use crate::error::{Error, Result};

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read_uint(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::format(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::format(start, format!("{what} out of range")))
    }
}

fn rescale(v: u32, maxval: u32) -> u8 {
    if maxval == 255 {
        v as u8
    } else {
        ((v * 255 + maxval / 2) / maxval) as u8
    }
}

/// Decodes a P5 or P2 graymap.
pub fn decode_pgm(data: &[u8]) -> Result<GrayImage> {
    let binary = match data.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(Error::format(0, "missing P5/P2 magic number")),
    };
    let mut cur = Cursor { data, pos: 2 };
    let width = cur.read_uint("width")?;
    let height = cur.read_uint("height")?;
    let maxval_at = cur.pos;
    let maxval = cur.read_uint("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::format(2, format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::format(
            maxval_at,
            format!("maxval {maxval} not in 1..=65535"),
        ));
    }
    let count = width as usize * height as usize;
    let mut pixels = Vec::with_capacity(count);

    if binary {
        // Exactly one whitespace byte separates the header from the raster.
        match data.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(Error::format(cur.pos, "expected whitespace after maxval")),
        }
        let bytes_per = if maxval > 255 { 2 } else { 1 };
        let need = count * bytes_per;
        let raster = data.get(cur.pos..cur.pos + need).ok_or_else(|| {
            Error::format(
                data.len(),
                format!(
                    "truncated raster: need {need} bytes from offset {}",
                    cur.pos
                ),
            )
        })?;
        if bytes_per == 1 {
            for (i, &v) in raster.iter().enumerate() {
                if v as u32 > maxval {
                    return Err(Error::format(
                        cur.pos + i,
                        format!("sample {v} exceeds maxval"),
                    ));
                }
                pixels.push(rescale(v as u32, maxval));
            }
        } else {
            for (i, pair) in raster.chunks_exact(2).enumerate() {
                let v = u16::from_be_bytes([pair[0], pair[1]]) as u32;
                if v > maxval {
                    return Err(Error::format(
                        cur.pos + 2 * i,
                        format!("sample {v} exceeds maxval"),
                    ));
                }
                pixels.push(rescale(v, maxval));
            }
        }
    } else {
        for _ in 0..count {
            let at = cur.pos;
            let v = cur.read_uint("sample")?;
            if v > maxval {
                return Err(Error::format(at, format!("sample {v} exceeds maxval")));
            }
            pixels.push(rescale(v, maxval));
        }
    }
    GrayImage::from_raw(width, height, pixels)
}

/// Encodes as P5 with maxval 255: `"P5\n<w> <h>\n255\n"` then raw bytes.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.pixels().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}
