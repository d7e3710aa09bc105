use std::fs;
use std::path::Path;

use super::{pnm, to_grayscale, BinaryImage, GrayImage};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Png,
}

impl ImageFormat {
    /// Picks the format from a file extension, defaulting to PGM.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("png") => ImageFormat::Png,
            _ => ImageFormat::Pgm,
        }
    }
}

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

/// Reads a PGM (P5/P2) or PNG file into a gray raster. Color PNGs go through
/// [`to_grayscale`]; alpha is ignored.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    if data.starts_with(PNG_MAGIC) {
        decode_png(&data)
    } else {
        pnm::decode_pgm(&data)
    }
}

fn decode_png(data: &[u8]) -> Result<GrayImage> {
    let mut decoder = png::Decoder::new(data);
    decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::format(0, format!("png header: {e}")))?;
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::format(0, format!("png data: {e}")))?;
    let (w, h) = (info.width, info.height);
    let px = &buf[..info.buffer_size()];
    let channels = info.color_type.samples();
    let gray: Vec<u8> = match channels {
        1 => px.to_vec(),
        2 => px.chunks_exact(2).map(|c| c[0]).collect(),
        3 | 4 => px
            .chunks_exact(channels)
            .map(|c| to_grayscale(c[0], c[1], c[2]))
            .collect(),
        n => {
            return Err(Error::format(
                0,
                format!("unsupported png channel count {n}"),
            ))
        }
    };
    GrayImage::from_raw(w, h, gray)
}

fn encode_png(img: &GrayImage) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width(), img.height());
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc
            .write_header()
            .map_err(|e| Error::format(0, format!("png encode: {e}")))?;
        writer
            .write_image_data(img.pixels())
            .map_err(|e| Error::format(0, format!("png encode: {e}")))?;
    }
    Ok(out)
}

pub fn save_image(img: &GrayImage, path: impl AsRef<Path>, format: ImageFormat) -> Result<()> {
    let path = path.as_ref();
    let bytes = match format {
        ImageFormat::Pgm => pnm::encode_pgm(img),
        ImageFormat::Png => encode_png(img)?,
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Saves ink as black (0) on white (255).
pub fn save_binary(img: &BinaryImage, path: impl AsRef<Path>, format: ImageFormat) -> Result<()> {
    save_image(&img.to_gray(), path, format)
}
