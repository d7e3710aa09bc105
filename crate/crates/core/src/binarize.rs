//! Per-region adaptive binarization.
//!
//! The threshold is the midpoint of the region's darkest and brightest
//! pixels, plus a configurable offset: `T = (min + max) / 2 + offset`. A
//! pixel is ink when its intensity is strictly below `T`. Regions whose
//! intensity span is under `min_contrast` come out blank.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BinaryImage, GrayImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarizeConfig {
    pub offset: i32,
    pub min_contrast: u32,
}

impl Default for BinarizeConfig {
    fn default() -> Self {
        Self {
            offset: 0,
            min_contrast: 12,
        }
    }
}

impl BinarizeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=255).contains(&self.min_contrast) {
            return Err(Error::Config(format!(
                "min_contrast {} outside 1..=255",
                self.min_contrast
            )));
        }
        Ok(())
    }
}

/// The threshold that [`binarize_region`] applies, or `None` for a
/// low-contrast region.
pub fn region_threshold(gray: &GrayImage, cfg: &BinarizeConfig) -> Option<i32> {
    let (lo, hi) = gray
        .pixels()
        .iter()
        .fold((u8::MAX, u8::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if ((hi - lo) as u32) < cfg.min_contrast {
        return None;
    }
    Some((lo as i32 + hi as i32) / 2 + cfg.offset)
}

pub fn binarize_region(gray: &GrayImage, cfg: &BinarizeConfig) -> BinaryImage {
    let pixels = match region_threshold(gray, cfg) {
        Some(t) => gray
            .pixels()
            .iter()
            .map(|&v| ((v as i32) < t) as u8)
            .collect(),
        None => vec![0; gray.pixels().len()],
    };
    BinaryImage::from_raw(gray.width(), gray.height(), pixels).expect("same dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_split() {
        let g = GrayImage::from_fn(4, 2, |x, _| if x < 2 { 0 } else { 255 }).unwrap();
        assert_eq!(region_threshold(&g, &BinarizeConfig::default()), Some(127));
        let b = binarize_region(&g, &BinarizeConfig::default());
        assert_eq!(b.pixels(), &[1, 1, 0, 0, 1, 1, 0, 0]);
    }

    #[test]
    fn uniform_region_is_blank() {
        let g = GrayImage::filled(5, 5, 200).unwrap();
        assert_eq!(
            binarize_region(&g, &BinarizeConfig::default()).ink_count(),
            0
        );
        // Span 11 is under the default gate of 12.
        let g = GrayImage::from_fn(2, 1, |x, _| 100 + 11 * x as u8).unwrap();
        assert_eq!(
            binarize_region(&g, &BinarizeConfig::default()).ink_count(),
            0
        );
    }

    #[test]
    fn threshold_is_strict() {
        // min 10, max 30: T = 20; the pixel at exactly 20 is background.
        let g = GrayImage::from_raw(3, 1, vec![10, 20, 30]).unwrap();
        assert_eq!(
            binarize_region(&g, &BinarizeConfig::default()).pixels(),
            &[1, 0, 0]
        );
        let cfg = BinarizeConfig {
            offset: 1,
            ..Default::default()
        };
        assert_eq!(binarize_region(&g, &cfg).pixels(), &[1, 1, 0]);
    }

    #[test]
    fn config_validation() {
        assert!(BinarizeConfig::default().validate().is_ok());
        let bad = BinarizeConfig {
            min_contrast: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
