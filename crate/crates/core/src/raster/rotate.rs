//! Nearest-neighbor rotation by inverse mapping.
//!
//! Positive angles turn content counter-clockwise as displayed (y pointing
//! down). Source and destination are aligned at their centers; coordinates
//! are handled in doubled units so half-pixel centers stay integral, and the
//! trigonometry is Q16.16 from the shared tables.

use super::GrayImage;
use crate::trig::{cos_q16, sin_q16, ONE_Q16, QUARTER_TURN};

/// `(sin, cos)` of a centidegree angle in Q16.16.
pub fn sin_cos_q16(angle: i32) -> (i64, i64) {
    (sin_q16(angle), cos_q16(angle))
}

/// A rotation between a source raster and a destination canvas of known
/// sizes. Both directions use identical fixed-point arithmetic, so boxes can
/// be carried through the same transform the pixels went through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rotation {
    pub angle: i32,
    pub src_w: u32,
    pub src_h: u32,
    pub dst_w: u32,
    pub dst_h: u32,
    sin: i64,
    cos: i64,
}

/// Rounds a doubled, Q16-scaled coordinate (already re-centered) to a pixel index.
#[inline]
fn to_pixel(doubled_q16: i64) -> i64 {
    (doubled_q16 + ONE_Q16).div_euclid(2 * ONE_Q16)
}

impl Rotation {
    /// Rotation onto an explicitly sized canvas.
    pub fn with_canvas(angle: i32, src_w: u32, src_h: u32, dst_w: u32, dst_h: u32) -> Self {
        assert!(
            angle.abs() <= QUARTER_TURN,
            "rotation angle {angle} outside +-9000 centidegrees"
        );
        let (sin, cos) = sin_cos_q16(angle);
        Self {
            angle,
            src_w,
            src_h,
            dst_w,
            dst_h,
            sin,
            cos,
        }
    }

    /// Rotation onto the smallest canvas holding the rotated source bounds.
    pub fn expanding(angle: i32, src_w: u32, src_h: u32) -> Self {
        let (s, c) = sin_cos_q16(angle);
        let (s, c) = (s.abs(), c.abs());
        let (w, h) = (src_w as i64, src_h as i64);
        let dst_w = ((w * c + h * s + ONE_Q16 - 1) >> 16).max(1);
        let dst_h = ((w * s + h * c + ONE_Q16 - 1) >> 16).max(1);
        Self::with_canvas(angle, src_w, src_h, dst_w as u32, dst_h as u32)
    }

    /// Source pixel sampled for destination `(x, y)`; may fall outside the source.
    #[inline]
    pub fn source_of(&self, x: i64, y: i64) -> (i64, i64) {
        let dx = 2 * x - (self.dst_w as i64 - 1);
        let dy = 2 * y - (self.dst_h as i64 - 1);
        let sx = dx * self.cos - dy * self.sin + (self.src_w as i64 - 1) * ONE_Q16;
        let sy = dx * self.sin + dy * self.cos + (self.src_h as i64 - 1) * ONE_Q16;
        (to_pixel(sx), to_pixel(sy))
    }

    /// Destination pixel a source pixel `(x, y)` lands on; may fall outside the canvas.
    #[inline]
    pub fn dest_of(&self, x: i64, y: i64) -> (i64, i64) {
        let sx = 2 * x - (self.src_w as i64 - 1);
        let sy = 2 * y - (self.src_h as i64 - 1);
        let dx = sx * self.cos + sy * self.sin + (self.dst_w as i64 - 1) * ONE_Q16;
        let dy = -sx * self.sin + sy * self.cos + (self.dst_h as i64 - 1) * ONE_Q16;
        (to_pixel(dx), to_pixel(dy))
    }

    pub fn apply(&self, img: &GrayImage, fill: u8) -> GrayImage {
        debug_assert_eq!((img.width(), img.height()), (self.src_w, self.src_h));
        let (w, h) = (self.src_w as i64, self.src_h as i64);
        let mut out = Vec::with_capacity(self.dst_w as usize * self.dst_h as usize);
        let src = img.pixels();
        for y in 0..self.dst_h as i64 {
            // Walk the row incrementally: each step in x adds (2cos, 2sin).
            let dy = 2 * y - (self.dst_h as i64 - 1);
            let dx0 = -(self.dst_w as i64 - 1);
            let mut sx = dx0 * self.cos - dy * self.sin + (w - 1) * ONE_Q16 + ONE_Q16;
            let mut sy = dx0 * self.sin + dy * self.cos + (h - 1) * ONE_Q16 + ONE_Q16;
            let (stepx, stepy) = (2 * self.cos, 2 * self.sin);
            for _ in 0..self.dst_w {
                let px = sx.div_euclid(2 * ONE_Q16);
                let py = sy.div_euclid(2 * ONE_Q16);
                out.push(if px >= 0 && px < w && py >= 0 && py < h {
                    src[(py * w + px) as usize]
                } else {
                    fill
                });
                sx += stepx;
                sy += stepy;
            }
        }
        GrayImage::from_raw(self.dst_w, self.dst_h, out).expect("canvas dimensions are positive")
    }
}

/// Rotates onto a canvas large enough for the whole rotated source;
/// uncovered pixels get `fill`.
pub fn rotate_nearest(img: &GrayImage, angle: i32, fill: u8) -> GrayImage {
    if angle == 0 {
        return img.clone();
    }
    Rotation::expanding(angle, img.width(), img.height()).apply(img, fill)
}

/// Rotates about the center onto a canvas of the given size.
pub fn rotate_nearest_into(
    img: &GrayImage,
    angle: i32,
    fill: u8,
    width: u32,
    height: u32,
) -> GrayImage {
    Rotation::with_canvas(angle, img.width(), img.height(), width, height).apply(img, fill)
}
