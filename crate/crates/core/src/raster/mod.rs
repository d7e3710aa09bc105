//! Raster substrate: 8-bit gray and binary images, rectangles, and the pixel
//! operations the rest of the pipeline is built from.
//!
//! All arithmetic here is integer-only. Images are row-major and immutable
//! once handed to another stage; operations return new values.

mod io;
mod pnm;
mod rotate;

pub use io::{load_image, save_binary, save_image, ImageFormat};
pub use pnm::{decode_pgm, encode_pgm};
pub use rotate::{rotate_nearest, rotate_nearest_into, sin_cos_q16, Rotation};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned rectangle. `w` and `h` are at least one for any rectangle
/// describing real pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    pub const fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        Self { x, y, w, h }
    }

    /// Builds the rectangle spanning inclusive corner coordinates.
    pub fn from_corners(x0: u32, y0: u32, x1: u32, y1: u32) -> Self {
        Self::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1)
    }

    /// One past the last column.
    pub fn right(&self) -> u32 {
        self.x + self.w
    }

    /// One past the last row.
    pub fn bottom(&self) -> u32 {
        self.y + self.h
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    pub fn fits_within(&self, width: u32, height: u32) -> bool {
        self.w >= 1
            && self.h >= 1
            && self.x as u64 + self.w as u64 <= width as u64
            && self.y as u64 + self.h as u64 <= height as u64
    }

    pub fn contains(&self, other: &Rect) -> bool {
        other.x >= self.x
            && other.y >= self.y
            && other.right() <= self.right()
            && other.bottom() <= self.bottom()
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let x0 = self.x.max(other.x);
        let y0 = self.y.max(other.y);
        let x1 = self.right().min(other.right());
        let y1 = self.bottom().min(other.bottom());
        (x0 < x1 && y0 < y1).then(|| Rect::new(x0, y0, x1 - x0, y1 - y0))
    }

    pub fn union(&self, other: &Rect) -> Rect {
        let x0 = self.x.min(other.x);
        let y0 = self.y.min(other.y);
        let x1 = self.right().max(other.right());
        let y1 = self.bottom().max(other.bottom());
        Rect::new(x0, y0, x1 - x0, y1 - y0)
    }

    /// Intersection over union. Only used for scoring, so a float is fine.
    pub fn iou(&self, other: &Rect) -> f64 {
        let inter = self.intersection(other).map_or(0, |r| r.area());
        let uni = self.area() + other.area() - inter;
        if uni == 0 {
            0.0
        } else {
            inter as f64 / uni as f64
        }
    }

    pub fn translate(&self, dx: u32, dy: u32) -> Rect {
        Rect::new(self.x + dx, self.y + dy, self.w, self.h)
    }
}

fn check_dims(width: u32, height: u32, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Domain(format!(
            "image dimensions must be positive, got {width}x{height}"
        )));
    }
    if width as usize * height as usize != len {
        return Err(Error::Domain(format!(
            "{width}x{height} image needs {} pixels, got {len}",
            width as usize * height as usize
        )));
    }
    Ok(())
}

/// 8-bit single-channel raster.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn filled(width: u32, height: u32, value: u8) -> Result<Self> {
        Self::from_raw(width, height, vec![value; width as usize * height as usize])
    }

    pub fn from_raw(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::from_raw(width, height, pixels)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: u8) {
        self.pixels[y as usize * self.width as usize + x as usize] = v;
    }

    pub fn row(&self, y: u32) -> &[u8] {
        let w = self.width as usize;
        &self.pixels[y as usize * w..(y as usize + 1) * w]
    }
}

/// Ink/background raster: ink = 1, background = 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl BinaryImage {
    pub fn blank(width: u32, height: u32) -> Result<Self> {
        Self::from_raw(width, height, vec![0; width as usize * height as usize])
    }

    /// Rejects any value outside {0, 1}.
    pub fn from_raw(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        if let Some(i) = pixels.iter().position(|&p| p > 1) {
            return Err(Error::Domain(format!(
                "binary pixel {i} has value {}",
                pixels[i]
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y) as u8);
            }
        }
        Self::from_raw(width, height, pixels)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn is_ink(&self, x: u32, y: u32) -> bool {
        self.pixels[y as usize * self.width as usize + x as usize] != 0
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, ink: bool) {
        self.pixels[y as usize * self.width as usize + x as usize] = ink as u8;
    }

    pub fn row(&self, y: u32) -> &[u8] {
        let w = self.width as usize;
        &self.pixels[y as usize * w..(y as usize + 1) * w]
    }

    pub fn ink_count(&self) -> u64 {
        self.pixels.iter().map(|&p| p as u64).sum()
    }

    /// Tight bounding box of the ink, or `None` for an empty image.
    pub fn ink_bounds(&self) -> Option<Rect> {
        let (mut x0, mut y0, mut x1, mut y1) = (u32::MAX, u32::MAX, 0, 0);
        for y in 0..self.height {
            let row = self.row(y);
            let Some(first) = row.iter().position(|&p| p != 0) else {
                continue;
            };
            let last = row.iter().rposition(|&p| p != 0).unwrap_or(first);
            x0 = x0.min(first as u32);
            x1 = x1.max(last as u32);
            y0 = y0.min(y);
            y1 = y;
        }
        (x0 != u32::MAX).then(|| Rect::from_corners(x0, y0, x1, y1))
    }

    /// Gray rendering used for saving: ink black, background white.
    pub fn to_gray(&self) -> GrayImage {
        let pixels = self
            .pixels
            .iter()
            .map(|&p| if p != 0 { 0 } else { 255 })
            .collect();
        GrayImage {
            width: self.width,
            height: self.height,
            pixels,
        }
    }

    /// Gray carrying the raw labels (0 or 1); used where a rotation or crop
    /// routine wants a `GrayImage`.
    pub(crate) fn as_label_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.clone(),
        }
    }

    pub(crate) fn from_label_gray(img: GrayImage) -> Self {
        debug_assert!(img.pixels.iter().all(|&p| p <= 1));
        Self {
            width: img.width,
            height: img.height,
            pixels: img.pixels,
        }
    }
}

/// Integer luma: `(77 r + 150 g + 29 b) >> 8`.
#[inline]
pub fn to_grayscale(r: u8, g: u8, b: u8) -> u8 {
    ((77 * r as u32 + 150 * g as u32 + 29 * b as u32) >> 8) as u8
}

pub fn crop(img: &GrayImage, r: Rect) -> Result<GrayImage> {
    if !r.fits_within(img.width, img.height) {
        return Err(Error::Bounds {
            rect: r,
            width: img.width,
            height: img.height,
        });
    }
    let mut pixels = Vec::with_capacity(r.area() as usize);
    for y in r.y..r.bottom() {
        pixels.extend_from_slice(&img.row(y)[r.x as usize..r.right() as usize]);
    }
    GrayImage::from_raw(r.w, r.h, pixels)
}

pub fn crop_binary(img: &BinaryImage, r: Rect) -> Result<BinaryImage> {
    crop(&img.as_label_gray(), r).map(BinaryImage::from_label_gray)
}

/// Draws a 1-px outline along the perimeter of every box.
pub fn annotate_boxes(img: &GrayImage, boxes: &[Rect], stroke: u8) -> Result<GrayImage> {
    if let Some(bad) = boxes.iter().find(|b| !b.fits_within(img.width, img.height)) {
        return Err(Error::Bounds {
            rect: *bad,
            width: img.width,
            height: img.height,
        });
    }
    let mut out = img.clone();
    for b in boxes {
        let (x1, y1) = (b.right() - 1, b.bottom() - 1);
        for x in b.x..=x1 {
            out.set(x, b.y, stroke);
            out.set(x, y1, stroke);
        }
        for y in b.y..=y1 {
            out.set(b.x, y, stroke);
            out.set(x1, y, stroke);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: u32, h: u32) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| ((x * 7 + y * 13) % 256) as u8).unwrap()
    }

    #[test]
    fn luma_examples() {
        assert_eq!(to_grayscale(0, 0, 0), 0);
        assert_eq!(to_grayscale(255, 255, 255), 255);
        assert_eq!(to_grayscale(255, 0, 0), ((77 * 255) >> 8) as u8);
        assert_eq!(to_grayscale(255, 0, 0), 76);
    }

    #[test]
    fn luma_is_monotone_on_grid() {
        for r in (0..=255).step_by(17) {
            for g in (0..=255).step_by(17) {
                for b in (0..=255).step_by(17) {
                    let l = to_grayscale(r as u8, g as u8, b as u8);
                    if r < 255 {
                        assert!(l <= to_grayscale(r as u8 + 1, g as u8, b as u8));
                    }
                    if g < 255 {
                        assert!(l <= to_grayscale(r as u8, g as u8 + 1, b as u8));
                    }
                    if b < 255 {
                        assert!(l <= to_grayscale(r as u8, g as u8, b as u8 + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn zero_sized_images_are_rejected() {
        assert!(GrayImage::from_raw(0, 3, vec![]).is_err());
        assert!(GrayImage::from_raw(2, 2, vec![0; 3]).is_err());
        assert!(BinaryImage::from_raw(1, 1, vec![2]).is_err());
    }

    #[test]
    fn crop_identity_and_single_pixel() {
        let img = ramp(9, 6);
        assert_eq!(crop(&img, img.bounds()).unwrap(), img);
        let one = crop(&img, Rect::new(0, 0, 1, 1)).unwrap();
        assert_eq!(one.pixels(), &[img.get(0, 0)]);
    }

    #[test]
    fn crop_composition() {
        let img = ramp(20, 15);
        let a = Rect::new(3, 2, 12, 10);
        let b = Rect::new(4, 1, 5, 7);
        let nested = crop(&crop(&img, a).unwrap(), b).unwrap();
        let direct = crop(&img, b.translate(a.x, a.y)).unwrap();
        assert_eq!(nested, direct);
    }

    #[test]
    fn crop_out_of_bounds() {
        let img = ramp(5, 5);
        assert!(matches!(
            crop(&img, Rect::new(3, 0, 3, 1)),
            Err(Error::Bounds { .. })
        ));
        assert!(crop(&img, Rect::new(0, 0, 0, 1)).is_err());
    }

    #[test]
    fn annotate_empty_list_is_identity() {
        let img = ramp(8, 8);
        assert_eq!(annotate_boxes(&img, &[], 0).unwrap(), img);
    }

    #[test]
    fn annotate_full_box_only_touches_border() {
        let img = GrayImage::filled(6, 5, 200).unwrap();
        let out = annotate_boxes(&img, &[img.bounds()], 7).unwrap();
        for y in 0..5 {
            for x in 0..6 {
                let border = x == 0 || y == 0 || x == 5 || y == 4;
                assert_eq!(out.get(x, y), if border { 7 } else { 200 });
            }
        }
    }

    #[test]
    fn annotate_disjoint_boxes_changes_perimeters_only() {
        let img = GrayImage::filled(30, 20, 255).unwrap();
        let boxes = [Rect::new(1, 1, 6, 4), Rect::new(12, 5, 9, 9)];
        let out = annotate_boxes(&img, &boxes, 0).unwrap();
        let changed = img
            .pixels()
            .iter()
            .zip(out.pixels())
            .filter(|(a, b)| a != b)
            .count();
        // Perimeter pixel count of a w x h box is 2(w + h) - 4.
        let expected: u32 = boxes.iter().map(|b| 2 * (b.w + b.h) - 4).sum();
        assert_eq!(changed as u32, expected);
        assert_eq!(out.get(3, 2), 255);
        assert_eq!(out.get(15, 8), 255);
    }

    #[test]
    fn annotate_rejects_out_of_bounds() {
        let img = GrayImage::filled(4, 4, 0).unwrap();
        assert!(annotate_boxes(&img, &[Rect::new(2, 2, 3, 1)], 9).is_err());
    }

    #[test]
    fn rect_iou() {
        let a = Rect::new(0, 0, 10, 10);
        assert_eq!(a.iou(&a), 1.0);
        assert_eq!(a.iou(&Rect::new(20, 20, 2, 2)), 0.0);
        let b = Rect::new(5, 0, 10, 10);
        assert!((a.iou(&b) - 50.0 / 150.0).abs() < 1e-12);
    }

    #[test]
    fn ink_bounds() {
        let mut b = BinaryImage::blank(10, 8).unwrap();
        assert_eq!(b.ink_bounds(), None);
        b.set(2, 3, true);
        b.set(7, 5, true);
        assert_eq!(b.ink_bounds(), Some(Rect::new(2, 3, 6, 3)));
    }
}
