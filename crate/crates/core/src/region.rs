//! Text region extraction.
//!
//! The card is tiled into square blocks. A block is foreground when the mean
//! absolute deviation of its intensities exceeds a threshold; dark pixels of
//! foreground blocks form the ink mask. Ink is grouped into regions by
//! 8-connectivity of the ink-bearing blocks, so glyphs of a word or line
//! (and closely set lines) join into one region while separated lines and
//! blocks stay apart. Regions that look like logos, rules, or noise are then
//! dropped by size, height, aspect and ink-density rules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BinaryImage, GrayImage, Rect, Rotation};

/// Intensity written into region crops outside the region's own blocks.
pub const PAPER: u8 = 255;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockClass {
    Background,
    Foreground,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGrid {
    pub block_size: u32,
    pub cols: u32,
    pub rows: u32,
    /// Row-major, `cols * rows` entries.
    pub labels: Vec<BlockClass>,
}

impl BlockGrid {
    pub fn label(&self, col: u32, row: u32) -> BlockClass {
        self.labels[(row * self.cols + col) as usize]
    }

    pub fn is_foreground(&self, col: u32, row: u32) -> bool {
        self.label(col, row) == BlockClass::Foreground
    }

    /// Pixel extent of a block, clipped to the image.
    pub fn block_rect(&self, col: u32, row: u32, width: u32, height: u32) -> Rect {
        let x = col * self.block_size;
        let y = row * self.block_size;
        Rect::new(
            x,
            y,
            self.block_size.min(width - x),
            self.block_size.min(height - y),
        )
    }

    pub fn foreground_count(&self) -> usize {
        self.labels
            .iter()
            .filter(|&&l| l == BlockClass::Foreground)
            .count()
    }
}

/// Default block side: 32 px for a 1536-px short side, scaled linearly.
pub fn default_block_size(width: u32, height: u32) -> u32 {
    (32 * width.min(height) / 1536).max(4)
}

/// Maps pixels of a region's current raster back to card coordinates.
///
/// For a freshly extracted region the raster is a crop of the card and
/// `angle` is zero. After deskewing, the raster is a crop of a rotated canvas
/// of `canvas_w x canvas_h` built from the card rectangle `source`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionFrame {
    pub source: Rect,
    /// Rotation applied to the source crop, centidegrees.
    pub angle: i32,
    pub canvas_w: u32,
    pub canvas_h: u32,
}

impl RegionFrame {
    pub fn identity(source: Rect) -> Self {
        Self {
            source,
            angle: 0,
            canvas_w: source.w,
            canvas_h: source.h,
        }
    }

    pub fn rotation(&self) -> Rotation {
        Rotation::with_canvas(
            self.angle,
            self.source.w,
            self.source.h,
            self.canvas_w,
            self.canvas_h,
        )
    }

    /// Card coordinates of a frame point (may lie outside the card).
    pub fn point_to_card(&self, x: i64, y: i64) -> (i64, i64) {
        if self.angle == 0 {
            return (x, y);
        }
        let (sx, sy) = self.rotation().source_of(x, y);
        (sx + self.source.x as i64, sy + self.source.y as i64)
    }

    /// Axis-aligned card-space box around a frame-space box, clipped to
    /// `card`. Returns `None` if nothing of it lands on the card.
    pub fn rect_to_card(&self, r: Rect, card: Rect) -> Option<Rect> {
        let (x0, y0) = (r.x as i64, r.y as i64);
        let (x1, y1) = (r.right() as i64 - 1, r.bottom() as i64 - 1);
        let corners =
            [(x0, y0), (x1, y0), (x0, y1), (x1, y1)].map(|(x, y)| self.point_to_card(x, y));
        let min_x = corners.iter().map(|c| c.0).min()?.max(card.x as i64);
        let min_y = corners.iter().map(|c| c.1).min()?.max(card.y as i64);
        let max_x = corners
            .iter()
            .map(|c| c.0)
            .max()?
            .min(card.right() as i64 - 1);
        let max_y = corners
            .iter()
            .map(|c| c.1)
            .max()?
            .min(card.bottom() as i64 - 1);
        (min_x <= max_x && min_y <= max_y)
            .then(|| Rect::from_corners(min_x as u32, min_y as u32, max_x as u32, max_y as u32))
    }
}

/// A connected foreground component.
///
/// `bbox`, `mask` and `gray` always describe the same pixels: `bbox` is the
/// raster's placement in the region's frame, which is card space until the
/// region is deskewed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextRegion {
    pub bbox: Rect,
    pub mask: BinaryImage,
    pub gray: GrayImage,
    pub skew_centideg: i32,
    pub frame: RegionFrame,
}

impl TextRegion {
    /// Card-space bounding box of the region as extracted.
    pub fn card_bbox(&self) -> Rect {
        self.frame.source
    }

    pub fn ink_count(&self) -> u64 {
        self.mask.ink_count()
    }
}

/// Classifies each block by the mean absolute deviation of its pixels
/// (floor of the mean, floor of the deviation). Edge blocks use their actual
/// pixel count.
pub fn classify_blocks(img: &GrayImage, block_size: u32, spread_thresh: u32) -> Result<BlockGrid> {
    if block_size < 4 {
        return Err(Error::Config(format!(
            "block_size {block_size} must be at least 4"
        )));
    }
    let (w, h) = (img.width(), img.height());
    let cols = w.div_ceil(block_size);
    let rows = h.div_ceil(block_size);
    let mut labels = Vec::with_capacity((cols * rows) as usize);
    let mut grid = BlockGrid {
        block_size,
        cols,
        rows,
        labels: Vec::new(),
    };
    for row in 0..rows {
        for col in 0..cols {
            let r = grid.block_rect(col, row, w, h);
            let n = r.area();
            let sum: u64 = (r.y..r.bottom())
                .map(|y| {
                    img.row(y)[r.x as usize..r.right() as usize]
                        .iter()
                        .map(|&v| v as u64)
                        .sum::<u64>()
                })
                .sum();
            let mean = (sum / n) as i32;
            let dev: u64 = (r.y..r.bottom())
                .map(|y| {
                    img.row(y)[r.x as usize..r.right() as usize]
                        .iter()
                        .map(|&v| (v as i32 - mean).unsigned_abs() as u64)
                        .sum::<u64>()
                })
                .sum();
            labels.push(if dev / n > spread_thresh as u64 {
                BlockClass::Foreground
            } else {
                BlockClass::Background
            });
        }
    }
    grid.labels = labels;
    Ok(grid)
}

/// Promotes background blocks that touch a foreground block (8-neighborhood
/// of the original labels, one ring only) and hold at least one pixel darker
/// than `ink_thresh`. Recovers glyph fringes that spill into blocks with too
/// little ink to pass the deviation test on their own.
pub fn grow_foreground(img: &GrayImage, grid: &BlockGrid, ink_thresh: u8) -> BlockGrid {
    let (w, h) = (img.width(), img.height());
    let mut grown = grid.clone();
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            if grid.is_foreground(col, row) {
                continue;
            }
            let touches = NEIGHBORS_8.iter().any(|&(dx, dy)| {
                let (c, r) = (col as i64 + dx, row as i64 + dy);
                c >= 0
                    && r >= 0
                    && c < grid.cols as i64
                    && r < grid.rows as i64
                    && grid.is_foreground(c as u32, r as u32)
            });
            if !touches {
                continue;
            }
            let b = grid.block_rect(col, row, w, h);
            let dark = (b.y..b.bottom()).any(|y| {
                img.row(y)[b.x as usize..b.right() as usize]
                    .iter()
                    .any(|&v| v < ink_thresh)
            });
            if dark {
                grown.labels[(row * grid.cols + col) as usize] = BlockClass::Foreground;
            }
        }
    }
    grown
}

/// Ink = pixel in a foreground block with intensity below `ink_thresh`.
pub fn foreground_mask(img: &GrayImage, grid: &BlockGrid, ink_thresh: u8) -> Result<BinaryImage> {
    let (w, h) = (img.width(), img.height());
    if grid.cols != w.div_ceil(grid.block_size) || grid.rows != h.div_ceil(grid.block_size) {
        return Err(Error::Config(format!(
            "{}x{} block grid does not match {w}x{h} image",
            grid.cols, grid.rows
        )));
    }
    let bs = grid.block_size;
    BinaryImage::from_fn(w, h, |x, y| {
        grid.is_foreground(x / bs, y / bs) && img.get(x, y) < ink_thresh
    })
}

/// Offsets of the 8-neighborhood.
const NEIGHBORS_8: [(i64, i64); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// Labels 8-connected components of a `w x h` occupancy grid. Returns one
/// label per cell (`u32::MAX` for empty cells) and the component count.
/// Labels are assigned in raster order of each component's first cell.
fn label_cells(w: u32, h: u32, occupied: impl Fn(usize) -> bool) -> (Vec<u32>, u32) {
    let n = w as usize * h as usize;
    let mut labels = vec![u32::MAX; n];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..n {
        if labels[start] != u32::MAX || !occupied(start) {
            continue;
        }
        labels[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (x, y) = ((i % w as usize) as i64, (i / w as usize) as i64);
            for (dx, dy) in NEIGHBORS_8 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let j = ny as usize * w as usize + nx as usize;
                if labels[j] == u32::MAX && occupied(j) {
                    labels[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    (labels, next)
}

/// Clears 8-connected ink components of at most `max_size` pixels.
pub fn remove_specks(mask: &BinaryImage, max_size: u32) -> BinaryImage {
    if max_size == 0 {
        return mask.clone();
    }
    let px = mask.pixels();
    let (labels, count) = label_cells(mask.width(), mask.height(), |i| px[i] != 0);
    let mut sizes = vec![0u32; count as usize];
    for &l in labels.iter().filter(|&&l| l != u32::MAX) {
        sizes[l as usize] += 1;
    }
    let cleaned = labels
        .iter()
        .map(|&l| (l != u32::MAX && sizes[l as usize] > max_size) as u8)
        .collect();
    BinaryImage::from_raw(mask.width(), mask.height(), cleaned).expect("same dimensions")
}

/// Groups ink into regions by 8-connectivity of ink-bearing blocks of side
/// `block_size`. Each region's gray raster is the card crop over its bbox with
/// pixels outside the region's blocks set to [`PAPER`]. Regions are sorted by
/// bbox origin, top to bottom then left to right.
pub fn label_components(
    mask: &BinaryImage,
    card: &GrayImage,
    block_size: u32,
) -> Result<Vec<TextRegion>> {
    if (mask.width(), mask.height()) != (card.width(), card.height()) {
        return Err(Error::Config("mask and card dimensions differ".into()));
    }
    if block_size == 0 {
        return Err(Error::Config("block_size must be positive".into()));
    }
    let (w, h) = (mask.width(), mask.height());
    let cols = w.div_ceil(block_size);
    let rows = h.div_ceil(block_size);

    // Per-block ink bounds: (min_x, min_y, max_x, max_y).
    let mut ink_bounds: Vec<Option<(u32, u32, u32, u32)>> = vec![None; (cols * rows) as usize];
    for y in 0..h {
        for (x, _) in mask.row(y).iter().enumerate().filter(|(_, &p)| p != 0) {
            let x = x as u32;
            let b = &mut ink_bounds[((y / block_size) * cols + x / block_size) as usize];
            *b = Some(match *b {
                None => (x, y, x, y),
                Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
            });
        }
    }
    let (labels, count) = label_cells(cols, rows, |i| ink_bounds[i].is_some());

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count as usize];
    for (i, &l) in labels.iter().enumerate() {
        if l != u32::MAX {
            members[l as usize].push(i);
        }
    }

    let mut regions: Vec<(usize, TextRegion)> = members
        .iter()
        .map(|blocks| {
            let (mut x0, mut y0, mut x1, mut y1) = (u32::MAX, u32::MAX, 0, 0);
            for &b in blocks {
                let (bx0, by0, bx1, by1) = ink_bounds[b].expect("member blocks carry ink");
                x0 = x0.min(bx0);
                y0 = y0.min(by0);
                x1 = x1.max(bx1);
                y1 = y1.max(by1);
            }
            let bbox = Rect::from_corners(x0, y0, x1, y1);
            let mut rmask = vec![0u8; bbox.area() as usize];
            let mut rgray = vec![PAPER; bbox.area() as usize];
            for &b in blocks {
                let (col, row) = (b as u32 % cols, b as u32 / cols);
                let cell = Rect::new(
                    col * block_size,
                    row * block_size,
                    block_size.min(w - col * block_size),
                    block_size.min(h - row * block_size),
                );
                let Some(part) = cell.intersection(&bbox) else {
                    continue;
                };
                for y in part.y..part.bottom() {
                    let src = part.x as usize..part.right() as usize;
                    let dst_start = ((y - bbox.y) * bbox.w + (part.x - bbox.x)) as usize;
                    let dst = dst_start..dst_start + part.w as usize;
                    rmask[dst.clone()].copy_from_slice(&mask.row(y)[src.clone()]);
                    rgray[dst].copy_from_slice(&card.row(y)[src]);
                }
            }
            let region = TextRegion {
                bbox,
                mask: BinaryImage::from_raw(bbox.w, bbox.h, rmask).expect("bbox-sized"),
                gray: GrayImage::from_raw(bbox.w, bbox.h, rgray).expect("bbox-sized"),
                skew_centideg: 0,
                frame: RegionFrame::identity(bbox),
            };
            (blocks[0], region)
        })
        .collect();
    regions.sort_by_key(|(first, r)| (r.bbox.y, r.bbox.x, *first));
    Ok(regions.into_iter().map(|(_, r)| r).collect())
}

/// Non-text elimination thresholds. Fractions are per-mille integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterRules {
    /// Minimum ink pixel count.
    pub min_area: u64,
    /// Region height bounds, per-mille of card height.
    pub min_h_permille: u32,
    pub max_h_permille: u32,
    /// Maximum width / height, waived when the density test passes.
    pub max_aspect: u32,
    /// Ink pixels per bbox pixel, per-mille.
    pub min_density_permille: u32,
    pub max_density_permille: u32,
}

impl Default for FilterRules {
    fn default() -> Self {
        Self {
            min_area: 15,
            min_h_permille: 6,
            max_h_permille: 250,
            max_aspect: 40,
            min_density_permille: 20,
            max_density_permille: 900,
        }
    }
}

impl FilterRules {
    pub fn validate(&self) -> Result<()> {
        if self.min_h_permille > self.max_h_permille {
            return Err(Error::Config(
                "min_h_permille exceeds max_h_permille".into(),
            ));
        }
        if self.min_density_permille > self.max_density_permille {
            return Err(Error::Config(
                "min_density_permille exceeds max_density_permille".into(),
            ));
        }
        if self.max_aspect == 0 {
            return Err(Error::Config("max_aspect must be positive".into()));
        }
        Ok(())
    }

    /// Whether a region with this bbox and ink count looks like text.
    pub fn keeps(&self, bbox: Rect, ink: u64, card_height: u32) -> bool {
        let (w, h) = (bbox.w as u64, bbox.h as u64);
        let card_h = card_height as u64;
        let area_ok = ink >= self.min_area;
        let height_ok = h * 1000 >= self.min_h_permille as u64 * card_h
            && h * 1000 <= self.max_h_permille as u64 * card_h;
        let density = ink * 1000 / (w * h);
        let density_ok = density >= self.min_density_permille as u64
            && density <= self.max_density_permille as u64;
        let aspect_ok = w <= self.max_aspect as u64 * h || density_ok;
        area_ok && height_ok && aspect_ok && density_ok
    }
}

/// Keeps the regions that pass every [`FilterRules`] test, in input order.
pub fn filter_nontext(
    regions: Vec<TextRegion>,
    card: Rect,
    rules: &FilterRules,
) -> Vec<TextRegion> {
    regions
        .into_iter()
        .filter(|r| rules.keeps(r.card_bbox(), r.ink_count(), card.h))
        .collect()
}
