//! Synthetic business cards with exact ground truth.
//!
//! Text is drawn with the built-in 5x7 font scaled to the requested glyph
//! cell, on a flat paper tone. The card is then rotated about its center
//! with the same fixed-point rotation the pipeline uses, darkened by a
//! per-row gradient, and sprinkled with salt-and-pepper noise, in that order.
//!
//! Ground-truth boxes are the exact bounds of each glyph's rotated
//! footprint: every destination pixel whose source sample lands on the
//! glyph's ink.

pub mod font;
pub mod rng;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{rotate_nearest_into, BinaryImage, GrayImage, Rect, Rotation};
use crate::region::default_block_size;
pub use rng::XorShift64Star;

/// Darkest allowed paper tone and brightest allowed ink tone.
pub const MIN_PAPER: u8 = 224;
pub const MAX_INK: u8 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextLine {
    pub text: String,
    /// Top-left corner of the first glyph cell.
    pub x: u32,
    pub y: u32,
    pub glyph_w: u32,
    pub glyph_h: u32,
    /// Blank columns between adjacent glyph cells.
    pub spacing: u32,
}

impl TextLine {
    pub fn advance(&self) -> u32 {
        self.glyph_w + self.spacing
    }

    /// Glyph cells of the printable characters, with their characters.
    fn cells(&self) -> impl Iterator<Item = (char, Rect)> + '_ {
        self.text
            .chars()
            .enumerate()
            .filter(|(_, c)| *c != ' ')
            .map(move |(i, c)| {
                let x = self.x + i as u32 * self.advance();
                (c, Rect::new(x, self.y, self.glyph_w, self.glyph_h))
            })
    }

    fn extent(&self) -> Rect {
        let n = self.text.chars().count().max(1) as u32;
        Rect::new(
            self.x,
            self.y,
            n * self.advance() - self.spacing,
            self.glyph_h,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoyKind {
    /// Uniformly inked block (logo or rule).
    Solid,
    /// 4-px checkerboard standing in for a halftone picture.
    Picture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoy {
    pub kind: DecoyKind,
    pub rect: Rect,
}

impl Decoy {
    fn inked(&self, x: u32, y: u32) -> bool {
        match self.kind {
            DecoyKind::Solid => true,
            DecoyKind::Picture => ((x - self.rect.x) / 4 + (y - self.rect.y) / 4).is_multiple_of(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardSpec {
    pub width: u32,
    pub height: u32,
    pub lines: Vec<TextLine>,
    pub skew_centideg: i32,
    pub noise_permille: u32,
    /// Darkening added by the bottom row, falling linearly to 0 at the top.
    pub shade_gradient: u32,
    pub paper: u8,
    pub ink: u8,
    pub decoys: Vec<Decoy>,
}

impl CardSpec {
    pub fn blank(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            lines: Vec::new(),
            skew_centideg: 0,
            noise_permille: 0,
            shade_gradient: 0,
            paper: 240,
            ink: 32,
            decoys: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let spec_err = |m: String| Err(Error::Spec(m));
        if self.width == 0 || self.height == 0 {
            return spec_err("canvas must be at least 1x1".into());
        }
        if self.paper < MIN_PAPER || self.ink > MAX_INK {
            return spec_err(format!(
                "paper {} must be >= {MIN_PAPER} and ink {} <= {MAX_INK}",
                self.paper, self.ink
            ));
        }
        if self.noise_permille > 1000 {
            return spec_err(format!(
                "noise_permille {} exceeds 1000",
                self.noise_permille
            ));
        }
        if self.skew_centideg.abs() > 4500 {
            return spec_err(format!("skew {} outside +-4500", self.skew_centideg));
        }
        for (i, line) in self.lines.iter().enumerate() {
            if line.glyph_w == 0 || line.glyph_h == 0 || line.spacing == 0 {
                return spec_err(format!("line {i}: glyph size and spacing must be positive"));
            }
            if let Some(c) = line.text.chars().find(|&c| !font::is_printable(c)) {
                return spec_err(format!("line {i}: character {c:?} is not in the font"));
            }
            if !line.extent().fits_within(self.width, self.height) {
                return spec_err(format!(
                    "line {i} exceeds the {}x{} canvas",
                    self.width, self.height
                ));
            }
        }
        for (i, d) in self.decoys.iter().enumerate() {
            if d.rect.w == 0 || d.rect.h == 0 || !d.rect.fits_within(self.width, self.height) {
                return spec_err(format!("decoy {i} is empty or exceeds the canvas"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub true_angle: i32,
    /// One box per line that has at least one glyph.
    pub line_boxes: Vec<Rect>,
    /// Glyph boxes per line, parallel to `line_boxes`, left to right.
    pub char_boxes: Vec<Vec<Rect>>,
    pub decoy_boxes: Vec<Rect>,
}

impl GroundTruth {
    pub fn char_count(&self) -> usize {
        self.char_boxes.iter().map(Vec::len).sum()
    }
}

/// Ink pixels of one glyph in its cell (cell-local coordinates).
fn glyph_bitmap(c: char, w: u32, h: u32) -> impl Fn(u32, u32) -> bool {
    let rows = font::glyph(c).expect("validated printable");
    move |gx, gy| font::bit(rows, gx * font::GLYPH_COLS / w, gy * font::GLYPH_ROWS / h)
}

/// Tight box of the ink a predicate selects inside `cell`, before rotation.
fn ink_bounds_in(cell: Rect, inked: impl Fn(u32, u32) -> bool) -> Option<Rect> {
    let (mut x0, mut y0, mut x1, mut y1) = (u32::MAX, u32::MAX, 0, 0);
    for y in cell.y..cell.bottom() {
        for x in cell.x..cell.right() {
            if inked(x, y) {
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
            }
        }
    }
    (x0 != u32::MAX).then(|| Rect::from_corners(x0, y0, x1, y1))
}

/// Bounds of the rotated footprint of the pixels selected by `inked` within
/// `src` (a tight source box). Errors if any of it would leave the canvas.
fn rotated_footprint(
    rot: Option<&Rotation>,
    src: Rect,
    inked: impl Fn(u32, u32) -> bool,
) -> Result<Rect> {
    let Some(rot) = rot else {
        return Ok(src);
    };
    let corners = [
        (src.x, src.y),
        (src.right() - 1, src.y),
        (src.x, src.bottom() - 1),
        (src.right() - 1, src.bottom() - 1),
    ]
    .map(|(x, y)| rot.dest_of(x as i64, y as i64));
    let (w, h) = (rot.dst_w as i64, rot.dst_h as i64);
    if corners
        .iter()
        .any(|&(x, y)| x < 1 || y < 1 || x >= w - 1 || y >= h - 1)
    {
        return Err(Error::Spec(format!(
            "content at {src:?} rotates off the canvas"
        )));
    }
    let lo_x = corners.iter().map(|c| c.0).min().unwrap() - 2;
    let hi_x = corners.iter().map(|c| c.0).max().unwrap() + 2;
    let lo_y = corners.iter().map(|c| c.1).min().unwrap() - 2;
    let hi_y = corners.iter().map(|c| c.1).max().unwrap() + 2;
    let (mut x0, mut y0, mut x1, mut y1) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
    for y in lo_y.max(0)..=hi_y.min(h - 1) {
        for x in lo_x.max(0)..=hi_x.min(w - 1) {
            let (sx, sy) = rot.source_of(x, y);
            let inside = sx >= src.x as i64
                && sy >= src.y as i64
                && sx < src.right() as i64
                && sy < src.bottom() as i64;
            if inside && inked(sx as u32, sy as u32) {
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
            }
        }
    }
    if x0 > x1 {
        return Err(Error::Spec(format!(
            "content at {src:?} vanishes under rotation"
        )));
    }
    Ok(Rect::from_corners(
        x0 as u32, y0 as u32, x1 as u32, y1 as u32,
    ))
}

fn rotation(spec: &CardSpec) -> Option<Rotation> {
    (spec.skew_centideg != 0).then(|| {
        Rotation::with_canvas(
            spec.skew_centideg,
            spec.width,
            spec.height,
            spec.width,
            spec.height,
        )
    })
}

/// Unrotated glyph ink of a spec.
fn glyph_layer(spec: &CardSpec) -> BinaryImage {
    let mut mask = BinaryImage::blank(spec.width, spec.height).expect("validated size");
    for line in &spec.lines {
        for (c, cell) in line.cells() {
            let inked = glyph_bitmap(c, line.glyph_w, line.glyph_h);
            for gy in 0..cell.h {
                for gx in 0..cell.w {
                    if inked(gx, gy) {
                        mask.set(cell.x + gx, cell.y + gy, true);
                    }
                }
            }
        }
    }
    mask
}

/// Rotated glyph ink before gradient and noise: the pixels that should read
/// as text.
pub fn glyph_mask(spec: &CardSpec) -> Result<BinaryImage> {
    spec.validate()?;
    let layer = glyph_layer(spec);
    Ok(match spec.skew_centideg {
        0 => layer,
        a => BinaryImage::from_label_gray(rotate_nearest_into(
            &layer.as_label_gray(),
            a,
            0,
            spec.width,
            spec.height,
        )),
    })
}

pub fn ground_truth(spec: &CardSpec) -> Result<GroundTruth> {
    spec.validate()?;
    let rot = rotation(spec);
    let mut gt = GroundTruth {
        true_angle: spec.skew_centideg,
        line_boxes: Vec::new(),
        char_boxes: Vec::new(),
        decoy_boxes: Vec::new(),
    };
    for line in &spec.lines {
        let mut boxes = Vec::new();
        for (c, cell) in line.cells() {
            let bitmap = glyph_bitmap(c, line.glyph_w, line.glyph_h);
            let inked = |x: u32, y: u32| bitmap(x - cell.x, y - cell.y);
            let tight = ink_bounds_in(cell, inked).expect("every glyph has ink");
            boxes.push(rotated_footprint(rot.as_ref(), tight, inked)?);
        }
        if let Some(first) = boxes.first() {
            gt.line_boxes
                .push(boxes.iter().fold(*first, |acc, b| acc.union(b)));
            gt.char_boxes.push(boxes);
        }
    }
    for d in &spec.decoys {
        let tight = ink_bounds_in(d.rect, |x, y| d.inked(x, y)).expect("decoys have ink");
        gt.decoy_boxes
            .push(rotated_footprint(rot.as_ref(), tight, |x, y| {
                d.rect.contains(&Rect::new(x, y, 1, 1)) && d.inked(x, y)
            })?);
    }
    Ok(gt)
}

/// Renders a card. Deterministic in `(spec, seed)`; the seed drives only
/// the noise.
pub fn render_card(spec: &CardSpec, seed: u64) -> Result<(GrayImage, GroundTruth)> {
    let gt = ground_truth(spec)?;
    let glyphs = glyph_layer(spec);
    let mut img = GrayImage::from_fn(spec.width, spec.height, |x, y| {
        if glyphs.is_ink(x, y) {
            spec.ink
        } else {
            spec.paper
        }
    })?;
    for d in &spec.decoys {
        for y in d.rect.y..d.rect.bottom() {
            for x in d.rect.x..d.rect.right() {
                if d.inked(x, y) {
                    img.set(x, y, spec.ink);
                }
            }
        }
    }
    if spec.skew_centideg != 0 {
        img = rotate_nearest_into(
            &img,
            spec.skew_centideg,
            spec.paper,
            spec.width,
            spec.height,
        );
    }
    if spec.shade_gradient > 0 {
        let span = (spec.height - 1).max(1) as u64;
        let w = spec.width as usize;
        for (y, row) in img.pixels_mut().chunks_mut(w).enumerate() {
            let dark = (y as u64 * spec.shade_gradient as u64 / span).min(255) as u8;
            for p in row {
                *p = p.saturating_sub(dark);
            }
        }
    }
    if spec.noise_permille > 0 {
        let mut rng = XorShift64Star::new(seed);
        for p in img.pixels_mut() {
            if rng.chance(spec.noise_permille) {
                *p = if rng.next_u64() >> 63 == 0 { 0 } else { 255 };
            }
        }
    }
    Ok((img, gt))
}

/// Parameter ranges for [`random_spec`]; all bounds inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRanges {
    pub width: u32,
    pub height: u32,
    pub skew_centideg: (i32, i32),
    pub noise_permille: (u32, u32),
    pub lines: (u32, u32),
    pub chars_per_line: (u32, u32),
    /// Font scale; glyph cells are `5s x 7s`.
    pub scale: (u32, u32),
    pub shade_gradient: (u32, u32),
    pub decoys: bool,
}

impl Default for CorpusRanges {
    fn default() -> Self {
        Self {
            width: 1600,
            height: 1200,
            skew_centideg: (-1000, 1000),
            noise_permille: (0, 5),
            lines: (3, 8),
            chars_per_line: (5, 40),
            scale: (2, 3),
            shade_gradient: (0, 48),
            decoys: true,
        }
    }
}

/// Characters the corpus draws text from: every glyph whose ink columns are
/// contiguous and large enough to score at any scale.
pub const CORPUS_ALPHABET: &str =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789@&#+";

fn random_text(rng: &mut XorShift64Star, len: u32) -> String {
    let alphabet: Vec<char> = CORPUS_ALPHABET.chars().collect();
    let mut s = String::with_capacity(len as usize);
    let mut prev_space = true;
    for i in 0..len {
        let space = !prev_space && i + 1 < len && rng.chance(150);
        let c = if space {
            ' '
        } else {
            alphabet[rng.below(alphabet.len() as u32) as usize]
        };
        prev_space = space;
        s.push(c);
    }
    s
}

/// Draws a card layout: an optional logo at the top right, paragraphs of one
/// to three lines, and an optional rule below the text. Separate items are
/// kept more than two region blocks apart.
pub fn random_spec(rng: &mut XorShift64Star, r: &CorpusRanges) -> CardSpec {
    let (w, h) = (r.width, r.height);
    let sep = 3 * default_block_size(w, h) + 2;
    let (x0, x1) = (w * 15 / 100, w * 85 / 100);
    let (y0, y1) = (h * 15 / 100, h * 85 / 100);

    let scale = rng.range_u32(r.scale.0, r.scale.1).max(1);
    let (glyph_w, glyph_h) = (font::GLYPH_COLS * scale, font::GLYPH_ROWS * scale);
    let spacing = rng.range_u32(scale, 2 * scale);
    let advance = glyph_w + spacing;
    let max_chars = ((x1 - x0 + spacing) / advance)
        .min(r.chars_per_line.1)
        .max(1);
    let min_chars = r.chars_per_line.0.clamp(1, max_chars);

    let mut spec = CardSpec {
        skew_centideg: rng.range_i32(r.skew_centideg.0, r.skew_centideg.1),
        noise_permille: rng.range_u32(r.noise_permille.0, r.noise_permille.1),
        shade_gradient: rng.range_u32(r.shade_gradient.0, r.shade_gradient.1),
        paper: rng.range_u32(MIN_PAPER as u32, 250) as u8,
        ink: rng.range_u32(0, MAX_INK as u32) as u8,
        ..CardSpec::blank(w, h)
    };

    let mut y = y0;
    if r.decoys && rng.chance(500) {
        let side = rng.range_u32(h / 20, h / 12).max(4);
        let kind = if rng.chance(500) {
            DecoyKind::Solid
        } else {
            DecoyKind::Picture
        };
        spec.decoys.push(Decoy {
            kind,
            rect: Rect::new(x1 - side, y0, side, side),
        });
        y += side + sep;
    }

    let mut remaining = rng.range_u32(r.lines.0, r.lines.1);
    'paragraphs: while remaining > 0 {
        let k = rng.range_u32(1, remaining.min(3));
        for _ in 0..k {
            if y + glyph_h > y1 {
                break 'paragraphs;
            }
            let len = rng.range_u32(min_chars, max_chars);
            spec.lines.push(TextLine {
                text: random_text(rng, len),
                x: x0,
                y,
                glyph_w,
                glyph_h,
                spacing,
            });
            y += 2 * glyph_h;
        }
        y += sep - glyph_h;
        remaining -= k;
    }

    if r.decoys && rng.chance(500) {
        let thickness = rng.range_u32(2, 4);
        let len = rng.range_u32((x1 - x0) / 5, x1 - x0);
        if y + thickness <= y1 {
            spec.decoys.push(Decoy {
                kind: DecoyKind::Solid,
                rect: Rect::new(x0, y, len, thickness),
            });
        }
    }
    spec
}

/// Spec of corpus card `index`; its noise seed is `seed + index`.
pub fn corpus_spec(index: u64, seed: u64, ranges: &CorpusRanges) -> CardSpec {
    random_spec(&mut XorShift64Star::new(seed.wrapping_add(index)), ranges)
}

pub fn corpus_card(
    index: u64,
    seed: u64,
    ranges: &CorpusRanges,
) -> Result<(GrayImage, GroundTruth)> {
    render_card(&corpus_spec(index, seed, ranges), seed.wrapping_add(index))
}

/// `n` cards drawn from `ranges`. Card `i` depends only on `seed + i`.
pub fn corpus(n: usize, seed: u64, ranges: &CorpusRanges) -> Result<Vec<(GrayImage, GroundTruth)>> {
    if n == 0 {
        return Err(Error::Spec("corpus size must be at least 1".into()));
    }
    (0..n as u64)
        .map(|i| corpus_card(i, seed, ranges))
        .collect()
}
