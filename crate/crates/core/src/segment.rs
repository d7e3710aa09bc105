//! Line and character segmentation from projection histograms.
//!
//! Lines come from the horizontal histogram (ink count per row). Rows whose
//! count exceeds a per-mille of the region width form candidate bands;
//! bands separated by a small gap relative to the median band height are
//! merged, and bands much thinner than the median are rejected. Each
//! surviving band is then grown over adjacent rows that still carry ink, so
//! sparse ascender and descender rows stay with their line.
//!
//! Characters are maximal runs of non-empty columns in the vertical
//! histogram of a band, trimmed to their ink rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BinaryImage, Rect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentConfig {
    /// Row-count threshold for line candidates, per-mille of region width.
    pub line_thresh_permille: u32,
    /// Bands thinner than this per-mille of the median band height are dropped.
    pub min_band_frac: u32,
    /// Gaps narrower than this per-mille of the median band height are merged.
    pub merge_gap_frac: u32,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self {
            line_thresh_permille: 20,
            min_band_frac: 400,
            merge_gap_frac: 200,
        }
    }
}

impl SegmentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.line_thresh_permille > 1000 {
            return Err(Error::Config(
                "line_thresh_permille must not exceed 1000".into(),
            ));
        }
        Ok(())
    }
}

/// A text line: inclusive row span and tight ink box, in region coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBand {
    pub top: u32,
    pub bottom: u32,
    pub bbox: Rect,
}

impl LineBand {
    pub fn height(&self) -> u32 {
        self.bottom - self.top + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharBox {
    pub bbox: Rect,
}

pub fn horizontal_histogram(bin: &BinaryImage) -> Vec<u32> {
    (0..bin.height())
        .map(|y| bin.row(y).iter().map(|&p| p as u32).sum())
        .collect()
}

pub fn vertical_histogram(bin: &BinaryImage, band: &LineBand) -> Vec<u32> {
    let mut counts = vec![0u32; bin.width() as usize];
    for y in band.top..=band.bottom.min(bin.height().saturating_sub(1)) {
        for (c, &p) in counts.iter_mut().zip(bin.row(y)) {
            *c += p as u32;
        }
    }
    counts
}

fn median(mut v: Vec<u32>) -> u32 {
    v.sort_unstable();
    v[v.len() / 2]
}

/// Maximal runs of rows with count above the line threshold, as inclusive
/// `(top, bottom)` pairs.
pub fn candidate_bands(hist: &[u32], width: u32, cfg: &SegmentConfig) -> Vec<(u32, u32)> {
    let thresh = (width as u64 * cfg.line_thresh_permille as u64 / 1000) as u32;
    let mut bands = Vec::new();
    let mut start = None;
    for (r, &c) in hist.iter().enumerate() {
        match (c > thresh, start) {
            (true, None) => start = Some(r as u32),
            (false, Some(s)) => {
                bands.push((s, r as u32 - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        bands.push((s, hist.len() as u32 - 1));
    }
    bands
}

/// Row spans of the text lines described by a horizontal histogram.
pub fn line_spans(hist: &[u32], width: u32, cfg: &SegmentConfig) -> Vec<(u32, u32)> {
    let bands = candidate_bands(hist, width, cfg);
    if bands.is_empty() {
        return bands;
    }

    let med = median(bands.iter().map(|(t, b)| b - t + 1).collect());
    let max_gap = med as u64 * cfg.merge_gap_frac as u64;
    let mut merged: Vec<(u32, u32)> = Vec::with_capacity(bands.len());
    for (t, b) in bands {
        match merged.last_mut() {
            // gap < median * frac / 1000, kept in integers
            Some(last) if ((t - last.1 - 1) as u64) * 1000 < max_gap => last.1 = b,
            _ => merged.push((t, b)),
        }
    }

    let med = median(merged.iter().map(|(t, b)| b - t + 1).collect());
    let min_h = med as u64 * cfg.min_band_frac as u64;
    let mut kept: Vec<(u32, u32)> = merged
        .into_iter()
        .filter(|(t, b)| ((b - t + 1) as u64) * 1000 >= min_h)
        .collect();

    // Grow each band over neighboring rows that still carry ink, stopping at
    // the next band.
    for i in 0..kept.len() {
        let floor = if i == 0 { 0 } else { kept[i - 1].1 + 1 };
        let ceil = kept.get(i + 1).map_or(hist.len() as u32 - 1, |n| n.0 - 1);
        let (mut t, mut b) = kept[i];
        while t > floor && hist[t as usize - 1] > 0 {
            t -= 1;
        }
        while b < ceil && hist[b as usize + 1] > 0 {
            b += 1;
        }
        kept[i] = (t, b);
    }
    kept
}

fn tight_box(bin: &BinaryImage, cols: (u32, u32), rows: (u32, u32)) -> Option<Rect> {
    let (mut x0, mut y0, mut x1, mut y1) = (u32::MAX, u32::MAX, 0, 0);
    for y in rows.0..=rows.1 {
        let row = &bin.row(y)[cols.0 as usize..=cols.1 as usize];
        if let (Some(a), Some(b)) = (
            row.iter().position(|&p| p != 0),
            row.iter().rposition(|&p| p != 0),
        ) {
            x0 = x0.min(cols.0 + a as u32);
            x1 = x1.max(cols.0 + b as u32);
            y0 = y0.min(y);
            y1 = y;
        }
    }
    (x0 != u32::MAX).then(|| Rect::from_corners(x0, y0, x1, y1))
}

/// Lines from a horizontal histogram, top to bottom. Each band's box spans
/// the full region width; [`trim_line`] tightens it against the image.
pub fn segment_lines(hist: &[u32], width: u32, cfg: &SegmentConfig) -> Vec<LineBand> {
    line_spans(hist, width, cfg)
        .into_iter()
        .map(|(top, bottom)| LineBand {
            top,
            bottom,
            bbox: Rect::new(0, top, width, bottom - top + 1),
        })
        .collect()
}

/// Shrinks a band to the tight box of its ink; `None` if it holds none.
pub fn trim_line(bin: &BinaryImage, band: &LineBand) -> Option<LineBand> {
    tight_box(bin, (0, bin.width() - 1), (band.top, band.bottom)).map(|bbox| LineBand {
        top: bbox.y,
        bottom: bbox.bottom() - 1,
        bbox,
    })
}

/// Histogram, band detection and trimming for a binarized region.
pub fn region_lines(bin: &BinaryImage, cfg: &SegmentConfig) -> Vec<LineBand> {
    let hist = horizontal_histogram(bin);
    segment_lines(&hist, bin.width(), cfg)
        .iter()
        .filter_map(|b| trim_line(bin, b))
        .collect()
}

/// Characters of one line, left to right.
pub fn segment_chars(bin: &BinaryImage, band: &LineBand) -> Vec<CharBox> {
    let hist = vertical_histogram(bin, band);
    let mut spans = Vec::new();
    let mut start = None;
    for (c, &n) in hist.iter().enumerate() {
        match (n > 0, start) {
            (true, None) => start = Some(c as u32),
            (false, Some(s)) => {
                spans.push((s, c as u32 - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push((s, hist.len() as u32 - 1));
    }
    spans
        .into_iter()
        .filter_map(|cols| tight_box(bin, cols, (band.top, band.bottom)))
        .map(|bbox| CharBox { bbox })
        .collect()
}
