//! Projection-profile skew estimation and correction.
//!
//! For each region a bottom profile is taken: per column, the distance from
//! the bottom edge up to the first ink pixel. Its integer mean `mu` and mean
//! deviation `tau` are computed, columns farther than `tau` from `mu` are
//! dropped, and three anchors are read off the survivors: leftmost `h1`,
//! rightmost `h2` and the middle survivor `h3`. The slopes h1-h2, h1-h3 and
//! h3-h2 give three angles (alpha, beta, gamma). If they agree within
//! `epsilon` their average is the skew. Otherwise the top profile is tried
//! the same way, and if that also disagrees the smaller of the two averages
//! wins.
//!
//! Glyph shapes only ever raise a column above the baseline, so a single
//! surviving column makes a noisy anchor. By default each anchor is instead
//! the median height of a group of survivors (`anchor_groups`).
//!
//! With `combine_sides` (the default) both profiles are read first, and
//! when both agree within `epsilon` the estimate is the mean of the two
//! averages. Outline shapes differ between top and bottom, so a bottom-only
//! reading turns into a different angle once the region is mirrored.
//!
//! On steep multi-line profiles the outlier band keeps only the middle of
//! the ramp and mixes baselines of different lines, which flattens the
//! estimate. A coarse search therefore runs first: the candidate angle whose
//! deskewed row histogram is sharpest, found on a coarse grid and then at the
//! table step around the winner, is taken as a starting point, and the
//! profile estimator measures the residual on the mask counter-rotated by
//! it. Optional further passes add residuals in the same way. The gray
//! raster is still resampled only once.
//!
//! Everything up to and including the angles is integer arithmetic; angles
//! are centidegrees, positive for text rising to the right.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{crop, crop_binary, BinaryImage, Rect, Rotation};
use crate::region::{RegionFrame, TextRegion, PAPER};
use crate::trig::{cos_q16, iatan2_with_step, sin_q16, LUT_STEP_CENTIDEG};

pub use crate::trig::iatan2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Bottom,
    Top,
}

/// Per-column distances from one edge of the region to its first ink pixel.
/// Columns without ink are `None` and take no part in the statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub side: Side,
    pub heights: Vec<Option<u32>>,
}

impl Profile {
    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// `(column, height)` of every present column, left to right.
    pub fn present(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.heights
            .iter()
            .enumerate()
            .filter_map(|(c, h)| h.map(|h| (c, h)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileStats {
    pub mu: i64,
    pub tau: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Anchor {
    pub column: usize,
    pub height: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Anchors {
    pub h1: Anchor,
    pub h2: Anchor,
    pub h3: Anchor,
    /// Column distance between `h1` and `h2`.
    pub d: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleTriple {
    pub alpha: i32,
    pub beta: i32,
    pub gamma: i32,
}

impl AngleTriple {
    /// Largest pairwise difference.
    pub fn spread(&self) -> i32 {
        let [a, b, c] = [self.alpha, self.beta, self.gamma];
        (a - b).abs().max((a - c).abs()).max((b - c).abs())
    }

    /// Mean of the three, truncated toward zero.
    pub fn average(&self) -> i32 {
        (self.alpha + self.beta + self.gamma) / 3
    }

    pub fn negated(&self) -> Self {
        Self {
            alpha: -self.alpha,
            beta: -self.beta,
            gamma: -self.gamma,
        }
    }
}

/// Denominator used for beta and gamma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Denominator {
    /// The h1-h2 distance `d` for all three slopes.
    Paper,
    /// Each pair's own column distance.
    #[default]
    Geometric,
}

impl std::str::FromStr for Denominator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Denominator::Paper),
            "geometric" => Ok(Denominator::Geometric),
            other => Err(Error::Config(format!(
                "skew denominator must be paper or geometric, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewConfig {
    /// Maximum pairwise disagreement of alpha, beta, gamma, centidegrees.
    pub epsilon: i32,
    /// Estimates are clamped to `+-max_angle` centidegrees.
    pub max_angle: i32,
    /// Angle quantization, a multiple of the 25-centidegree table step.
    pub lut_step: i32,
    pub denominator: Denominator,
    /// Estimation passes; 1 is the plain single estimate.
    pub passes: u32,
    /// Each anchor is the median of `1/anchor_groups` of the survivors; 0
    /// reads single columns.
    pub anchor_groups: u32,
    /// Coarse search covers `+-search_range` centidegrees.
    pub search_range: i32,
    /// Coarse search step in centidegrees; 0 disables the search.
    pub search_step: i32,
    /// Average both profiles when both are consistent, before the
    /// bottom-first fallback.
    pub combine_sides: bool,
}

impl Default for SkewConfig {
    fn default() -> Self {
        Self {
            epsilon: 300,
            max_angle: 4500,
            lut_step: LUT_STEP_CENTIDEG,
            denominator: Denominator::Geometric,
            passes: 1,
            anchor_groups: 6,
            search_range: 1500,
            search_step: 100,
            combine_sides: true,
        }
    }
}

impl SkewConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon < 0 {
            return Err(Error::Config("epsilon must be nonnegative".into()));
        }
        if !(0..=9000).contains(&self.max_angle) {
            return Err(Error::Config("max_angle must be within 0..=9000".into()));
        }
        if !(1..=8).contains(&self.passes) {
            return Err(Error::Config("passes must be within 1..=8".into()));
        }
        if self.anchor_groups != 0 && !(3..=64).contains(&self.anchor_groups) {
            return Err(Error::Config(
                "anchor_groups must be 0 or within 3..=64".into(),
            ));
        }
        if !(0..=self.max_angle).contains(&self.search_range) {
            return Err(Error::Config(
                "search_range must be within 0..=max_angle".into(),
            ));
        }
        if self.search_step < 0 || self.search_step % LUT_STEP_CENTIDEG != 0 {
            return Err(Error::Config(format!(
                "search_step must be 0 or a positive multiple of {LUT_STEP_CENTIDEG}"
            )));
        }
        if self.lut_step < LUT_STEP_CENTIDEG || self.lut_step % LUT_STEP_CENTIDEG != 0 {
            return Err(Error::Config(format!(
                "lut_step must be a positive multiple of {LUT_STEP_CENTIDEG}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkewSource {
    Bottom,
    Top,
    MinOfBoth,
    /// Mean of two consistent profiles.
    Both,
    /// Neither profile had enough consistent columns; angle is 0.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewEstimate {
    pub angle: i32,
    pub source: SkewSource,
    pub consistent: bool,
}

impl SkewEstimate {
    pub const NONE: SkewEstimate = SkewEstimate {
        angle: 0,
        source: SkewSource::None,
        consistent: false,
    };
}

fn profile(mask: &BinaryImage, side: Side) -> Profile {
    let (w, h) = (mask.width(), mask.height());
    let mut heights = vec![None; w as usize];
    let rows: Box<dyn Iterator<Item = u32>> = match side {
        Side::Bottom => Box::new((0..h).rev()),
        Side::Top => Box::new(0..h),
    };
    let mut remaining = w as usize;
    for (dist, y) in rows.enumerate() {
        for (c, &p) in mask.row(y).iter().enumerate() {
            if p != 0 && heights[c].is_none() {
                heights[c] = Some(dist as u32);
                remaining -= 1;
            }
        }
        if remaining == 0 {
            break;
        }
    }
    Profile { side, heights }
}

pub fn bottom_profile(region: &TextRegion) -> Profile {
    profile(&region.mask, Side::Bottom)
}

pub fn top_profile(region: &TextRegion) -> Profile {
    profile(&region.mask, Side::Top)
}

/// Integer mean and mean deviation over present columns.
pub fn profile_stats(p: &Profile) -> Result<ProfileStats> {
    let (n, sum) = p
        .present()
        .fold((0i64, 0i64), |(n, s), (_, h)| (n + 1, s + h as i64));
    if n == 0 {
        return Err(Error::Estimation("profile has no ink columns".into()));
    }
    let mu = sum / n;
    let tau = p.present().map(|(_, h)| (mu - h as i64).abs()).sum::<i64>() / n;
    Ok(ProfileStats { mu, tau })
}

/// Drops columns with `|h - mu| > tau`, keeping positions. Fails when fewer
/// than three columns survive.
pub fn filter_outliers(p: &Profile, s: &ProfileStats) -> Result<Profile> {
    let heights: Vec<Option<u32>> = p
        .heights
        .iter()
        .map(|h| h.filter(|&h| (h as i64 - s.mu).abs() <= s.tau))
        .collect();
    let survivors = heights.iter().flatten().count();
    if survivors < 3 {
        return Err(Error::Estimation(format!(
            "only {survivors} profile columns within mean deviation"
        )));
    }
    Ok(Profile {
        side: p.side,
        heights,
    })
}

/// Leftmost, rightmost and middle (by survivor index) present columns.
pub fn anchors(p: &Profile) -> Result<Anchors> {
    let survivors: Vec<(usize, u32)> = p.present().collect();
    if survivors.len() < 3 {
        return Err(Error::Estimation(format!(
            "need 3 anchor columns, have {}",
            survivors.len()
        )));
    }
    let pick = |(column, h): (usize, u32)| Anchor {
        column,
        height: h as i64,
    };
    let h1 = pick(survivors[0]);
    let h2 = pick(survivors[survivors.len() - 1]);
    let h3 = pick(survivors[survivors.len() / 2]);
    Ok(Anchors {
        h1,
        h2,
        h3,
        d: (h2.column - h1.column) as i64,
    })
}

/// Anchors read from groups of survivors: the first, last and middle
/// `1/groups` of them by column. Each anchor takes the group's median height
/// at its middle column. `groups == 0` falls back to [`anchors`].
pub fn grouped_anchors(p: &Profile, groups: u32) -> Result<Anchors> {
    if groups == 0 {
        return anchors(p);
    }
    let survivors: Vec<(usize, u32)> = p.present().collect();
    let n = survivors.len();
    if n < 3 {
        return Err(Error::Estimation(format!(
            "need 3 anchor columns, have {n}"
        )));
    }
    let k = (n / groups as usize).max(1);
    let pick = |g: &[(usize, u32)]| {
        let mut hs: Vec<u32> = g.iter().map(|&(_, h)| h).collect();
        hs.sort_unstable();
        Anchor {
            column: g[g.len() / 2].0,
            height: hs[hs.len() / 2] as i64,
        }
    };
    let mid = n / 2 - k / 2;
    let (h1, h2) = (pick(&survivors[..k]), pick(&survivors[n - k..]));
    Ok(Anchors {
        h1,
        h2,
        h3: pick(&survivors[mid..mid + k]),
        d: h2.column as i64 - h1.column as i64,
    })
}

/// alpha, beta, gamma with each pair's own column distance.
pub fn compute_angles(a: &Anchors) -> Result<AngleTriple> {
    compute_angles_with(a, Denominator::Geometric, LUT_STEP_CENTIDEG)
}

pub fn compute_angles_with(
    a: &Anchors,
    denominator: Denominator,
    lut_step: i32,
) -> Result<AngleTriple> {
    let col = |x: &Anchor| x.column as i64;
    let (d13, d32) = match denominator {
        Denominator::Geometric => (col(&a.h3) - col(&a.h1), col(&a.h2) - col(&a.h3)),
        Denominator::Paper => (a.d, a.d),
    };
    if a.d <= 0 || d13 <= 0 || d32 <= 0 {
        return Err(Error::Estimation("anchor columns are not distinct".into()));
    }
    Ok(AngleTriple {
        alpha: iatan2_with_step(a.h2.height - a.h1.height, a.d, lut_step)?,
        beta: iatan2_with_step(a.h3.height - a.h1.height, d13, lut_step)?,
        gamma: iatan2_with_step(a.h2.height - a.h3.height, d32, lut_step)?,
    })
}

/// Angle triple for one side, oriented so text rising to the right is
/// positive on either side.
pub fn side_angles(mask: &BinaryImage, side: Side, cfg: &SkewConfig) -> Result<AngleTriple> {
    let p = profile(mask, side);
    let stats = profile_stats(&p)?;
    let kept = filter_outliers(&p, &stats)?;
    let triple = compute_angles_with(
        &grouped_anchors(&kept, cfg.anchor_groups)?,
        cfg.denominator,
        cfg.lut_step,
    )?;
    Ok(match side {
        Side::Bottom => triple,
        // Distances from the top shrink as the text rises.
        Side::Top => triple.negated(),
    })
}

pub fn estimate_skew(region: &TextRegion, cfg: &SkewConfig) -> SkewEstimate {
    estimate_mask_skew(&region.mask, cfg)
}

/// Candidate angle whose deskewed row histogram is sharpest, measured as
/// the sum of squared row counts. Candidates run outward from 0 in `step`
/// increments, then the winner's neighbourhood is searched at the 25-
/// centidegree table step. Ties keep the earlier candidate.
pub fn coarse_angle(mask: &BinaryImage, range: i32, step: i32) -> i32 {
    if step <= 0 || range < step {
        return 0;
    }
    let ink: Vec<(i64, i64)> = (0..mask.height())
        .flat_map(|y| {
            mask.row(y)
                .iter()
                .enumerate()
                .filter(|&(_, &p)| p != 0)
                .map(move |(x, _)| (x as i64, y as i64))
        })
        .collect();
    // Rotated rows span at most width + height on either side of zero.
    let reach = (mask.width() + mask.height()) as i64;
    let mut hist = vec![0u64; 2 * reach as usize + 1];
    let mut score = |angle: i32| {
        let (sin, cos) = (sin_q16(angle), cos_q16(angle));
        hist.iter_mut().for_each(|c| *c = 0);
        for &(x, y) in &ink {
            hist[(((y * cos + x * sin + (1 << 15)) >> 16) + reach) as usize] += 1;
        }
        hist.iter().map(|&c| c * c).sum::<u64>()
    };
    let mut best = (score(0), 0);
    let mut consider = |angle: i32, best: &mut (u64, i32)| {
        if angle.abs() <= range {
            let s = score(angle);
            if s > best.0 {
                *best = (s, angle);
            }
        }
    };
    for k in 1..=range / step {
        consider(k * step, &mut best);
        consider(-k * step, &mut best);
    }
    let center = best.1;
    for k in 1..step / LUT_STEP_CENTIDEG {
        consider(center + k * LUT_STEP_CENTIDEG, &mut best);
        consider(center - k * LUT_STEP_CENTIDEG, &mut best);
    }
    best.1
}

fn turned(mask: &BinaryImage, angle: i32) -> std::borrow::Cow<'_, BinaryImage> {
    if angle == 0 {
        return std::borrow::Cow::Borrowed(mask);
    }
    let rot = Rotation::expanding(-angle, mask.width(), mask.height());
    std::borrow::Cow::Owned(BinaryImage::from_label_gray(
        rot.apply(&mask.as_label_gray(), 0),
    ))
}

/// Skew of a mask. The coarse search picks a starting angle, the profile
/// estimator measures the residual on the counter-rotated mask, and up to
/// `cfg.passes - 1` further residuals are added. Source and consistency are
/// those of the first profile estimate.
pub fn estimate_mask_skew(mask: &BinaryImage, cfg: &SkewConfig) -> SkewEstimate {
    let clamp = |a: i32| a.clamp(-cfg.max_angle, cfg.max_angle);
    let base = coarse_angle(mask, cfg.search_range, cfg.search_step);
    let mut est = single_estimate(&turned(mask, base), cfg);
    if est.source == SkewSource::None {
        return SkewEstimate::NONE;
    }
    let mut residual = est.angle;
    est.angle = clamp(base + residual);
    for _ in 1..cfg.passes {
        if residual == 0 {
            break;
        }
        let next = single_estimate(&turned(mask, est.angle), cfg);
        if next.source == SkewSource::None {
            break;
        }
        residual = next.angle;
        est.angle = clamp(est.angle + residual);
    }
    est
}

/// One pass of the profile estimator with its top-profile fallback.
pub fn single_estimate(mask: &BinaryImage, cfg: &SkewConfig) -> SkewEstimate {
    let clamp = |a: i32| a.clamp(-cfg.max_angle, cfg.max_angle);
    let bottom = side_angles(mask, Side::Bottom, cfg);
    let agreed = |r: &Result<AngleTriple>| match r {
        Ok(t) if t.spread() <= cfg.epsilon => Some(t.average()),
        _ => None,
    };
    if cfg.combine_sides {
        if let Some(b) = agreed(&bottom) {
            if let Some(t) = agreed(&side_angles(mask, Side::Top, cfg)) {
                // Halve rounding away from zero so that mirrored input negates exactly.
                let sum = b + t;
                return SkewEstimate {
                    angle: clamp(sum.signum() * ((sum.abs() + 1) / 2)),
                    source: SkewSource::Both,
                    consistent: true,
                };
            }
        }
    }
    if let Ok(t) = &bottom {
        if t.spread() <= cfg.epsilon {
            return SkewEstimate {
                angle: clamp(t.average()),
                source: SkewSource::Bottom,
                consistent: true,
            };
        }
    }
    let top = side_angles(mask, Side::Top, cfg);
    if let Ok(t) = &top {
        if t.spread() <= cfg.epsilon {
            return SkewEstimate {
                angle: clamp(t.average()),
                source: SkewSource::Top,
                consistent: true,
            };
        }
    }
    let (angle, source) = match (bottom, top) {
        (Ok(b), Ok(t)) => {
            let (b, t) = (b.average(), t.average());
            (if t.abs() < b.abs() { t } else { b }, SkewSource::MinOfBoth)
        }
        (Ok(b), Err(_)) => (b.average(), SkewSource::Bottom),
        (Err(_), Ok(t)) => (t.average(), SkewSource::Top),
        (Err(_), Err(_)) => return SkewEstimate::NONE,
    };
    SkewEstimate {
        angle: clamp(angle),
        source,
        consistent: false,
    }
}

/// Rotates the region by `-est.angle` and crops tight around the rotated
/// ink. The region must not have been deskewed already.
pub fn deskew(region: &TextRegion, est: &SkewEstimate) -> Result<TextRegion> {
    if region.frame.angle != 0 {
        return Err(Error::Domain("region is already deskewed".into()));
    }
    let mut out = region.clone();
    out.skew_centideg = est.angle;
    if est.angle == 0 {
        return Ok(out);
    }
    let rot = Rotation::expanding(-est.angle, region.bbox.w, region.bbox.h);
    let mask = BinaryImage::from_label_gray(rot.apply(&region.mask.as_label_gray(), 0));
    let Some(tight) = mask.ink_bounds() else {
        // Nothing survived resampling; keep the unrotated region.
        out.skew_centideg = 0;
        return Ok(out);
    };
    let gray = rot.apply(&region.gray, PAPER);
    out.mask = crop_binary(&mask, tight)?;
    out.gray = crop(&gray, tight)?;
    out.bbox = tight;
    out.frame = RegionFrame {
        source: region.frame.source,
        angle: -est.angle,
        canvas_w: rot.dst_w,
        canvas_h: rot.dst_h,
    };
    Ok(out)
}

/// Card-space box of a rectangle given in region-local coordinates.
pub fn local_rect_to_card(region: &TextRegion, r: Rect, card: Rect) -> Option<Rect> {
    region
        .frame
        .rect_to_card(r.translate(region.bbox.x, region.bbox.y), card)
}
