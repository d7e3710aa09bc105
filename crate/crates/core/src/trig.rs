//! Integer trigonometry on centidegrees.
//!
//! Angles are signed centidegrees (1/100 degree). Sine and cosine come back in
//! Q16.16; the arctangent is a binary search over a quarter-degree tangent
//! table and returns the nearest table angle.

use crate::error::{Error, Result};
use crate::trig_tables::{SIN_Q16, TAN_MID_Q16, TAN_Q16};

/// Q16.16 unit.
pub const ONE_Q16: i64 = 1 << 16;

/// Angular step of the lookup tables, in centidegrees.
pub const LUT_STEP_CENTIDEG: i32 = 25;

/// Largest angle the tables cover.
pub const QUARTER_TURN: i32 = 9000;

/// `sin(angle)` in Q16.16 for `|angle| <= 9000` centidegrees. Values between
/// table entries are linearly interpolated with rounding.
pub fn sin_q16(angle: i32) -> i64 {
    assert!(
        angle.abs() <= QUARTER_TURN,
        "angle {angle} outside +-9000 centidegrees"
    );
    let a = angle.unsigned_abs() as usize;
    let k = a / LUT_STEP_CENTIDEG as usize;
    let r = (a % LUT_STEP_CENTIDEG as usize) as i64;
    let base = SIN_Q16[k] as i64;
    let v = if r == 0 {
        base
    } else {
        let next = SIN_Q16[k + 1] as i64;
        base + ((next - base) * r + 12) / 25
    };
    if angle < 0 {
        -v
    } else {
        v
    }
}

/// `cos(angle)` in Q16.16 for `|angle| <= 9000` centidegrees.
pub fn cos_q16(angle: i32) -> i64 {
    sin_q16(QUARTER_TURN - angle.abs())
}

/// Tangent of the rounding boundary between buckets `j` and `j + 1` when
/// angles are quantized to `stride` quarter degrees, or `None` at 90 degrees.
fn boundary_q16(j: usize, stride: usize) -> Option<u32> {
    let half_steps = (2 * j + 1) * stride;
    let k = half_steps / 2;
    if k >= 360 {
        None
    } else if half_steps.is_multiple_of(2) {
        Some(TAN_Q16[k])
    } else {
        Some(TAN_MID_Q16[k])
    }
}

/// Index, in quarter degrees, of the quantized angle nearest to
/// `atan(num / den)` for `num >= 0`, `den > 0`.
fn atan_index(num: u64, den: u64, stride: usize) -> usize {
    let lhs = (num as u128) << 16;
    let buckets = 360usize.div_ceil(stride);
    // Boundaries increase with j, so this is a binary search.
    let (mut lo, mut hi) = (0usize, buckets);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match boundary_q16(mid, stride) {
            Some(t) if t as u128 * den as u128 <= lhs => lo = mid + 1,
            _ => hi = mid,
        }
    }
    (lo * stride).min(360)
}

/// Arctangent of `dy / dx` in centidegrees, rounded to the nearest
/// quarter degree. `dx` must be positive.
pub fn iatan2(dy: i64, dx: i64) -> Result<i32> {
    iatan2_with_step(dy, dx, LUT_STEP_CENTIDEG)
}

/// Like [`iatan2`], but quantized to a coarser multiple of the table step.
pub fn iatan2_with_step(dy: i64, dx: i64, step: i32) -> Result<i32> {
    if dx <= 0 {
        return Err(Error::Domain(format!("iatan2 needs dx > 0, got {dx}")));
    }
    if step < LUT_STEP_CENTIDEG || step % LUT_STEP_CENTIDEG != 0 {
        return Err(Error::Config(format!(
            "LUT resolution {step} must be a positive multiple of {LUT_STEP_CENTIDEG}"
        )));
    }
    let stride = (step / LUT_STEP_CENTIDEG) as usize;
    let k = atan_index(dy.unsigned_abs(), dx as u64, stride);
    let mag = k as i32 * LUT_STEP_CENTIDEG;
    Ok(if dy < 0 { -mag } else { mag })
}
