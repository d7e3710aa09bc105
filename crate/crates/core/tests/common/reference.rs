//! Plain-integer reference versions of the skew arithmetic, written from the
//! definitions without the library's lookup tables or search.

/// pi * 2^62, truncated.
const PI_Q62: i128 = 14_488_038_916_154_245_684;
const ONE_Q62: i128 = 1 << 62;

fn mul_q62(a: i128, b: i128) -> i128 {
    (a * b) >> 62
}

/// sin and cos of `x` radians (Q62, 0 <= x <= pi/2) by Taylor series.
fn sin_cos_q62(x: i128) -> (i128, i128) {
    let x2 = mul_q62(x, x);
    let (mut sin, mut term) = (x, x);
    for k in 1..40 {
        term = -mul_q62(term, x2) / ((2 * k) * (2 * k + 1));
        sin += term;
    }
    let (mut cos, mut term) = (ONE_Q62, ONE_Q62);
    for k in 1..40 {
        term = -mul_q62(term, x2) / ((2 * k - 1) * (2 * k));
        cos += term;
    }
    (sin, cos)
}

/// `tan(eighths / 8 degrees) * 65536`, rounded half up.
pub fn tan_q16(eighths: u32) -> u64 {
    assert!(eighths < 720);
    let x = PI_Q62 * eighths as i128 / 1440;
    let (s, c) = sin_cos_q62(x);
    ((s * (1 << 17) / c + 1) / 2) as u64
}

/// Tangents of every rounding boundary at 1/8-degree resolution, cached.
pub struct TanTable(Vec<u64>);

impl TanTable {
    pub fn new() -> Self {
        Self((0..720).map(tan_q16).collect())
    }

    /// `atan(dy / dx)` in centidegrees, quantized to `step` (a multiple of
    /// 25). Counts the boundaries between quantized angles that the slope
    /// reaches, with a slope exactly on a boundary rounding up.
    pub fn iatan2(&self, dy: i64, dx: i64, step: i32) -> Option<i32> {
        if dx <= 0 || step < 25 || step % 25 != 0 {
            return None;
        }
        let stride = (step / 25) as u32;
        let lhs = (dy.unsigned_abs() as u128) << 16;
        let mut passed = 0u32;
        loop {
            let eighths = (2 * passed + 1) * stride;
            if eighths >= 720 || self.0[eighths as usize] as u128 * dx as u128 > lhs {
                break;
            }
            passed += 1;
        }
        let mag = (passed * stride).min(360) as i32 * 25;
        Some(if dy < 0 { -mag } else { mag })
    }
}

/// `(mu, tau)` over present heights, truncating integer division.
pub fn profile_stats(heights: &[Option<u32>]) -> Option<(i64, i64)> {
    let mut n = 0i64;
    let mut sum = 0i64;
    for h in heights.iter().flatten() {
        n += 1;
        sum += *h as i64;
    }
    if n == 0 {
        return None;
    }
    let mu = sum / n;
    let mut dev = 0i64;
    for h in heights.iter().flatten() {
        let d = *h as i64 - mu;
        dev += if d < 0 { -d } else { d };
    }
    Some((mu, dev / n))
}

/// Heights with `|h - mu| <= tau` kept in place; `None` below 3 survivors.
pub fn filter_outliers(heights: &[Option<u32>], mu: i64, tau: i64) -> Option<Vec<Option<u32>>> {
    let mut out = Vec::with_capacity(heights.len());
    let mut kept = 0;
    for h in heights {
        match h {
            Some(v) if (*v as i64 - mu).abs() <= tau => {
                out.push(Some(*v));
                kept += 1;
            }
            _ => out.push(None),
        }
    }
    (kept >= 3).then_some(out)
}

/// alpha, beta, gamma for anchors `(column, height)`. With `paper` all three
/// use the h1-h2 distance.
pub fn compute_angles(
    table: &TanTable,
    h1: (i64, i64),
    h2: (i64, i64),
    h3: (i64, i64),
    paper: bool,
    step: i32,
) -> Option<(i32, i32, i32)> {
    let d = h2.0 - h1.0;
    let (d13, d32) = if paper {
        (d, d)
    } else {
        (h3.0 - h1.0, h2.0 - h3.0)
    };
    if d <= 0 || d13 <= 0 || d32 <= 0 {
        return None;
    }
    Some((
        table.iatan2(h2.1 - h1.1, d, step)?,
        table.iatan2(h3.1 - h1.1, d13, step)?,
        table.iatan2(h2.1 - h3.1, d32, step)?,
    ))
}
