//! Brute-force visibility by casting exact rational rays.
//!
//! Floors are visible when the ray to their centre is clear. Walls are
//! visible when a ray to any of several points across their face is clear.
//! A ray is stopped at an intermediate row by an opaque cell containing its
//! crossing point. A ray passing exactly between two cells squeezes through
//! unless it has touched opaque corners on both of its sides along the way.

use std::collections::BTreeSet;

const FACE_SAMPLES: i64 = 16;

fn blocked(opaque: &dyn Fn(i64, i64) -> bool, origin: (i64, i64), vertical: bool, sp: i64, sm: i64, num: i64, den: i64, depth: i64) -> bool {
    // Ray from the origin whose minor offset at row `i` is `num * i / (den * depth)`.
    let (mut touched_low, mut touched_high) = (false, false);
    for i in 1..depth {
        let n = num * i;
        let d = den * depth;
        let cell = |minor: i64| {
            let (dr, dc) = if vertical { (sp * i, sm * minor) } else { (sm * minor, sp * i) };
            opaque(origin.0 + dr, origin.1 + dc)
        };
        if (2 * n) % d == 0 && n % d != 0 {
            let lo = n.div_euclid(d);
            touched_low |= cell(lo);
            touched_high |= cell(lo + 1);
            if touched_low && touched_high {
                return true;
            }
        } else {
            let nearest = (2 * n + d).div_euclid(2 * d);
            if cell(nearest) {
                return true;
            }
        }
    }
    false
}

fn visible_along(opaque: &dyn Fn(i64, i64) -> bool, origin: (i64, i64), vertical: bool, primary: i64, minor: i64, target_opaque: bool) -> bool {
    let depth = primary.abs();
    let sp = primary.signum();
    let sm = if minor < 0 { -1 } else { 1 };
    let m = minor.abs();
    if !target_opaque {
        return !blocked(opaque, origin, vertical, sp, sm, m, 1, depth);
    }
    (1..FACE_SAMPLES).any(|k| {
        // Interior points m - 1/2 + k / FACE_SAMPLES across the face, in units of 1 / (2 * FACE_SAMPLES).
        let num = 2 * FACE_SAMPLES * m - FACE_SAMPLES + 2 * k;
        !blocked(opaque, origin, vertical, sp, sm, num, 2 * FACE_SAMPLES, depth)
    })
}

/// Visible cells of a `rows x cols` grid from `origin` within Chebyshev `radius`.
pub fn ray_cast(rows: i64, cols: i64, origin: (i64, i64), radius: i64, opaque: impl Fn(i64, i64) -> bool) -> BTreeSet<(i64, i64)> {
    let op = |r: i64, c: i64| r < 0 || c < 0 || r >= rows || c >= cols || opaque(r, c);
    let mut out = BTreeSet::new();
    for r in 0..rows {
        for c in 0..cols {
            let (dr, dc) = (r - origin.0, c - origin.1);
            if dr.abs().max(dc.abs()) > radius {
                continue;
            }
            if (dr, dc) == (0, 0) {
                out.insert((r, c));
                continue;
            }
            let target_opaque = op(r, c);
            let v = (dr.abs() >= dc.abs() && visible_along(&op, origin, true, dr, dc, target_opaque))
                || (dc.abs() >= dr.abs() && visible_along(&op, origin, false, dc, dr, target_opaque));
            if v {
                out.insert((r, c));
            }
        }
    }
    out
}
