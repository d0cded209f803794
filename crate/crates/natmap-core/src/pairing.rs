//! Cantor pairing `pack(a, b) = (a+b)(a+b+1)/2 + b` and its inverse.

use crate::error::{NatError, Result};

/// Checked Cantor pairing.
pub fn try_pack(a: u64, b: u64) -> Result<u64> {
    let w = a.checked_add(b).ok_or(NatError::Overflow("pack"))?;
    let (x, y) = if w % 2 == 0 { (w / 2, w + 1) } else { (w, w.div_ceil(2)) };
    x.checked_mul(y).and_then(|t| t.checked_add(b)).ok_or(NatError::Overflow("pack"))
}

/// Cantor pairing. Panics on overflow; use [`try_pack`] for untrusted input.
pub fn pack(a: u64, b: u64) -> u64 {
    try_pack(a, b).expect("pack overflow")
}

fn triangle(w: u64) -> u128 {
    let w = w as u128;
    w * (w + 1) / 2
}

/// Inverse of [`pack`].
pub fn unpack(z: u64) -> (u64, u64) {
    // float estimate of the diagonal, then exact correction
    let mut w = (((8.0 * z as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while triangle(w) > z as u128 {
        w -= 1;
    }
    while triangle(w + 1) <= z as u128 {
        w += 1;
    }
    let b = (z as u128 - triangle(w)) as u64;
    (w - b, b)
}
