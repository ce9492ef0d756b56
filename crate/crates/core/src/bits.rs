//! Bit-vector helpers. Bits are `u8` values in {0, 1}; multi-bit fields
//! are read and written most-significant bit first.

use rand::Rng;

/// Reads `bits` as an unsigned integer, MSB first.
pub fn to_index(bits: &[u8]) -> usize {
    bits.iter()
        .fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize)
}

/// Appends the `width` low bits of `value` to `out`, MSB first.
pub fn push_index(value: usize, width: usize, out: &mut Vec<u8>) {
    for shift in (0..width).rev() {
        out.push(((value >> shift) & 1) as u8);
    }
}

pub fn from_index(value: usize, width: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(width);
    push_index(value, width, &mut out);
    out
}

pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random::<bool>() as u8).collect()
}

/// Number of positions where `a` and `b` differ (over the shorter length).
pub fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn gray(v: usize) -> usize {
    v ^ (v >> 1)
}

pub fn gray_inverse(mut g: usize) -> usize {
    let mut v = 0;
    while g != 0 {
        v ^= g;
        g >>= 1;
    }
    v
}

/// `log2(x)` for a power of two, `None` otherwise.
pub fn exact_log2(x: usize) -> Option<usize> {
    if x.is_power_of_two() {
        Some(x.trailing_zeros() as usize)
    } else {
        None
    }
}
