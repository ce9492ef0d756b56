//! Binary BCH(63, k) codes with hard-decision Berlekamp-Massey decoding.
//!
//! Field: GF(2^6) built on the primitive polynomial `x^6 + x + 1`; codes are
//! narrow-sense (roots `alpha^1 .. alpha^2t`). Codewords are systematic with
//! the message first and parity last. Bit `j` of a 63-bit word is the
//! coefficient of `x^(62 - j)`.

use crate::error::{Error, Result};

pub const N: usize = 63;
const PRIMITIVE_POLY: u32 = 0x43;
const Q: usize = 64;

/// Largest error-correction capability listed by [`code_table`].
pub const MAX_TABLE_T: usize = 7;

struct Gf {
    exp: [u8; 2 * N],
    log: [u8; Q],
}

impl Gf {
    const fn build() -> Gf {
        let mut exp = [0u8; 2 * N];
        let mut log = [0u8; Q];
        let mut x: u32 = 1;
        let mut i = 0;
        while i < N {
            exp[i] = x as u8;
            exp[i + N] = x as u8;
            log[x as usize] = i as u8;
            x <<= 1;
            if x & 0x40 != 0 {
                x ^= PRIMITIVE_POLY;
            }
            i += 1;
        }
        Gf { exp, log }
    }

    fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.exp[(N - self.log[a as usize] as usize) % N]
    }

    fn pow(&self, e: usize) -> u8 {
        self.exp[e % N]
    }
}

static GF: Gf = Gf::build();

/// Minimal polynomial of `alpha^i` over GF(2), as a bit mask (bit d = x^d).
fn minimal_polynomial(i: usize) -> u64 {
    let mut coset = vec![i % N];
    let mut j = (2 * i) % N;
    while j != i % N {
        coset.push(j);
        j = (2 * j) % N;
    }
    // Product of (x + alpha^c) with coefficients in GF(64).
    let mut poly: Vec<u8> = vec![1];
    for &c in &coset {
        let root = GF.pow(c);
        let mut next = vec![0u8; poly.len() + 1];
        for (d, &a) in poly.iter().enumerate() {
            next[d + 1] ^= a;
            next[d] ^= GF.mul(a, root);
        }
        poly = next;
    }
    poly.iter().enumerate().fold(0u64, |m, (d, &a)| {
        debug_assert!(a <= 1);
        m | ((a as u64) << d)
    })
}

fn degree(p: u64) -> usize {
    63 - p.leading_zeros() as usize
}

fn gf2_mul(a: u64, b: u64) -> u64 {
    let mut r = 0u64;
    for d in 0..64 {
        if (b >> d) & 1 == 1 {
            r ^= a << d;
        }
    }
    r
}

/// Remainder of `a` modulo `b` over GF(2).
fn gf2_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Narrow-sense generator for designed capability `t`: the LCM of the
/// minimal polynomials of `alpha^1 .. alpha^2t`.
fn generator_for(t: usize) -> u64 {
    let mut seen = [false; N];
    let mut g = 1u64;
    for i in 1..=2 * t {
        let rep = i % N;
        if seen[rep] {
            continue;
        }
        let mut j = rep;
        loop {
            seen[j] = true;
            j = (2 * j) % N;
            if j == rep {
                break;
            }
        }
        g = gf2_mul(g, minimal_polynomial(rep));
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeEntry {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub rate: f64,
}

/// Length-63 codes from rate 1 (uncoded, `t = 0`) down to `t = 7`
/// (`k = 24`), in decreasing rate.
pub fn code_table() -> Vec<CodeEntry> {
    (0..=MAX_TABLE_T)
        .map(|t| {
            let k = N - degree(generator_for(t));
            CodeEntry {
                n: N,
                k,
                t,
                rate: k as f64 / N as f64,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchCode {
    k: usize,
    t: usize,
    generator: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Corrected(usize),
    /// Uncorrectable; the message holds the received systematic bits.
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub message: Vec<u8>,
    pub status: DecodeStatus,
}

impl BchCode {
    /// Code correcting up to `t` errors; `t = 0` is the uncoded passthrough.
    pub fn with_t(t: usize) -> Result<Self> {
        if t > MAX_TABLE_T {
            return Err(Error::InvalidCode(format!(
                "t = {t} outside 0..={MAX_TABLE_T}"
            )));
        }
        let generator = generator_for(t);
        Ok(Self {
            k: N - degree(generator),
            t,
            generator,
        })
    }

    /// Code with `k` message bits from [`code_table`].
    pub fn with_k(k: usize) -> Result<Self> {
        code_table()
            .into_iter()
            .find(|e| e.k == k)
            .ok_or_else(|| {
                let ks: Vec<String> = code_table().iter().map(|e| e.k.to_string()).collect();
                Error::InvalidCode(format!("no BCH(63, {k}); available k: {}", ks.join(", ")))
            })
            .and_then(|e| Self::with_t(e.t))
    }

    pub fn n(&self) -> usize {
        N
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / N as f64
    }

    /// Generator polynomial as a bit mask (bit d = coefficient of x^d).
    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k {
            return Err(Error::InvalidCode(format!(
                "message has {} bits, BCH(63, {}) needs {}",
                message.len(),
                self.k,
                self.k
            )));
        }
        let parity_len = N - self.k;
        let m = message
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | (b & 1) as u64);
        let parity = gf2_rem(m << parity_len, self.generator);
        let mut out = Vec::with_capacity(N);
        out.extend(message.iter().map(|b| b & 1));
        for d in (0..parity_len).rev() {
            out.push(((parity >> d) & 1) as u8);
        }
        Ok(out)
    }

    pub fn decode(&self, received: &[u8]) -> Result<DecodeResult> {
        if received.len() != N {
            return Err(Error::InvalidCode(format!(
                "received word has {} bits, expected 63",
                received.len()
            )));
        }
        let mut word: Vec<u8> = received.iter().map(|b| b & 1).collect();
        if self.t == 0 {
            return Ok(DecodeResult {
                message: word,
                status: DecodeStatus::Corrected(0),
            });
        }
        let syndromes = self.syndromes(&word);
        if syndromes.iter().all(|&s| s == 0) {
            word.truncate(self.k);
            return Ok(DecodeResult {
                message: word,
                status: DecodeStatus::Corrected(0),
            });
        }
        let locator = berlekamp_massey(&syndromes);
        let deg = locator.len() - 1;
        let positions = if deg <= self.t {
            chien_search(&locator)
        } else {
            Vec::new()
        };
        let status = if deg > self.t || positions.len() != deg {
            DecodeStatus::Failed
        } else {
            for &p in &positions {
                word[N - 1 - p] ^= 1;
            }
            DecodeStatus::Corrected(deg)
        };
        word.truncate(self.k);
        Ok(DecodeResult {
            message: word,
            status,
        })
    }

    fn syndromes(&self, word: &[u8]) -> Vec<u8> {
        (1..=2 * self.t)
            .map(|i| {
                word.iter().enumerate().fold(0u8, |acc, (j, &b)| {
                    if b == 1 {
                        acc ^ GF.pow(i * (N - 1 - j))
                    } else {
                        acc
                    }
                })
            })
            .collect()
    }

    /// Encodes a bit stream whose length is a multiple of `k`.
    pub fn encode_stream(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if !bits.len().is_multiple_of(self.k) {
            return Err(Error::InvalidCode(format!(
                "{} bits is not a multiple of k = {}",
                bits.len(),
                self.k
            )));
        }
        let mut out = Vec::with_capacity(bits.len() / self.k * N);
        for block in bits.chunks(self.k) {
            out.extend(self.encode(block)?);
        }
        Ok(out)
    }

    /// Decodes a stream of 63-bit words; returns the messages and the number
    /// of failed blocks.
    pub fn decode_stream(&self, bits: &[u8]) -> Result<(Vec<u8>, usize)> {
        if !bits.len().is_multiple_of(N) {
            return Err(Error::InvalidCode(format!(
                "{} bits is not a multiple of 63",
                bits.len()
            )));
        }
        let mut out = Vec::with_capacity(bits.len() / N * self.k);
        let mut failures = 0;
        for block in bits.chunks(N) {
            let r = self.decode(block)?;
            failures += (r.status == DecodeStatus::Failed) as usize;
            out.extend(r.message);
        }
        Ok((out, failures))
    }
}

/// Error-locator polynomial `Lambda(x)`, lowest degree first, trimmed.
fn berlekamp_massey(s: &[u8]) -> Vec<u8> {
    let mut c = vec![0u8; s.len() + 1];
    let mut b = vec![0u8; s.len() + 1];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut m = 1usize;
    let mut last = 1u8;
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=l {
            d ^= GF.mul(c[i], s[n - i]);
        }
        if d == 0 {
            m += 1;
            continue;
        }
        let coef = GF.mul(d, GF.inv(last));
        let prev = c.clone();
        for i in 0..c.len() - m {
            c[i + m] ^= GF.mul(coef, b[i]);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    while c.len() > 1 && c[c.len() - 1] == 0 {
        c.pop();
    }
    c
}

/// Exponents `p` with `Lambda(alpha^-p) = 0`.
fn chien_search(locator: &[u8]) -> Vec<usize> {
    (0..N)
        .filter(|&p| {
            let x = GF.pow(N - p);
            let mut acc = 0u8;
            let mut xp = 1u8;
            for &c in locator {
                acc ^= GF.mul(c, xp);
                xp = GF.mul(xp, x);
            }
            acc == 0
        })
        .collect()
}
