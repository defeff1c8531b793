//! Constant composition distribution matching.
//!
//! The matcher is arithmetic coding with exact integer intervals: every
//! prefix of a constant-composition sequence owns the interval of
//! lexicographically ordered completions, whose width is the multinomial
//! count of the remaining symbols. The `k` input bits are read as an
//! integer point inside `[0, 2^k)` and the encoder walks down the tree of
//! intervals containing it. With exact big-integer arithmetic this is
//! bit-exact and invertible on every platform.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::distribution::MbDistribution;
use crate::error::{Error, Result};

/// Target number of occurrences of each amplitude level in a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    pub block_len: usize,
    pub counts: Vec<usize>,
}

impl Composition {
    pub fn new(counts: Vec<usize>) -> Self {
        Self {
            block_len: counts.iter().sum(),
            counts,
        }
    }

    /// Number of sequences with this composition.
    pub fn multinomial(&self) -> BigUint {
        let mut total = BigUint::one();
        let mut n = 0usize;
        for &c in &self.counts {
            // total *= binom(n + c, c), built incrementally so each division is exact.
            for j in 1..=c {
                total *= BigUint::from(n + j);
                total /= BigUint::from(j);
            }
            n += c;
        }
        total
    }

    /// Input length of the matcher: `floor(log2(multinomial))`.
    pub fn input_bits(&self) -> usize {
        (self.multinomial().bits() as usize).saturating_sub(1)
    }

    /// KL divergence `D(counts/n ‖ target)` in nats.
    pub fn kl_to(&self, target: &[f64]) -> f64 {
        let n = self.block_len as f64;
        self.counts
            .iter()
            .zip(target)
            .filter(|(&c, _)| c > 0)
            .map(|(&c, &p)| {
                let q = c as f64 / n;
                if p > 0.0 {
                    q * (q / p).ln()
                } else {
                    f64::INFINITY
                }
            })
            .sum()
    }
}

/// Integer composition of `block_len` close to the amplitude marginal of `dist`.
///
/// Largest-remainder rounding of `block_len · marginal`, then single-unit
/// moves between levels while they strictly reduce the KL divergence. The
/// objective is separable and convex in each count, so the exchange pass
/// ends at the minimum over all compositions of `block_len`.
pub fn quantize_composition(dist: &MbDistribution, block_len: usize) -> Result<Composition> {
    if block_len == 0 {
        return Err(Error::InvalidParameter("block_len must be >= 1".into()));
    }
    let target = dist.marginal();
    let l = target.len();
    let scaled: Vec<f64> = target.iter().map(|p| p * block_len as f64).collect();
    let mut counts: Vec<usize> = scaled.iter().map(|x| x.floor() as usize).collect();
    let mut short = block_len - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| {
        let ra = scaled[a] - scaled[a].floor();
        let rb = scaled[b] - scaled[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().cycle() {
        if short == 0 {
            break;
        }
        counts[i] += 1;
        short -= 1;
    }

    let n = block_len as f64;
    let term = |c: usize, p: f64| -> f64 {
        if c == 0 {
            0.0
        } else if p == 0.0 {
            f64::INFINITY
        } else {
            let q = c as f64 / n;
            q * (q / p).ln()
        }
    };
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for from in 0..l {
            if counts[from] == 0 {
                continue;
            }
            for to in 0..l {
                if to == from {
                    continue;
                }
                let delta = term(counts[from] - 1, target[from]) + term(counts[to] + 1, target[to])
                    - term(counts[from], target[from])
                    - term(counts[to], target[to]);
                if delta < -1e-15 && best.is_none_or(|b| delta < b.0) {
                    best = Some((delta, from, to));
                }
            }
        }
        match best {
            Some((_, from, to)) => {
                counts[from] -= 1;
                counts[to] += 1;
            }
            None => break,
        }
    }
    Ok(Composition { block_len, counts })
}

/// Matcher for one fixed composition.
#[derive(Debug, Clone)]
pub struct Ccdm {
    comp: Composition,
    total: BigUint,
    k: usize,
}

impl Ccdm {
    pub fn new(comp: Composition) -> Self {
        let total = comp.multinomial();
        let k = (total.bits() as usize).saturating_sub(1);
        Self { comp, total, k }
    }

    pub fn composition(&self) -> &Composition {
        &self.comp
    }

    /// Bits consumed per block.
    pub fn input_bits(&self) -> usize {
        self.k
    }

    pub fn block_len(&self) -> usize {
        self.comp.block_len
    }

    /// Maps `k` bits (MSB first) to a sequence of amplitude level indices.
    pub fn encode(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if bits.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: bits.len(),
            });
        }
        let mut point = bits_to_int(bits);
        let mut remaining = self.comp.counts.clone();
        let mut n = self.comp.block_len;
        let mut width = self.total.clone();
        let mut out = Vec::with_capacity(n);
        while n > 0 {
            let mut chosen = None;
            for (a, c) in remaining.iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                let sub = &width * *c / n;
                if point < sub {
                    width = sub;
                    chosen = Some(a);
                    break;
                }
                point -= sub;
            }
            let a = chosen.expect("point lies inside the interval");
            remaining[a] -= 1;
            n -= 1;
            out.push(a as u8);
        }
        Ok(out)
    }

    /// Inverse of [`Ccdm::encode`].
    pub fn decode(&self, seq: &[u8]) -> Result<Vec<u8>> {
        if seq.len() != self.comp.block_len {
            return Err(Error::InvalidSequence(format!(
                "length {} but block length {}",
                seq.len(),
                self.comp.block_len
            )));
        }
        let mut counts = vec![0usize; self.comp.counts.len()];
        for &a in seq {
            let a = a as usize;
            if a >= counts.len() {
                return Err(Error::InvalidSequence(format!("level index {a} out of range")));
            }
            counts[a] += 1;
        }
        if counts != self.comp.counts {
            return Err(Error::InvalidSequence(format!(
                "composition {:?} differs from {:?}",
                counts, self.comp.counts
            )));
        }
        let mut remaining = self.comp.counts.clone();
        let mut n = self.comp.block_len;
        let mut width = self.total.clone();
        let mut point = BigUint::zero();
        for &a in seq {
            let a = a as usize;
            for c in remaining.iter().take(a) {
                if *c > 0 {
                    point += &width * *c / n;
                }
            }
            width = &width * remaining[a] / n;
            remaining[a] -= 1;
            n -= 1;
        }
        if point.bits() as usize > self.k {
            return Err(Error::InvalidSequence("sequence outside the matcher image".into()));
        }
        Ok(int_to_bits(&point, self.k))
    }
}

pub fn ccdm_encode(bits: &[u8], comp: &Composition) -> Result<Vec<u8>> {
    Ccdm::new(comp.clone()).encode(bits)
}

pub fn ccdm_decode(seq: &[u8], comp: &Composition) -> Result<Vec<u8>> {
    Ccdm::new(comp.clone()).decode(seq)
}

fn bits_to_int(bits: &[u8]) -> BigUint {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    // Little-endian bytes of the MSB-first bit string.
    for (i, &b) in bits.iter().rev().enumerate() {
        if b & 1 == 1 {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    BigUint::from_bytes_le(&bytes)
}

fn int_to_bits(x: &BigUint, k: usize) -> Vec<u8> {
    let mut out = vec![0u8; k];
    if k <= 64 {
        let v = x.to_u64().expect("fits");
        for (i, o) in out.iter_mut().enumerate() {
            *o = ((v >> (k - 1 - i)) & 1) as u8;
        }
        return out;
    }
    let bytes = x.to_bytes_le();
    for (i, o) in out.iter_mut().rev().enumerate() {
        if let Some(byte) = bytes.get(i / 8) {
            *o = (byte >> (i % 8)) & 1;
        }
    }
    out
}
