use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Finite 0/1 sequence `⟨s_0, …, s_{n-1}⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitPrefix {
    bits: Vec<bool>,
}

impl BitPrefix {
    pub fn new(bits: Vec<bool>) -> BitPrefix {
        BitPrefix { bits }
    }

    pub fn empty() -> BitPrefix {
        BitPrefix { bits: Vec::new() }
    }

    pub fn zeros(len: usize) -> BitPrefix {
        BitPrefix { bits: alloc::vec![false; len] }
    }

    /// `s_i` is bit `i` of `index`, so the odometer acts as `index + 1 mod 2^len`.
    pub fn from_index(index: u64, len: usize) -> BitPrefix {
        BitPrefix { bits: (0..len).map(|i| i < 64 && (index >> i) & 1 == 1).collect() }
    }

    pub fn to_index(&self) -> u64 {
        self.bits.iter().take(64).enumerate().fold(0, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    /// Parse a string of `0`/`1` characters, `s_0` first.
    pub fn parse(s: &str) -> Result<BitPrefix> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Invalid(alloc::format!("bad bit {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitPrefix::new)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn truncate(&self, n: usize) -> BitPrefix {
        BitPrefix { bits: self.bits[..n.min(self.bits.len())].to_vec() }
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn is_prefix_of(&self, other: &BitPrefix) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// First index where the two prefixes differ.
    pub fn first_difference(&self, other: &BitPrefix) -> Option<usize> {
        self.bits.iter().zip(&other.bits).position(|(a, b)| a != b)
    }

    /// The `n` with `s_0 = … = s_{n-2} = 1` and `s_{n-1} = 0`, if it lies within the prefix.
    pub fn exceptional_index(&self) -> Option<usize> {
        self.bits.iter().position(|b| !b).map(|i| i + 1)
    }
}

impl fmt::Display for BitPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `N(s↾n)` for the whole prefix: binary digits `⟨1, 1 - s_{n-1}, s_{n-2}, …, s_0⟩`.
///
/// The empty prefix gets 1. Prefixes longer than 126 bits overflow and are rejected.
pub fn code_n(prefix: &BitPrefix) -> Result<u128> {
    let n = prefix.len();
    if n > 126 {
        return Err(Error::Invalid("prefix too long for code".into()));
    }
    Ok(code_bits(prefix.bits()))
}

pub(crate) fn code_bits(bits: &[bool]) -> u128 {
    let n = bits.len();
    if n == 0 {
        return 1;
    }
    let mut v: u128 = 1 << n;
    for (i, &b) in bits[..n - 1].iter().enumerate() {
        if b {
            v |= 1 << i;
        }
    }
    if !bits[n - 1] {
        v |= 1 << (n - 1);
    }
    v
}

/// `N(s↾n)` for an index-encoded prefix of length `n` (bit `i` of `index` is `s_i`).
#[inline]
pub fn code_index(index: u64, n: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    let low = index & ((1u64 << (n - 1)) - 1);
    let top = (index >> (n - 1)) & 1;
    low | ((1 - top) << (n - 1)) | (1u64 << n)
}

/// Add-one-and-carry on the prefix; the all-ones prefix wraps to all zeros.
pub fn adding_machine(prefix: &BitPrefix) -> BitPrefix {
    let mut bits = prefix.bits.clone();
    for b in bits.iter_mut() {
        if *b {
            *b = false;
        } else {
            *b = true;
            break;
        }
    }
    BitPrefix { bits }
}
