//! Bit strings: the universal message/codeword representation.
//!
//! Bits are stored one per byte (value 0 or 1). Every index exposed by this
//! crate is 1-based to match the interval conventions used throughout the
//! decoders; `BitString` itself is 0-based like any Rust slice, and the
//! conversion happens at the API boundary.

use std::fmt;

use rand::Rng;

use crate::error::Error;

/// An immutable-by-convention sequence of bits.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn zeros(len: usize) -> Self {
        BitString(vec![0u8; len])
    }

    pub fn from_bits(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitString(bits)
    }

    pub fn random<R: Rng>(len: usize, rng: &mut R) -> Self {
        BitString((0..len).map(|_| rng.gen_range(0..2u8)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: u8) {
        self.0[i] = v & 1;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// Sub-string over a 0-based half-open range.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString(self.0[start..end].to_vec())
    }

    pub fn concat(parts: &[&BitString]) -> BitString {
        let mut out = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for p in parts {
            out.extend_from_slice(&p.0);
        }
        BitString(out)
    }

    pub fn push(&mut self, bit: u8) {
        self.0.push(bit & 1);
    }

    pub fn extend(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.len(), other.len(), "xor of unequal lengths");
        BitString(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a ^ b)
                .collect(),
        )
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    pub fn hamming_distance(&self, other: &BitString) -> usize {
        assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Unsigned integer from `n` bits starting at `start`, least-significant
    /// bit first.
    pub fn read_uint(&self, start: usize, n: usize) -> u64 {
        let mut v = 0u64;
        for i in 0..n {
            v |= (self.0[start + i] as u64) << i;
        }
        v
    }

    /// Appends `n` bits of `v`, least-significant bit first.
    pub fn push_uint(&mut self, v: u64, n: usize) {
        for i in 0..n {
            self.0.push(((v >> i) & 1) as u8);
        }
    }

    /// Packs into bytes, least-significant bit first, trailing bits zero.
    pub fn to_packed_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len().div_ceil(8)];
        for (i, &b) in self.0.iter().enumerate() {
            out[i / 8] |= b << (i % 8);
        }
        out
    }

    pub fn from_packed_bytes(bytes: &[u8], bit_len: usize) -> Result<BitString, Error> {
        if bit_len > bytes.len() * 8 {
            return Err(Error::InvalidInput(format!(
                "bit length {bit_len} exceeds {} packed bytes",
                bytes.len()
            )));
        }
        let mut bits = Vec::with_capacity(bit_len);
        for i in 0..bit_len {
            bits.push((bytes[i / 8] >> (i % 8)) & 1);
        }
        Ok(BitString(bits))
    }

    /// The `i`-th block of `b` bits, 1-based: positions `[(i-1)b+1, ib]`.
    pub fn block(&self, i: usize, b: usize) -> BitString {
        self.slice((i - 1) * b, i * b)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString[{}]<", self.len())?;
        for &b in self.0.iter().take(64) {
            write!(f, "{b}")?;
        }
        if self.len() > 64 {
            write!(f, "...")?;
        }
        write!(f, ">")
    }
}

impl FromIterator<u8> for BitString {
    fn from_iter<T: IntoIterator<Item = u8>>(iter: T) -> Self {
        BitString(iter.into_iter().map(|b| b & 1).collect())
    }
}
