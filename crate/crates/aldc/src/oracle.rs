//! Query-counted read access to (possibly corrupted) codewords.
//!
//! Every decoder in this crate touches codewords exclusively through a
//! [`CorruptedOracle`], so locality is measured identically everywhere: each
//! read of a range `[l, r]` costs exactly `r - l + 1` queries, repeated reads
//! of the same position are counted every time, and rejected reads cost
//! nothing. Indices are 1-based.

use crate::bits::BitString;
use crate::error::{Error, Result};

/// An ordered log of the (inclusive, 1-based) intervals read so far.
#[derive(Debug, Clone, Default)]
pub struct QueryLog {
    ranges: Vec<(usize, usize)>,
}

impl QueryLog {
    pub fn ranges(&self) -> &[(usize, usize)] {
        &self.ranges
    }

    pub fn total_queries(&self) -> u64 {
        self.ranges.iter().map(|&(l, r)| (r - l + 1) as u64).sum()
    }

    /// True if the queried index set can be partitioned into disjoint
    /// contiguous intervals of length exactly `t`.
    ///
    /// Overlapping reads make the query multiset not a set, in which case no
    /// such partition exists and this returns false.
    pub fn partitions_into_intervals(&self, t: usize) -> bool {
        if t == 0 {
            return false;
        }
        let mut sorted = self.ranges.clone();
        sorted.sort_unstable();
        let mut merged: Vec<(usize, usize)> = Vec::new();
        for (l, r) in sorted {
            match merged.last_mut() {
                Some(last) if l <= last.1 => return false, // overlap
                Some(last) if l == last.1 + 1 => last.1 = r,
                _ => merged.push((l, r)),
            }
        }
        merged.iter().all(|&(l, r)| (r - l + 1) % t == 0)
    }
}

/// Read access to a possibly corrupted codeword, with exact query counting.
#[derive(Debug, Clone)]
pub struct CorruptedOracle {
    content: BitString,
    queries_used: u64,
    log: QueryLog,
}

impl CorruptedOracle {
    /// Opens an oracle over `word`. Fails on the empty word.
    pub fn open(word: BitString) -> Result<CorruptedOracle> {
        if word.is_empty() {
            return Err(Error::InvalidInput(
                "cannot open oracle over empty word".into(),
            ));
        }
        Ok(CorruptedOracle {
            content: word,
            queries_used: 0,
            log: QueryLog::default(),
        })
    }

    pub fn len(&self) -> usize {
        self.content.len()
    }

    pub fn is_empty(&self) -> bool {
        false // open() rejects empty words
    }

    pub fn queries_used(&self) -> u64 {
        self.queries_used
    }

    pub fn log(&self) -> &QueryLog {
        &self.log
    }

    /// Reads the inclusive 1-based range `[l, r]`, charging `r - l + 1`
    /// queries. Out-of-bounds reads are rejected without charging.
    pub fn read_range(&mut self, l: usize, r: usize) -> Result<BitString> {
        self.read_range_slice(l, r)
            .map(|s| s.iter().copied().collect())
    }

    /// Allocation-free variant of [`read_range`](Self::read_range): counts
    /// the queries identically but hands out a borrow of the content.
    pub fn read_range_slice(&mut self, l: usize, r: usize) -> Result<&[u8]> {
        if l < 1 || r < l || r > self.content.len() {
            return Err(Error::RangeError {
                l,
                r,
                len: self.content.len(),
            });
        }
        self.queries_used += (r - l + 1) as u64;
        self.log.ranges.push((l, r));
        Ok(&self.content.as_slice()[l - 1..r])
    }

    /// The underlying word, for ground-truth comparisons in tests and the
    /// channel classifier. Does not count as a query.
    pub fn content(&self) -> &BitString {
        &self.content
    }
}
