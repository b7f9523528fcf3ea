//! Private-key Hamming code with amortized interval decoding and
//! consecutive-interval querying.
//!
//! Encoding: the message is split into blocks of `a*c` bits, each block is
//! Reed-Solomon encoded to `A*c` bits, every encoded block is cut into
//! `beta_sub = A*c/t` sub-blocks of `t` bits, the sub-blocks are permuted
//! globally by a secret permutation, and a one-time pad is XORed on top.
//!
//! The decoder reverses the pipeline for exactly the blocks covering the
//! requested message interval. Every oracle read is one whole `t`-bit
//! sub-block slot, so the query set always partitions into disjoint `t`-bit
//! intervals, and the query count for an interval of length >= `a*c` is at
//! most `2/rate` per recovered bit.
//!
//! Against a channel that cannot see the key, the permutation spreads any
//! fixed error pattern uniformly over sub-block slots, so the number of
//! corrupted sub-blocks landing in one encoded block follows a
//! hypergeometric law; the pad forces the channel's pattern to be oblivious
//! to the plaintext.

use rand::Rng;

use crate::bits::BitString;
use crate::ecc::{self, EccParams};
use crate::error::{Error, Result};
use crate::oracle::CorruptedOracle;
use crate::seed::{self, Seed};

const KEY_MAGIC: &[u8; 7] = b"PALDCK1";

#[derive(Debug, Clone, Copy)]
pub struct PaldcParams {
    pub k: usize,
    pub ecc: EccParams,
    /// Sub-block size in bits; every decoder read is one t-bit slot.
    pub t: usize,
    /// Desk-scale security parameter for the spreading condition.
    pub lambda: u32,
}

impl PaldcParams {
    pub fn new(k: usize, ecc: EccParams, t: usize) -> Result<PaldcParams> {
        let p = PaldcParams {
            k,
            ecc,
            t,
            lambda: 4,
        };
        let violations = p.violations();
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(Error::InvalidParams(violations))
        }
    }

    /// All violated constraints, never just the first.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let ca = self.ecc.message_bits();
        let c_a = self.ecc.codeword_bits();
        if self.k > 1 << 34 {
            v.push(format!(
                "message length {} beyond the supported ceiling",
                self.k
            ));
            return v;
        }
        if self.k == 0 || !self.k.is_multiple_of(ca) {
            v.push(format!(
                "message length {} must be a positive multiple of ca = {ca}",
                self.k
            ));
        }
        if self.t == 0 || !c_a.is_multiple_of(self.t) {
            v.push(format!("sub-block size {} must divide cA = {c_a}", self.t));
        } else if c_a / self.t < 2 {
            v.push(format!(
                "cA/t = {} sub-blocks per block; need at least 2 for sub-block permuting",
                c_a / self.t
            ));
        }
        let spread = self.t as f64 * (self.lambda as f64).log2();
        if (ca as f64) < spread {
            v.push(format!(
                "spreading condition: ca = {ca} < t*log2(lambda) = {spread}"
            ));
        }
        v
    }

    /// Bits per message block.
    pub fn ca(&self) -> usize {
        self.ecc.message_bits()
    }

    /// Bits per encoded block.
    pub fn c_a(&self) -> usize {
        self.ecc.codeword_bits()
    }

    /// Codeword length m = k / rate.
    pub fn m(&self) -> usize {
        self.k / self.ecc.a * self.ecc.code_len
    }

    /// Number of message blocks.
    pub fn msg_blocks(&self) -> usize {
        self.k / self.ca()
    }

    /// Sub-blocks per encoded block.
    pub fn beta_sub(&self) -> usize {
        self.c_a() / self.t
    }

    /// Total sub-block slots m / t.
    pub fn slots(&self) -> usize {
        self.m() / self.t
    }

    pub fn rate(&self) -> f64 {
        self.ecc.rate()
    }

    /// The amortized locality certificate 2/rate, valid for intervals of at
    /// least `kappa()` bits.
    pub fn alpha_bound(&self) -> f64 {
        2.0 / self.rate()
    }

    /// Interval size from which the 2/rate bound holds for every placement.
    /// An interval of `ca + 2` bits can already straddle three message
    /// blocks, so the guarantee needs two blocks' worth of length.
    pub fn kappa(&self) -> usize {
        2 * self.ca()
    }

    /// Bit-level noise tolerance: one flipped bit corrupts a whole symbol,
    /// so the symbol tolerance shrinks by the symbol width.
    pub fn bit_tolerance(&self) -> f64 {
        self.ecc.tolerance() / self.ecc.c as f64
    }
}

/// The secret key: a permutation over sub-block slots and a one-time pad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    /// pi[i] = image of slot i+1, 1-based values.
    pi: Vec<u32>,
    /// pi_inv[q-1] = the slot whose image is q.
    pi_inv: Vec<u32>,
    mask: BitString,
    m: usize,
    t: usize,
}

impl SecretKey {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn pi(&self) -> &[u32] {
        &self.pi
    }

    pub fn mask(&self) -> &BitString {
        &self.mask
    }

    /// Slot holding pre-permutation sub-block `q` (both 1-based).
    pub fn slot_of(&self, q: usize) -> usize {
        self.pi_inv[q - 1] as usize
    }

    pub fn from_parts(pi: Vec<u32>, mask: BitString, m: usize, t: usize) -> Result<SecretKey> {
        if t == 0 || m == 0 || !m.is_multiple_of(t) {
            return Err(Error::InvalidInput("bad key dimensions".into()));
        }
        let slots = m / t;
        if pi.len() != slots || mask.len() != m {
            return Err(Error::InvalidInput(
                "key component sizes inconsistent".into(),
            ));
        }
        let mut pi_inv = vec![0u32; slots];
        let mut seen = vec![false; slots];
        for (i, &img) in pi.iter().enumerate() {
            if img == 0 || img as usize > slots || seen[img as usize - 1] {
                return Err(Error::InvalidInput("permutation is not a bijection".into()));
            }
            seen[img as usize - 1] = true;
            pi_inv[img as usize - 1] = i as u32 + 1;
        }
        Ok(SecretKey {
            pi,
            pi_inv,
            mask,
            m,
            t,
        })
    }

    /// Length-prefixed binary form: magic, m and t as u64 LE, the
    /// permutation as u32 LE entries, then the pad packed 8 bits per byte
    /// (least-significant bit first).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(KEY_MAGIC);
        out.extend_from_slice(&(self.m as u64).to_le_bytes());
        out.extend_from_slice(&(self.t as u64).to_le_bytes());
        for &p in &self.pi {
            out.extend_from_slice(&p.to_le_bytes());
        }
        out.extend_from_slice(&self.mask.to_packed_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<SecretKey> {
        let fail = |what: &str| Error::InvalidInput(format!("key parse: {what}"));
        if bytes.len() < KEY_MAGIC.len() + 16 {
            return Err(fail("truncated header"));
        }
        if &bytes[..KEY_MAGIC.len()] != KEY_MAGIC {
            return Err(fail("bad magic"));
        }
        let mut off = KEY_MAGIC.len();
        let read_u64 = |off: usize| u64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
        let m = read_u64(off) as usize;
        let t = read_u64(off + 8) as usize;
        off += 16;
        if t == 0 || m == 0 || !m.is_multiple_of(t) || m > (1 << 34) {
            return Err(fail("bad dimensions"));
        }
        let slots = m / t;
        let pi_bytes = slots.checked_mul(4).ok_or_else(|| fail("overflow"))?;
        let mask_bytes = m.div_ceil(8);
        if bytes.len() != off + pi_bytes + mask_bytes {
            return Err(fail("length mismatch"));
        }
        let mut pi = Vec::with_capacity(slots);
        for i in 0..slots {
            pi.push(u32::from_le_bytes(
                bytes[off + 4 * i..off + 4 * i + 4].try_into().unwrap(),
            ));
        }
        off += pi_bytes;
        let mask = BitString::from_packed_bytes(&bytes[off..], m)?;
        SecretKey::from_parts(pi, mask, m, t)
    }
}

/// Draws a key from a 32-byte seed: Fisher-Yates for the permutation, then
/// the pad, both from one ChaCha20 stream. Deterministic given the seed.
pub fn paldc_gen(params: &PaldcParams, seed_bytes: Seed) -> Result<SecretKey> {
    let violations = params.violations();
    if !violations.is_empty() {
        return Err(Error::InvalidParams(violations));
    }
    let mut rng = seed::rng_from(seed_bytes);
    let slots = params.slots();
    let mut pi: Vec<u32> = (1..=slots as u32).collect();
    for i in (1..slots).rev() {
        let j = rng.gen_range(0..=i);
        pi.swap(i, j);
    }
    let mask = BitString::random(params.m(), &mut rng);
    SecretKey::from_parts(pi, mask, params.m(), params.t)
}

/// Encodes a k-bit message into an m-bit codeword.
pub fn paldc_enc(sk: &SecretKey, x: &BitString, params: &PaldcParams) -> Result<BitString> {
    if x.len() != params.k {
        return Err(Error::InvalidInput(format!(
            "message has {} bits, expected {}",
            x.len(),
            params.k
        )));
    }
    if sk.m != params.m() || sk.t != params.t {
        return Err(Error::InvalidInput("key does not match parameters".into()));
    }
    // Blockwise systematic RS, then lay sub-blocks out in permuted order.
    let mut encoded = BitString::new();
    for j in 1..=params.msg_blocks() {
        let block = x.block(j, params.ca());
        encoded.extend(&ecc::ecc_encode(&block, &params.ecc)?);
    }
    let t = params.t;
    let mut out = BitString::zeros(params.m());
    for slot in 1..=params.slots() {
        let q = sk.pi[slot - 1] as usize;
        for b in 0..t {
            out.set((slot - 1) * t + b, encoded.bit((q - 1) * t + b));
        }
    }
    Ok(out.xor(&sk.mask))
}

/// 1-based inclusive range of the message blocks covering `[l, r]`.
fn covering_blocks(l: usize, r: usize, ca: usize) -> (usize, usize) {
    ((l - 1) / ca + 1, (r - 1) / ca + 1)
}

/// The exact t-bit oracle ranges `paldc_dec` reads for `[l, r]`, in read
/// order. Pairwise disjoint.
pub fn query_plan(
    l: usize,
    r: usize,
    sk: &SecretKey,
    params: &PaldcParams,
) -> Result<Vec<(usize, usize)>> {
    if l < 1 || r < l || r > params.k {
        return Err(Error::InvalidInput(format!("bad interval [{l},{r}]")));
    }
    let (jl, jr) = covering_blocks(l, r, params.ca());
    let beta = params.beta_sub();
    let t = params.t;
    let mut plan = Vec::with_capacity((jr - jl + 1) * beta);
    for j in jl..=jr {
        for r_idx in 1..=beta {
            let q = (j - 1) * beta + r_idx;
            let slot = sk.slot_of(q);
            plan.push(((slot - 1) * t + 1, slot * t));
        }
    }
    Ok(plan)
}

/// Interval decode against an arbitrary fetch callback. The callback
/// receives 1-based inclusive codeword ranges, always t-aligned t-bit
/// slots, and may fail (propagated as decode failure).
pub fn paldc_dec_with_fetch(
    sk: &SecretKey,
    params: &PaldcParams,
    l: usize,
    r: usize,
    fetch: &mut dyn FnMut(usize, usize) -> Result<BitString>,
) -> Result<BitString> {
    if l < 1 || r < l || r > params.k {
        return Err(Error::InvalidInput(format!("bad interval [{l},{r}]")));
    }
    let (jl, jr) = covering_blocks(l, r, params.ca());
    let beta = params.beta_sub();
    let t = params.t;
    let ca = params.ca();
    let mut recovered = BitString::new();
    for j in jl..=jr {
        let mut masked_block = BitString::new();
        for r_idx in 1..=beta {
            // Indexing convention, pinned against drift: codeword slot p
            // holds pre-permutation sub-block pi(p), so block J's r-th
            // sub-block (global number q = (J-1)*beta + r) is read from
            // slot pi^{-1}(q).
            let q = (j - 1) * beta + r_idx;
            let slot = sk.slot_of(q);
            let sub = fetch((slot - 1) * t + 1, slot * t)?;
            if sub.len() != t {
                return Err(Error::DecodeFailure("fetch returned wrong width".into()));
            }
            let pad = sk.mask.slice((slot - 1) * t, slot * t);
            masked_block.extend(&sub.xor(&pad));
        }
        let message_block = ecc::ecc_decode(&masked_block, &params.ecc)
            .map_err(|e| Error::DecodeFailure(format!("block {j}: {e}")))?;
        recovered.extend(&message_block);
    }
    let offset = (jl - 1) * ca;
    Ok(recovered.slice(l - 1 - offset, r - offset))
}

/// Interval decode over a query-counted oracle.
pub fn paldc_dec(
    sk: &SecretKey,
    oracle: &mut CorruptedOracle,
    l: usize,
    r: usize,
    params: &PaldcParams,
) -> Result<BitString> {
    paldc_dec_with_fetch(sk, params, l, r, &mut |a, b| oracle.read_range(a, b))
}

/// Per-encoded-block count of corrupted symbols, judged against the clean
/// codeword. Ground truth for the error-spreading experiments.
pub fn block_symbol_errors(
    sk: &SecretKey,
    params: &PaldcParams,
    clean: &BitString,
    corrupted: &BitString,
) -> Vec<usize> {
    assert_eq!(clean.len(), params.m());
    assert_eq!(corrupted.len(), params.m());
    let c = params.ecc.c;
    let t = params.t;
    let mut out = Vec::with_capacity(params.msg_blocks());
    for j in 1..=params.msg_blocks() {
        let mut errs = 0usize;
        for sym in 0..params.ecc.code_len {
            // Symbol `sym` of block j lives at pre-permutation bit positions
            // [(j-1)*cA + sym*c ..); map each bit through the permutation.
            let mut differs = false;
            for b in 0..c {
                let pre = (j - 1) * params.c_a() + sym * c + b; // 0-based
                let q = pre / t + 1;
                let slot = sk.slot_of(q);
                let pos = (slot - 1) * t + (pre % t);
                if clean.bit(pos) != corrupted.bit(pos) {
                    differs = true;
                    break;
                }
            }
            if differs {
                errs += 1;
            }
        }
        out.push(errs);
    }
    out
}

/// Default desk-scale configuration: (A, a, c) = (32, 16, 8), t = 32,
/// k = 2^14.
pub fn default_params() -> PaldcParams {
    PaldcParams::new(1 << 14, EccParams::new(32, 16).unwrap(), 32).unwrap()
}
