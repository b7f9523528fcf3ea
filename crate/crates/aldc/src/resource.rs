//! Puzzle-based wrapper that removes the shared secret key: the key seed is
//! sealed in a sequential-work puzzle, the puzzle is spread over a
//! repetition code appended to the codeword, and the decoder first recovers
//! and solves the puzzle, then runs the private-key interval decoder.
//!
//! The puzzle is a toy iterated-hash time lock: the seed is masked with the
//! end of a SHA-256 chain whose start derives from the (public) seed
//! commitment. Generating and solving both take T sequential hashes; the
//! commitment catches corrupted or forged puzzles. This provides the
//! interface and decoder-side cost asymmetry only, not a hardness claim.

use rand::{Rng, RngCore};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::bits::BitString;
use crate::compiler::{
    compiled_dec_with_stats, enc_compile, CompiledStats, CompilerParams, IntervalDecoder,
};
use crate::ecc::{self, EccParams};
use crate::error::{Error, Result};
use crate::oracle::CorruptedOracle;
use crate::paldc::{paldc_dec_with_fetch, paldc_enc, paldc_gen, PaldcParams};
use crate::seed::Seed;

const PUZZLE_MAGIC: &[u8; 5] = b"RBPZ1";
/// magic + T + masked seed + commitment.
pub const PUZZLE_BYTES: usize = 5 + 8 + 32 + 32;

fn sha(tag: &[u8], data: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(tag);
    h.update(data);
    h.finalize().into()
}

/// A sealed 32-byte seed: recovering it takes `hardness` sequential hashes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Puzzle {
    pub hardness: u64,
    /// The seed XOR the end of the hash chain.
    pub chain_head: [u8; 32],
    /// SHA-256 commitment to the seed, for integrity.
    pub commitment: [u8; 32],
}

fn chain_tail(commitment: &[u8; 32], hardness: u64) -> [u8; 32] {
    let mut x = sha(b"puzz-chain", commitment);
    for _ in 0..hardness {
        x = sha(b"puzz-step", &x);
    }
    x
}

/// Seals `seed` behind `hardness` sequential hash iterations.
pub fn puzz_gen(seed: &Seed, hardness: u64) -> Result<Puzzle> {
    if hardness == 0 {
        return Err(Error::InvalidInput("hardness must be at least 1".into()));
    }
    let commitment = sha(b"puzz-commit", seed);
    let pad = chain_tail(&commitment, hardness);
    let mut chain_head = [0u8; 32];
    for i in 0..32 {
        chain_head[i] = seed[i] ^ pad[i];
    }
    Ok(Puzzle {
        hardness,
        chain_head,
        commitment,
    })
}

/// Recovers the sealed seed by re-walking the chain; fails when the puzzle
/// does not check against its commitment.
pub fn puzz_solve(z: &Puzzle) -> Result<Seed> {
    if z.hardness == 0 {
        return Err(Error::InvalidInput(
            "malformed puzzle: zero hardness".into(),
        ));
    }
    let pad = chain_tail(&z.commitment, z.hardness);
    let mut seed = [0u8; 32];
    for i in 0..32 {
        seed[i] = z.chain_head[i] ^ pad[i];
    }
    if sha(b"puzz-commit", &seed) != z.commitment {
        return Err(Error::InvalidInput(
            "puzzle failed its commitment check".into(),
        ));
    }
    Ok(seed)
}

impl Puzzle {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(PUZZLE_BYTES);
        out.extend_from_slice(PUZZLE_MAGIC);
        out.extend_from_slice(&self.hardness.to_le_bytes());
        out.extend_from_slice(&self.chain_head);
        out.extend_from_slice(&self.commitment);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Puzzle> {
        if bytes.len() != PUZZLE_BYTES {
            return Err(Error::InvalidInput(format!(
                "puzzle must be {PUZZLE_BYTES} bytes, got {}",
                bytes.len()
            )));
        }
        if &bytes[..5] != PUZZLE_MAGIC {
            return Err(Error::InvalidInput("bad puzzle magic".into()));
        }
        let hardness = u64::from_le_bytes(bytes[5..13].try_into().unwrap());
        if hardness == 0 || hardness > 1 << 40 {
            return Err(Error::InvalidInput("puzzle hardness out of range".into()));
        }
        Ok(Puzzle {
            hardness,
            chain_head: bytes[13..45].try_into().unwrap(),
            commitment: bytes[45..77].try_into().unwrap(),
        })
    }
}

/// Repetition-coded whole-message recovery: the payload is RS-encoded and
/// the codeword repeated; the decoder samples a few copies and majority
/// votes. Query count is linear in the payload, independent of how many
/// copies pad out the codeword.
#[derive(Debug, Clone, Copy)]
pub struct LdcStarParams {
    pub payload_bytes: usize,
    pub ecc: EccParams,
    pub copies: usize,
    pub sample_copies: usize,
}

impl LdcStarParams {
    /// Picks a codeword width compatible with t-bit interval querying:
    /// every copy is a whole number of t-bit intervals.
    pub fn new(
        payload_bytes: usize,
        copies: usize,
        sample_copies: usize,
        t: usize,
    ) -> Result<Self> {
        if t == 0 || !t.is_multiple_of(8) {
            return Err(Error::InvalidInput(
                "t must be a positive multiple of 8".into(),
            ));
        }
        if sample_copies == 0 || sample_copies > copies || sample_copies.is_multiple_of(2) {
            return Err(Error::InvalidInput(
                "sample_copies must be odd and at most copies".into(),
            ));
        }
        let unit = t / 8; // symbols per t bits
        let min_code = 2 * payload_bytes;
        let code_len = min_code.div_ceil(unit) * unit;
        let ecc = EccParams::new(code_len, payload_bytes)?;
        Ok(LdcStarParams {
            payload_bytes,
            ecc,
            copies,
            sample_copies,
        })
    }

    /// Bits per repeated copy.
    pub fn copy_bits(&self) -> usize {
        self.ecc.codeword_bits()
    }

    /// Total codeword bits.
    pub fn n_star(&self) -> usize {
        self.copies * self.copy_bits()
    }

    /// The decoder's query ceiling.
    pub fn query_ceiling(&self) -> u64 {
        (self.sample_copies * self.copy_bits()) as u64
    }
}

pub fn ldcstar_encode(payload: &[u8], p: &LdcStarParams) -> Result<BitString> {
    if payload.len() != p.payload_bytes {
        return Err(Error::InvalidInput(format!(
            "payload has {} bytes, expected {}",
            payload.len(),
            p.payload_bytes
        )));
    }
    let code = ecc::encode_symbols(payload, &p.ecc)?;
    let copy = ecc::symbols_to_bits(&code);
    let mut out = BitString::new();
    for _ in 0..p.copies {
        out.extend(&copy);
    }
    Ok(out)
}

/// Majority decode over `sample_copies` copies drawn without replacement.
/// `offset` is the 0-based bit position of the repetition region inside the
/// word served by `fetch`; reads are t-bit chunks so the overall decoder
/// stays t-consecutive.
pub fn ldcstar_decode_with_fetch(
    p: &LdcStarParams,
    offset: usize,
    t: usize,
    fetch: &mut dyn FnMut(usize, usize) -> Result<BitString>,
    rng: &mut dyn RngCore,
) -> Result<Vec<u8>> {
    let copy_bits = p.copy_bits();
    // Sample without replacement.
    let mut order: Vec<usize> = (0..p.copies).collect();
    for i in 0..p.copies {
        let j = (rng.next_u64() % (p.copies - i) as u64) as usize + i;
        order.swap(i, j);
    }
    let mut votes: Vec<(Vec<u8>, usize)> = Vec::new();
    for &copy in order.iter().take(p.sample_copies) {
        let start = offset + copy * copy_bits; // 0-based
        let mut bits = BitString::new();
        let mut pos = start;
        while pos < start + copy_bits {
            bits.extend(&fetch(pos + 1, pos + t)?);
            pos += t;
        }
        let Ok(payload) = ecc::decode_symbols(&ecc::bits_to_symbols(&bits), &[], &p.ecc) else {
            continue;
        };
        match votes.iter_mut().find(|(v, _)| *v == payload) {
            Some((_, count)) => *count += 1,
            None => votes.push((payload, 1)),
        }
    }
    match votes.into_iter().max_by_key(|&(_, count)| count) {
        Some((payload, count)) if 2 * count > p.sample_copies => Ok(payload),
        _ => Err(Error::DecodeFailure(
            "no majority among sampled copies".into(),
        )),
    }
}

/// Majority decode over an oracle; the repetition region starts at 0-based
/// bit `offset` of the oracle content.
pub fn ldcstar_decode(
    oracle: &mut CorruptedOracle,
    offset: usize,
    p: &LdcStarParams,
    t: usize,
    rng: &mut dyn RngCore,
) -> Result<Vec<u8>> {
    let before = oracle.queries_used();
    let out = ldcstar_decode_with_fetch(p, offset, t, &mut |a, b| oracle.read_range(a, b), rng);
    debug_assert!(oracle.queries_used() - before <= p.query_ceiling());
    out
}

/// Resource-bounded code: private-key codeword followed by the puzzle
/// region.
#[derive(Debug, Clone, Copy)]
pub struct RaldcParams {
    pub paldc: PaldcParams,
    pub star: LdcStarParams,
    pub hardness: u64,
}

impl RaldcParams {
    pub fn new(paldc: PaldcParams, hardness: u64) -> Result<RaldcParams> {
        Self::with_star(paldc, hardness, 9, 5)
    }

    pub fn with_star(
        paldc: PaldcParams,
        hardness: u64,
        copies: usize,
        sample_copies: usize,
    ) -> Result<RaldcParams> {
        let inner = paldc.violations();
        if !inner.is_empty() {
            return Err(Error::InvalidParams(inner));
        }
        if !paldc.t.is_multiple_of(8) {
            return Err(Error::InvalidInput(
                "sub-block size must be a multiple of 8".into(),
            ));
        }
        // One padded puzzle per codeword; pad to a whole multiple of the
        // sub-block width in bytes.
        let payload_bytes = PUZZLE_BYTES.div_ceil(paldc.t / 8) * (paldc.t / 8);
        let star = LdcStarParams::new(payload_bytes, copies, sample_copies, paldc.t)?;
        let p = RaldcParams {
            paldc,
            star,
            hardness,
        };
        let v = p.violations();
        if v.is_empty() {
            Ok(p)
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = self.paldc.violations();
        if self.hardness == 0 {
            v.push("puzzle hardness must be at least 1".into());
        }
        if !self.star.copy_bits().is_multiple_of(self.paldc.t) {
            v.push("repetition copy width must be a multiple of t".into());
        }
        v
    }

    /// Total codeword length |y_p| + n_star.
    pub fn n(&self) -> usize {
        self.paldc.m() + self.star.n_star()
    }

    pub fn k(&self) -> usize {
        self.paldc.k
    }
}

/// Encodes: draw a seed, derive the key, seal the seed in a puzzle, append
/// the repetition-coded puzzle to the private-key codeword.
pub fn raldc_enc<R: Rng>(x: &BitString, p: &RaldcParams, rng: &mut R) -> Result<BitString> {
    let mut seed: Seed = [0u8; 32];
    rng.fill_bytes(&mut seed);
    raldc_enc_with_seed(x, p, seed)
}

pub fn raldc_enc_with_seed(x: &BitString, p: &RaldcParams, seed: Seed) -> Result<BitString> {
    let sk = paldc_gen(&p.paldc, seed)?;
    let y_p = paldc_enc(&sk, x, &p.paldc)?;
    let puzzle = puzz_gen(&seed, p.hardness)?;
    let mut payload = puzzle.to_bytes();
    payload.resize(p.star.payload_bytes, 0);
    let y_star = ldcstar_encode(&payload, &p.star)?;
    Ok(BitString::concat(&[&y_p, &y_star]))
}

/// Decode diagnostics: how the queries split across the two regions.
#[derive(Debug, Clone, Default)]
pub struct RaldcStats {
    pub queries_payload_region: u64,
    pub queries_puzzle_region: u64,
}

fn raldc_dec_with_fetch(
    p: &RaldcParams,
    l: usize,
    r: usize,
    fetch: &mut dyn FnMut(usize, usize) -> Result<BitString>,
    rng: &mut dyn RngCore,
) -> Result<BitString> {
    let m = p.paldc.m();
    let payload = ldcstar_decode_with_fetch(&p.star, m, p.paldc.t, fetch, rng)?;
    let puzzle = Puzzle::from_bytes(&payload[..PUZZLE_BYTES])?;
    let seed = puzz_solve(&puzzle)?;
    let sk = paldc_gen(&p.paldc, seed)?;
    paldc_dec_with_fetch(&sk, &p.paldc, l, r, fetch)
}

/// Full decode: recover the puzzle, solve it, rebuild the key, then decode
/// the requested interval out of the payload region.
pub fn raldc_dec(
    oracle: &mut CorruptedOracle,
    l: usize,
    r: usize,
    p: &RaldcParams,
    rng: &mut dyn RngCore,
) -> Result<BitString> {
    raldc_dec_with_stats(oracle, l, r, p, rng).map(|(bits, _)| bits)
}

pub fn raldc_dec_with_stats(
    oracle: &mut CorruptedOracle,
    l: usize,
    r: usize,
    p: &RaldcParams,
    rng: &mut dyn RngCore,
) -> Result<(BitString, RaldcStats)> {
    let mark = oracle.log().ranges().len();
    let out = raldc_dec_with_fetch(p, l, r, &mut |a, b| oracle.read_range(a, b), rng)?;
    let m = p.paldc.m();
    let mut stats = RaldcStats::default();
    for &(a, b) in &oracle.log().ranges()[mark..] {
        let len = (b - a + 1) as u64;
        if b <= m {
            stats.queries_payload_region += len;
        } else {
            stats.queries_puzzle_region += len;
        }
    }
    Ok((out, stats))
}

/// The resource-bounded code as a t-consecutive interval decoder, for the
/// insdel composition.
pub struct RaldcDecoder<'a> {
    pub params: &'a RaldcParams,
}

impl IntervalDecoder for RaldcDecoder<'_> {
    fn interval_len(&self) -> usize {
        self.params.paldc.t
    }

    fn hamming_len(&self) -> usize {
        self.params.n()
    }

    fn message_len(&self) -> usize {
        self.params.k()
    }

    fn tolerance(&self) -> f64 {
        self.params.paldc.ecc.tolerance()
    }

    fn decode_with(
        &self,
        l: usize,
        r: usize,
        fetch: &mut dyn FnMut(usize, usize) -> Result<BitString>,
        rng: &mut dyn RngCore,
    ) -> Result<BitString> {
        raldc_dec_with_fetch(self.params, l, r, fetch, rng)
    }
}

/// The composed insdel construction: compile the whole concatenated
/// codeword (payload and puzzle regions alike) into insdel blocks.
#[derive(Debug, Clone, Copy)]
pub struct InsdelRaldc {
    pub raldc: RaldcParams,
    pub compiler: CompilerParams,
}

impl InsdelRaldc {
    pub fn new(raldc: RaldcParams, compiler: CompilerParams) -> Result<InsdelRaldc> {
        let code = InsdelRaldc { raldc, compiler };
        let v = code.violations();
        if v.is_empty() {
            Ok(code)
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = self.raldc.violations();
        v.extend(self.compiler.violations(Some(self.raldc.n())));
        if self.compiler.t != self.raldc.paldc.t {
            v.push(format!(
                "compiler t = {} must equal the sub-block size {}",
                self.compiler.t, self.raldc.paldc.t
            ));
        }
        v
    }

    pub fn n(&self) -> usize {
        self.compiler.blocks(self.raldc.n()) * self.compiler.blk_len()
    }

    pub fn enc<R: Rng>(&self, x: &BitString, rng: &mut R) -> Result<BitString> {
        let y = raldc_enc(x, &self.raldc, rng)?;
        enc_compile(&y, &self.compiler)
    }

    pub fn enc_with_seed(&self, x: &BitString, seed: Seed) -> Result<BitString> {
        let y = raldc_enc_with_seed(x, &self.raldc, seed)?;
        enc_compile(&y, &self.compiler)
    }

    pub fn dec(
        &self,
        oracle: &mut CorruptedOracle,
        l: usize,
        r: usize,
        rng: &mut ChaCha20Rng,
    ) -> Result<BitString> {
        self.dec_with_stats(oracle, l, r, rng).map(|(bits, _)| bits)
    }

    pub fn dec_with_stats(
        &self,
        oracle: &mut CorruptedOracle,
        l: usize,
        r: usize,
        rng: &mut ChaCha20Rng,
    ) -> Result<(BitString, CompiledStats)> {
        let inner = RaldcDecoder {
            params: &self.raldc,
        };
        compiled_dec_with_stats(oracle, l, r, &inner, &self.compiler, rng)
    }
}
