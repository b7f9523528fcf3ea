//! Hamming-to-insdel compiler.
//!
//! Encoding splits the Hamming codeword into tau-bit blocks and wraps each,
//! together with its index, in the buffered insdel block code. Decoding
//! locates whole intervals of blocks inside the corrupted stream with a
//! noisy binary search: each iteration samples positions from the middle
//! segment of the search range, decodes the block index under each sample,
//! and cuts the front or the back of the range depending on how the median
//! index compares to the target interval. Once the range is linear in the
//! interval size, the remaining window is read outright and every candidate
//! body in it is decoded locally.
//!
//! A decoder whose reads are disjoint t-bit intervals of the Hamming
//! codeword (see [`IntervalDecoder`]) can then be run unchanged against the
//! insdel oracle: every t-interval it asks for is served out of two block
//! interval recoveries, memoized per decode call.

use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bits::BitString;
use crate::block_code::{insdel_block_encode, scan_bodies_slice, InsdelBlockParams};
use crate::error::{Error, Result};
use crate::oracle::CorruptedOracle;
use crate::paldc::{paldc_dec_with_fetch, PaldcParams, SecretKey};

#[derive(Debug, Clone, Copy)]
pub struct CompilerParams {
    pub block: InsdelBlockParams,
    /// Per-block edit tolerance fraction (of tau).
    pub gamma: f64,
    /// Bad-block density tolerance inside good intervals.
    pub theta: f64,
    /// Samples per search iteration: max(n_floor, ceil(c_n * ln^2 n)).
    pub c_n: f64,
    pub n_floor: usize,
    /// Block-decode window length in blocks.
    pub c_w: usize,
    /// Consecutive-interval size of the inner Hamming decoder, in bits.
    pub t: usize,
}

impl CompilerParams {
    /// Defaults: gamma = 0.1, theta = 0.04, c_n = 1 with floor 9, c_w = 2.
    ///
    /// The spread-out t the asymptotic analysis wants (t proportional to
    /// tau * log^3 n) exceeds every admissible sub-block size at desk scale,
    /// so t is an explicit knob here.
    pub fn new(tau: usize, t: usize) -> Result<CompilerParams> {
        let p = CompilerParams {
            block: InsdelBlockParams::with_options(tau, 0.25, 8, 0.1)?,
            gamma: 0.1,
            theta: 0.04,
            c_n: 1.0,
            n_floor: 9,
            c_w: 2,
            t,
        };
        let v = p.violations(None);
        if v.is_empty() {
            Ok(p)
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    /// Sets the edit tolerance on both the search parameters and the block
    /// decoder's verification threshold.
    pub fn set_gamma(&mut self, gamma: f64) {
        self.gamma = gamma;
        self.block.set_verify_gamma(gamma);
    }

    pub fn tau(&self) -> usize {
        self.block.tau()
    }

    pub fn blk_len(&self) -> usize {
        self.block.blk_len()
    }

    /// Per-block blowup beta = blk_len / tau.
    pub fn beta(&self) -> f64 {
        self.block.beta()
    }

    /// Cut fraction of the noisy binary search.
    pub fn rho(&self) -> f64 {
        let beta = self.beta();
        let a = 0.25 * (beta - self.gamma) / (beta + self.gamma);
        let b = 1.0 - 0.75 * (beta + self.gamma) / (beta - self.gamma);
        a.min(b)
    }

    /// Stop constant of the search loop: 36 * (beta + gamma). The iteration
    /// analysis needs the search range to stay at least this many
    /// (b - a + 1) * tau wide, so the larger constant (beta + gamma, not
    /// beta - gamma) keeps it applicable at every executed iteration.
    pub fn c_stop(&self) -> f64 {
        36.0 * (self.beta() + self.gamma)
    }

    /// Search-loop exit threshold for an interval of `span` blocks.
    pub fn stop_threshold(&self, span: usize) -> usize {
        (self.c_stop() * span as f64 * self.tau() as f64).ceil() as usize
    }

    pub fn samples_per_iter(&self, n_tilde: usize) -> usize {
        let ln = (n_tilde.max(2) as f64).ln();
        self.n_floor.max((self.c_n * ln * ln).ceil() as usize)
    }

    /// Blocks per recovery interval.
    pub fn t_prime(&self) -> usize {
        self.t / self.tau()
    }

    /// Number of blocks for an m-bit Hamming codeword.
    pub fn blocks(&self, m: usize) -> usize {
        m / self.tau()
    }

    /// Working edit budget delta = h_delta * phi * gamma / (8 beta (1 + 1/theta))
    /// given the inner decoder's Hamming tolerance.
    pub fn delta_work(&self, h_delta: f64) -> f64 {
        h_delta * self.block.pad_rate() * self.gamma
            / (8.0 * self.beta() * (1.0 + 1.0 / self.theta))
    }

    /// Hard ceiling on search iterations: the range shrinks by (1 - rho)
    /// per cut.
    pub fn max_iterations(&self, n_tilde: usize) -> usize {
        ((n_tilde.max(2) as f64).ln() / -(1.0 - self.rho()).ln()).ceil() as usize + 1
    }

    /// Per-configuration constant C such that every recovery of `span`
    /// blocks uses at most C * (span * tau + tau * log2(n)^3) queries.
    pub fn budget_constant(&self, n_tilde: usize) -> f64 {
        let log2n = (n_tilde.max(2) as f64).log2();
        let search = self.max_iterations(n_tilde) as f64
            * self.samples_per_iter(n_tilde) as f64
            * self.c_w as f64
            * self.beta();
        search / (log2n * log2n * log2n) + self.c_stop()
    }

    /// The query budget for one recovery call.
    pub fn query_budget(&self, n_tilde: usize, span: usize) -> u64 {
        let log2n = (n_tilde.max(2) as f64).log2();
        let tau = self.tau() as f64;
        (self.budget_constant(n_tilde) * (span as f64 * tau + tau * log2n.powi(3))).ceil() as u64
    }

    /// Every violated constraint; `m` (the Hamming codeword length) is
    /// checked when known.
    // Negated float comparisons are load-bearing: NaN must register as a
    // violation.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn violations(&self, m: Option<usize>) -> Vec<String> {
        let mut v = Vec::new();
        let beta = self.beta();
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            v.push(format!("gamma = {} must lie in (0,1)", self.gamma));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            v.push(format!("theta = {} must lie in (0,1)", self.theta));
        }
        let ratio = (beta + self.gamma) / (beta - self.gamma);
        if !(ratio < 4.0 / 3.0) {
            v.push(format!(
                "(beta+gamma)/(beta-gamma) = {ratio:.4} must be < 4/3"
            ));
        }
        let median_margin = 2.0 * ((1.0 + 1.0 / beta) * self.gamma + self.theta);
        if !(median_margin < 1.0 / 3.0) {
            v.push(format!(
                "2((1+1/beta)gamma + theta) = {median_margin:.4} must be < 1/3"
            ));
        }
        if self.n_floor < 9 {
            v.push(format!("sample floor {} must be at least 9", self.n_floor));
        }
        if !(self.c_n > 0.0) {
            v.push("c_n must be positive".into());
        }
        if self.c_w < 1 {
            v.push("c_w must be at least 1".into());
        }
        if self.t == 0 || !self.t.is_multiple_of(self.tau()) {
            v.push(format!("tau = {} must divide t = {}", self.tau(), self.t));
        }
        if self.block.buf_len() < self.block.lambda0() {
            v.push(format!(
                "buffer length {} shorter than scan window {}; raise tau or pad rate",
                self.block.buf_len(),
                self.block.lambda0()
            ));
        }
        if let Some(m) = m {
            if m == 0 || m % self.tau() != 0 {
                v.push(format!(
                    "tau = {} must divide codeword length {m}",
                    self.tau()
                ));
            }
        }
        v
    }
}

/// Wraps an m-bit Hamming codeword into B = m/tau insdel blocks.
pub fn enc_compile(y: &BitString, p: &CompilerParams) -> Result<BitString> {
    let tau = p.tau();
    if y.is_empty() || !y.len().is_multiple_of(tau) {
        return Err(Error::InvalidInput(format!(
            "codeword length {} not a positive multiple of tau = {tau}",
            y.len()
        )));
    }
    let blocks = y.len() / tau;
    if blocks as u64 > p.block.max_index() {
        return Err(Error::InvalidInput(
            "too many blocks for the index width".into(),
        ));
    }
    let mut out = BitString::new();
    for j in 1..=blocks {
        out.extend(&insdel_block_encode(j as u64, &y.block(j, tau), &p.block)?);
    }
    Ok(out)
}

/// Reads a window of `c_w * blk_len` bits centered at `i` (clipped) and
/// decodes the block body nearest the center. Soft-fails to `None`.
pub fn block_decode_at(oracle: &mut CorruptedOracle, i: usize, p: &CompilerParams) -> Option<u64> {
    let half = p.c_w * p.blk_len() / 2;
    let l = i.saturating_sub(half).max(1);
    let r = (i + half - 1).min(oracle.len());
    let window = oracle.read_range_slice(l, r).ok()?;
    crate::block_code::insdel_block_decode_slice(window, &p.block).map(|(j, _)| j)
}

/// Recovers the payload of block `q` out of a previously read window.
/// Operates entirely on the hardcoded window: zero oracle queries. When
/// several bodies claim the same index, the first in scan order wins.
pub fn sim_recover_block(window: &BitString, q: u64, p: &CompilerParams) -> Option<BitString> {
    scan_bodies_slice(window.as_slice(), &p.block)
        .into_iter()
        .find(|b| b.index == q)
        .map(|b| b.payload)
}

/// Diagnostics of one `recover_blocks` call.
#[derive(Debug, Clone, Default)]
pub struct RecoverStats {
    pub iterations: usize,
    pub queries: u64,
    /// Search range [l, r) at entry to every iteration, plus the final one.
    pub trace: Vec<(usize, usize)>,
    /// Per iteration: every sampled position with its decoded block index,
    /// and whether the cut removed the left segment.
    pub samples: Vec<IterationSample>,
    /// Bodies that decoded to an index already claimed inside the window.
    pub duplicate_indices: usize,
    pub final_window: (usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct IterationSample {
    pub middle: (usize, usize),
    pub decoded: Vec<(usize, Option<u64>)>,
    pub cut_left: bool,
}

/// Payloads recovered for the block interval [a, b].
#[derive(Debug, Clone)]
pub struct RecoveredBlocks {
    pub a: usize,
    pub b: usize,
    /// One entry per block; None marks an unrecoverable block.
    pub payloads: Vec<Option<BitString>>,
    pub stats: RecoverStats,
}

/// Noisy binary search for the images of blocks [a, b], followed by local
/// decoding of the final window.
///
/// `l` and `r` delimit the initial half-open search range, normally
/// `(1, n+1)`. The query budget C * ((b-a+1) tau + tau log2(n)^3) is
/// asserted on every call.
pub fn recover_blocks<R: Rng>(
    oracle: &mut CorruptedOracle,
    l: usize,
    r: usize,
    a: usize,
    b: usize,
    p: &CompilerParams,
    rng: &mut R,
) -> Result<RecoveredBlocks> {
    let n_tilde = oracle.len();
    if !(1 <= l && l < r && r <= n_tilde + 1) {
        return Err(Error::InvalidInput(format!("bad search range [{l},{r})")));
    }
    if !(1 <= a && a <= b) {
        return Err(Error::InvalidInput(format!("bad block interval [{a},{b}]")));
    }
    let queries_before = oracle.queries_used();
    let span = b - a + 1;
    let stop = p.stop_threshold(span);
    let n_samples = p.samples_per_iter(n_tilde);
    let rho = p.rho();
    let max_iters = p.max_iterations(n_tilde);

    let (mut l, mut r) = (l, r);
    let mut stats = RecoverStats::default();
    stats.trace.push((l, r));
    while r - l > stop {
        let width = r - l;
        let cut = ((rho * width as f64).floor() as usize).max(1);
        let m1 = l + cut;
        let m2 = r - cut;
        debug_assert!(m1 < m2);

        let mut decoded: Vec<(usize, Option<u64>)> = Vec::with_capacity(n_samples);
        let mut indices: Vec<u64> = Vec::with_capacity(n_samples);
        for _ in 0..n_samples {
            let i = rng.gen_range(m1..m2);
            let hit = block_decode_at(oracle, i, p);
            decoded.push((i, hit));
            if let Some(j) = hit {
                indices.push(j);
            }
        }
        indices.sort_unstable();
        // Lower median of the non-bottom samples; if every sample failed,
        // cut the right segment.
        let cut_left = match indices.len() {
            0 => false,
            len => {
                let j_med = indices[len.div_ceil(2) - 1];
                (a as u64) > j_med
            }
        };
        if cut_left {
            l = m1;
        } else {
            r = m2;
        }
        stats.samples.push(IterationSample {
            middle: (m1, m2),
            decoded,
            cut_left,
        });
        stats.iterations += 1;
        stats.trace.push((l, r));
        debug_assert!(r - l < width, "search range failed to shrink");
        if stats.iterations > max_iters {
            return Err(Error::DecodeFailure("search iteration cap exceeded".into()));
        }
    }

    let window_end = (r - 1).min(n_tilde);
    let window = oracle.read_range_slice(l, window_end)?;
    stats.final_window = (l, window_end);

    // One scan serves every q in [a, b]; first body per index wins.
    let bodies = scan_bodies_slice(window, &p.block);
    let mut first: HashMap<u64, &BitString> = HashMap::new();
    for body in &bodies {
        if let std::collections::hash_map::Entry::Vacant(e) = first.entry(body.index) {
            e.insert(&body.payload);
        } else {
            stats.duplicate_indices += 1;
        }
    }
    let payloads: Vec<Option<BitString>> = (a..=b)
        .map(|q| first.get(&(q as u64)).map(|&p| p.clone()))
        .collect();

    stats.queries = oracle.queries_used() - queries_before;
    let budget = p.query_budget(n_tilde, span);
    assert!(
        stats.queries <= budget,
        "recover_blocks query budget exceeded: {} > {budget}",
        stats.queries
    );
    Ok(RecoveredBlocks {
        a,
        b,
        payloads,
        stats,
    })
}

/// A Hamming interval decoder whose oracle reads are disjoint t-bit
/// contiguous ranges, expressed against an abstract fetch so the compiled
/// decoder can serve the reads out of recovered blocks.
pub trait IntervalDecoder {
    /// The consecutive-interval size t.
    fn interval_len(&self) -> usize;
    /// Clean Hamming codeword length m.
    fn hamming_len(&self) -> usize;
    fn message_len(&self) -> usize;
    /// Hamming tolerance, for the delta_work budget.
    fn tolerance(&self) -> f64;
    fn decode_with(
        &self,
        l: usize,
        r: usize,
        fetch: &mut dyn FnMut(usize, usize) -> Result<BitString>,
        rng: &mut dyn RngCore,
    ) -> Result<BitString>;
}

/// The private-key Hamming decoder as an interval decoder.
pub struct PaldcDecoder<'a> {
    pub sk: &'a SecretKey,
    pub params: &'a PaldcParams,
}

impl IntervalDecoder for PaldcDecoder<'_> {
    fn interval_len(&self) -> usize {
        self.params.t
    }

    fn hamming_len(&self) -> usize {
        self.params.m()
    }

    fn message_len(&self) -> usize {
        self.params.k
    }

    fn tolerance(&self) -> f64 {
        self.params.ecc.tolerance()
    }

    fn decode_with(
        &self,
        l: usize,
        r: usize,
        fetch: &mut dyn FnMut(usize, usize) -> Result<BitString>,
        _rng: &mut dyn RngCore,
    ) -> Result<BitString> {
        paldc_dec_with_fetch(self.sk, self.params, l, r, fetch)
    }
}

/// Diagnostics of one compiled decode.
#[derive(Debug, Clone, Default)]
pub struct CompiledStats {
    /// Block intervals passed to recover_blocks, in call order (memoized
    /// calls appear once).
    pub recover_calls: Vec<(usize, usize)>,
    pub recover_stats: Vec<RecoverStats>,
    pub queries: u64,
}

/// Runs the inner t-consecutive decoder against the insdel oracle: every
/// t-interval it fetches is served by recovering the two t'-block intervals
/// around it, memoized for the duration of this call.
pub fn compiled_dec_with_stats<D: IntervalDecoder>(
    oracle: &mut CorruptedOracle,
    l: usize,
    r: usize,
    inner: &D,
    p: &CompilerParams,
    rng: &mut ChaCha20Rng,
) -> Result<(BitString, CompiledStats)> {
    let t = inner.interval_len();
    if t != p.t {
        return Err(Error::InvalidParams(vec![format!(
            "inner decoder reads {t}-bit intervals but compiler is configured for t = {}",
            p.t
        )]));
    }
    let m = inner.hamming_len();
    let v = p.violations(Some(m));
    if !v.is_empty() {
        return Err(Error::InvalidParams(v));
    }
    let t_prime = p.t_prime();
    let blocks = p.blocks(m);
    let n_tilde = oracle.len();
    let queries_before = oracle.queries_used();

    let mut search_rng = ChaCha20Rng::from_seed(rng.gen());
    let mut inner_rng = ChaCha20Rng::from_seed(rng.gen());

    let mut cache: HashMap<(usize, usize), RecoveredBlocks> = HashMap::new();
    let mut stats = CompiledStats::default();

    let output = {
        let mut fetch = |u: usize, v: usize| -> Result<BitString> {
            if u < 1 || v != u + t - 1 || v > m || !(u - 1).is_multiple_of(t) {
                return Err(Error::InvalidInput(format!(
                    "inner decoder requested non-t-aligned range [{u},{v}]"
                )));
            }
            let seg = (u - 1) / t + 1;
            // Recover [(seg-1)t'+1, seg t'] and the following interval, as
            // the analysis prescribes; identical intervals are computed
            // once per decode.
            let wanted = [(seg - 1) * t_prime + 1, seg * t_prime + 1].map(|a0| {
                let b0 = (a0 + t_prime - 1).min(blocks);
                (a0, b0)
            });
            for (a0, b0) in wanted {
                if a0 > blocks || cache.contains_key(&(a0, b0)) {
                    continue;
                }
                match recover_blocks(oracle, 1, n_tilde + 1, a0, b0, p, &mut search_rng) {
                    Ok(rec) => {
                        stats.recover_calls.push((a0, b0));
                        stats.recover_stats.push(rec.stats.clone());
                        cache.insert((a0, b0), rec);
                    }
                    Err(e) => return Err(e),
                }
            }
            let rec = &cache[&wanted[0]];
            let tau = p.tau();
            let mut out = BitString::new();
            for g in (seg - 1) * t_prime + 1..=(seg * t_prime).min(blocks) {
                match &rec.payloads[g - rec.a] {
                    Some(payload) => out.extend(payload),
                    None => return Err(Error::DecodeFailure(format!("block {g} unrecoverable"))),
                }
            }
            debug_assert_eq!(
                out.len(),
                ((seg * t_prime).min(blocks) - (seg - 1) * t_prime) * tau
            );
            if out.len() != t {
                return Err(Error::DecodeFailure(
                    "clipped interval at codeword end".into(),
                ));
            }
            Ok(out)
        };
        inner.decode_with(l, r, &mut fetch, &mut inner_rng)
    };
    stats.queries = oracle.queries_used() - queries_before;
    output.map(|bits| (bits, stats))
}

pub fn compiled_dec<D: IntervalDecoder>(
    oracle: &mut CorruptedOracle,
    l: usize,
    r: usize,
    inner: &D,
    p: &CompilerParams,
    rng: &mut ChaCha20Rng,
) -> Result<BitString> {
    compiled_dec_with_stats(oracle, l, r, inner, p, rng).map(|(bits, _)| bits)
}

/// The composed private-key insdel code: private-key Hamming encoding, then
/// the block compiler; decoding runs the Hamming decoder through the
/// compiled fetch path.
#[derive(Debug, Clone, Copy)]
pub struct InsdelPaldc {
    pub paldc: PaldcParams,
    pub compiler: CompilerParams,
}

impl InsdelPaldc {
    pub fn new(paldc: PaldcParams, compiler: CompilerParams) -> Result<InsdelPaldc> {
        let code = InsdelPaldc { paldc, compiler };
        let v = code.violations();
        if v.is_empty() {
            Ok(code)
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = self.paldc.violations();
        v.extend(self.compiler.violations(Some(self.paldc.m())));
        if self.compiler.t != self.paldc.t {
            v.push(format!(
                "compiler t = {} must equal the sub-block size {}",
                self.compiler.t, self.paldc.t
            ));
        }
        v
    }

    /// Clean insdel codeword length.
    pub fn n(&self) -> usize {
        self.compiler.blocks(self.paldc.m()) * self.compiler.blk_len()
    }

    pub fn rate(&self) -> f64 {
        self.paldc.k as f64 / self.n() as f64
    }

    pub fn gen(&self, seed: crate::seed::Seed) -> Result<SecretKey> {
        crate::paldc::paldc_gen(&self.paldc, seed)
    }

    pub fn enc(&self, sk: &SecretKey, x: &BitString) -> Result<BitString> {
        let y = crate::paldc::paldc_enc(sk, x, &self.paldc)?;
        enc_compile(&y, &self.compiler)
    }

    pub fn dec(
        &self,
        sk: &SecretKey,
        oracle: &mut CorruptedOracle,
        l: usize,
        r: usize,
        rng: &mut ChaCha20Rng,
    ) -> Result<BitString> {
        let inner = PaldcDecoder {
            sk,
            params: &self.paldc,
        };
        compiled_dec(oracle, l, r, &inner, &self.compiler, rng)
    }

    pub fn dec_with_stats(
        &self,
        sk: &SecretKey,
        oracle: &mut CorruptedOracle,
        l: usize,
        r: usize,
        rng: &mut ChaCha20Rng,
    ) -> Result<(BitString, CompiledStats)> {
        let inner = PaldcDecoder {
            sk,
            params: &self.paldc,
        };
        compiled_dec_with_stats(oracle, l, r, &inner, &self.compiler, rng)
    }

    /// Working edit budget for experiments, from the inner tolerance.
    pub fn delta_work(&self) -> f64 {
        self.compiler.delta_work(self.paldc.ecc.tolerance())
    }
}

/// Desk-scale default: tau = 64, t = 128, inner (A, a) = (128, 64).
pub fn default_insdel_paldc(k: usize) -> Result<InsdelPaldc> {
    let ecc = crate::ecc::EccParams::new(128, 64)?;
    let paldc = PaldcParams::new(k, ecc, 128)?;
    let compiler = CompilerParams::new(64, 128)?;
    InsdelPaldc::new(paldc, compiler)
}
