//! Buffered insertion/deletion block code.
//!
//! Each block carries a 32-bit index and a tau-bit payload. The body is a
//! Manchester-modulated Reed-Solomon codeword, so every small window of the
//! body has relative Hamming weight near 1/2, while the flanking buffers are
//! all-zero. That weight gap is what lets a decoder locate block boundaries
//! inside a corrupted stream:
//!
//!   block = 0^buf  ||  frames(rs(index || payload))  ||  0^buf
//!
//! Each symbol is framed as eight Manchester pairs followed by the marker
//! `11`. A Manchester pair is never `11`, so a stream that drifts by a whole
//! pair (which plain Manchester cannot detect locally: shifted pairs are
//! still valid pairs) trips the marker check within one frame. That makes
//! the demodulator's realignment decisions unambiguous under insertions and
//! deletions.
//!
//! Decoding a window is a four-stage pipeline: (1) a threshold scan over
//! lambda0-sized windows locates low-weight runs and the candidate bodies
//! between them, (2) a resynchronizing frame demodulation turns each
//! candidate back into symbols, with invalid frames becoming erasures and a
//! local realignment attempt after each, (3) a Reed-Solomon
//! errors-and-erasures decode, and (4) verification by re-encoding and
//! checking indel distance against the candidate via banded DP.

use crate::align::indel_distance_semiglobal;
use crate::bits::BitString;
use crate::ecc::{self, EccParams, SYMBOL_BITS};
use crate::error::{Error, Result};

/// Channel bits per framed symbol: eight Manchester pairs plus the `11`
/// frame marker.
const FRAME_BITS: usize = 2 * SYMBOL_BITS + 2;

#[derive(Debug, Clone, Copy)]
pub struct InsdelBlockParams {
    tau: usize,
    idx_bits: usize,
    pad_rate: f64,
    lambda0: usize,
    w_lo: f64,
    buffer_thresh: f64,
    blowup: usize,
    verify_gamma: f64,
    buf_len: usize,
    ecc: EccParams,
}

impl InsdelBlockParams {
    /// Defaults: 32-bit indices, padding rate 1/4, blowup 8, lambda0 = 16,
    /// w_lo = 1/3, buffer threshold 1/4.
    pub fn new(tau: usize) -> Result<InsdelBlockParams> {
        Self::with_options(tau, 0.25, 8, 0.1)
    }

    pub fn with_options(
        tau: usize,
        pad_rate: f64,
        blowup: usize,
        verify_gamma: f64,
    ) -> Result<InsdelBlockParams> {
        let idx_bits = 32usize;
        if !(0.0..1.0).contains(&pad_rate) || pad_rate <= 0.0 {
            return Err(Error::InvalidInput("pad rate must lie in (0,1)".into()));
        }
        if !(0.0..1.0).contains(&verify_gamma) || verify_gamma <= 0.0 {
            return Err(Error::InvalidInput("verify gamma must lie in (0,1)".into()));
        }
        let buf_len = (pad_rate * tau as f64).ceil() as usize;
        if !(idx_bits + tau).is_multiple_of(SYMBOL_BITS) {
            return Err(Error::InvalidInput(format!(
                "index plus payload bits ({}) must fill whole symbols",
                idx_bits + tau
            )));
        }
        let body_budget = blowup
            .checked_mul(tau)
            .and_then(|b| b.checked_sub(2 * buf_len))
            .ok_or_else(|| Error::InvalidInput("blowup * tau too small for buffers".into()))?;
        // Whatever the frame size does not divide goes into the trailing
        // buffer, keeping blk_len = blowup * tau exactly.
        let body_symbols = body_budget / FRAME_BITS;
        let data_symbols = (idx_bits + tau) / SYMBOL_BITS;
        if body_symbols < data_symbols + 2 {
            return Err(Error::InvalidInput(format!(
                "body holds {body_symbols} symbols but needs {data_symbols} data symbols \
                 plus parity; increase tau or blowup"
            )));
        }
        let ecc = EccParams::new(body_symbols, data_symbols)?;
        Ok(InsdelBlockParams {
            tau,
            idx_bits,
            pad_rate,
            lambda0: 16,
            w_lo: 1.0 / 3.0,
            buffer_thresh: 0.25,
            blowup,
            verify_gamma,
            buf_len,
            ecc,
        })
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn idx_bits(&self) -> usize {
        self.idx_bits
    }

    pub fn pad_rate(&self) -> f64 {
        self.pad_rate
    }

    pub fn lambda0(&self) -> usize {
        self.lambda0
    }

    pub fn w_lo(&self) -> f64 {
        self.w_lo
    }

    pub fn buffer_thresh(&self) -> f64 {
        self.buffer_thresh
    }

    pub fn verify_gamma(&self) -> f64 {
        self.verify_gamma
    }

    pub fn set_verify_gamma(&mut self, gamma: f64) {
        self.verify_gamma = gamma;
    }

    pub fn buf_len(&self) -> usize {
        self.buf_len
    }

    pub fn blowup(&self) -> usize {
        self.blowup
    }

    pub fn body_len(&self) -> usize {
        self.ecc.code_len * FRAME_BITS
    }

    /// Always exactly blowup * tau; the trailing buffer absorbs the frame
    /// remainder.
    pub fn blk_len(&self) -> usize {
        self.blowup * self.tau
    }

    fn trailing_buf_len(&self) -> usize {
        self.blk_len() - self.buf_len - self.body_len()
    }

    /// Per-block blowup beta = blk_len / tau.
    pub fn beta(&self) -> f64 {
        self.blk_len() as f64 / self.tau as f64
    }

    pub fn body_ecc(&self) -> &EccParams {
        &self.ecc
    }

    pub fn max_index(&self) -> u64 {
        (1u64 << self.idx_bits) - 1
    }
}

/// True iff every contiguous `lambda0`-window of `body` has relative weight
/// >= `w_lo`.
pub fn window_weight_check(body: &BitString, lambda0: usize, w_lo: f64) -> Result<bool> {
    if lambda0 == 0 || lambda0 > body.len() {
        return Err(Error::InvalidInput(format!(
            "window {lambda0} does not fit body of {} bits",
            body.len()
        )));
    }
    let bits = body.as_slice();
    let mut weight: usize = bits[..lambda0].iter().map(|&b| b as usize).sum();
    let min_weight = (w_lo * lambda0 as f64 - 1e-9).ceil() as usize;
    if weight < min_weight {
        return Ok(false);
    }
    for i in lambda0..bits.len() {
        weight += bits[i] as usize;
        weight -= bits[i - lambda0] as usize;
        if weight < min_weight {
            return Ok(false);
        }
    }
    Ok(true)
}

fn modulate_frames(symbols: &[u8]) -> BitString {
    let mut out = BitString::new();
    for &sym in symbols {
        for k in 0..SYMBOL_BITS {
            let b = (sym >> k) & 1;
            out.push(b);
            out.push(b ^ 1);
        }
        out.push(1);
        out.push(1);
    }
    out
}

/// The Manchester body for `(index, payload)`, without buffers.
pub fn encode_body(index: u64, payload: &BitString, p: &InsdelBlockParams) -> Result<BitString> {
    if index == 0 || index > p.max_index() {
        return Err(Error::InvalidInput(format!(
            "block index {index} out of range"
        )));
    }
    if payload.len() != p.tau {
        return Err(Error::InvalidInput(format!(
            "payload has {} bits, expected tau = {}",
            payload.len(),
            p.tau
        )));
    }
    let mut data = BitString::new();
    data.push_uint(index, p.idx_bits);
    data.extend(payload);
    let code = ecc::encode_symbols(&ecc::bits_to_symbols(&data), &p.ecc)?;
    Ok(modulate_frames(&code))
}

/// Full block: buffer, body, buffer. Always exactly `blk_len()` bits.
pub fn insdel_block_encode(
    index: u64,
    payload: &BitString,
    p: &InsdelBlockParams,
) -> Result<BitString> {
    let body = encode_body(index, payload, p)?;
    let buf = BitString::zeros(p.buf_len);
    let tail = BitString::zeros(p.trailing_buf_len());
    Ok(BitString::concat(&[&buf, &body, &tail]))
}

/// A body candidate decoded out of a window.
#[derive(Debug, Clone)]
pub struct ScannedBody {
    /// 0-based half-open span of the candidate inside the window.
    pub start: usize,
    pub end: usize,
    pub index: u64,
    pub payload: BitString,
}

/// Reads one frame at `pos`. Returns the symbol and the number of defects
/// (invalid Manchester pairs plus marker bits that are not 1).
fn read_frame(bits: &[u8], pos: usize) -> Option<(u8, usize)> {
    if pos + FRAME_BITS > bits.len() {
        return None;
    }
    let mut sym = 0u8;
    let mut defects = 0usize;
    for k in 0..SYMBOL_BITS {
        let a = bits[pos + 2 * k];
        let b = bits[pos + 2 * k + 1];
        if a == b {
            defects += 1;
        } else {
            sym |= a << k;
        }
    }
    if bits[pos + FRAME_BITS - 2] != 1 {
        defects += 1;
    }
    if bits[pos + FRAME_BITS - 1] != 1 {
        defects += 1;
    }
    Some((sym, defects))
}

/// Number of defect-free frames among the next `max_frames` at `start`.
fn frame_score(bits: &[u8], start: usize, max_frames: usize) -> usize {
    let mut clean = 0;
    let mut pos = start;
    for _ in 0..max_frames {
        if let Some((_, 0)) = read_frame(bits, pos) {
            clean += 1
        }
        pos += FRAME_BITS;
    }
    clean
}

/// Resynchronizing frame demodulation from a given starting phase: returns
/// `n_sym` symbols plus the 0-based positions of erased symbols. A defective
/// frame becomes an erasure, followed by a local realignment attempt over
/// shifts of up to two bits.
fn demodulate(bits: &[u8], phase: usize, n_sym: usize) -> (Vec<u8>, Vec<usize>) {
    let mut symbols = vec![0u8; n_sym];
    let mut erasures = Vec::new();
    let mut pos = phase;

    for (s, slot) in symbols.iter_mut().enumerate() {
        match read_frame(bits, pos) {
            Some((sym, 0)) => {
                *slot = sym;
                pos += FRAME_BITS;
            }
            frame => {
                erasures.push(s);
                if frame.is_none() {
                    // Ran off the end; everything further is erased too.
                    continue;
                }
                // Realign: pick the shift whose following frames look clean.
                let base = pos + FRAME_BITS;
                let mut best_shift = 0isize;
                let mut best = 0usize;
                for shift in [0isize, -1, 1, -2, 2] {
                    let cand = base as isize + shift;
                    if cand < 0 {
                        continue;
                    }
                    let score = frame_score(bits, cand as usize, 4);
                    if score > best {
                        best = score;
                        best_shift = shift;
                    }
                }
                pos = (base as isize + best_shift) as usize;
            }
        }
    }
    (symbols, erasures)
}

/// Accepts the candidate when it matches the re-encoded body up to
/// `threshold` edits. The clean case (body embedded verbatim among a couple
/// of buffer zeros) is resolved with direct comparisons; only genuinely
/// edited candidates pay for the banded DP.
fn verify_candidate(body: &[u8], cand: &[u8], threshold: usize, free_end: usize) -> bool {
    if cand.len() >= body.len() {
        let max_shift = (cand.len() - body.len()).min(2 * free_end);
        for off in 0..=max_shift {
            if &cand[off..off + body.len()] == body {
                return true;
            }
        }
    }
    // Length gap alone decides hopeless cases before any DP.
    if body.len() > cand.len() + threshold {
        return false;
    }
    if cand.len() > body.len() + 2 * free_end + threshold {
        return false;
    }
    let band = 2 * threshold + 16;
    indel_distance_semiglobal(body, cand, free_end, band) <= threshold
}

fn trim_zeros(bits: &[u8], keep: usize) -> (usize, usize) {
    let mut start = 0;
    while start < bits.len() && bits[start] == 0 {
        start += 1;
    }
    start = start.saturating_sub(keep);
    let mut end = bits.len();
    while end > start && bits[end - 1] == 0 {
        end -= 1;
    }
    (start, (end + keep).min(bits.len()))
}

fn try_decode_candidate(
    window: &[u8],
    start: usize,
    end: usize,
    p: &InsdelBlockParams,
) -> Option<(u64, BitString)> {
    let (s_trim, e_trim) = trim_zeros(&window[start..end], 2);
    let cand = &window[start + s_trim..start + e_trim];
    // A candidate shorter than the body minus the verify threshold can
    // never pass re-encode verification (every missing bit is a deletion),
    // so truncated window-edge fragments are dropped before any decoding.
    let threshold = (p.verify_gamma * p.tau as f64).ceil() as usize;
    if cand.len() + threshold + 4 < p.body_len() {
        return None;
    }

    // Rank starting phases by how many clean frames they produce; attempt a
    // full decode from the best two and let verification arbitrate.
    let mut phases: Vec<(usize, usize)> = (0..4).map(|ph| (frame_score(cand, ph, 6), ph)).collect();
    phases.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    for &(_, phase) in phases.iter().take(2) {
        let (symbols, erasures) = demodulate(cand, phase, p.ecc.code_len);
        if erasures.len() > p.ecc.parity() {
            continue;
        }
        let Ok((data, corrected)) = ecc::decode_symbols_counted(&symbols, &erasures, &p.ecc) else {
            continue;
        };
        let data_bits = ecc::symbols_to_bits(&data);
        let index = data_bits.read_uint(0, p.idx_bits);
        if index == 0 {
            continue;
        }
        let payload = data_bits.slice(p.idx_bits, p.idx_bits + p.tau);

        // A defect-free parse of a valid codeword pins the candidate bits
        // exactly (each frame is determined by its symbol), so when the
        // boundary slack is inside the edit threshold no re-encoding is
        // needed.
        let span = phase + p.ecc.code_len * FRAME_BITS;
        if corrected == 0
            && erasures.is_empty()
            && phase + (cand.len() - span.min(cand.len())) <= threshold.min(4)
            && cand.len() >= span
        {
            return Some((index, payload));
        }

        // Re-encode and verify the candidate really is this block, up to
        // gamma*tau edits plus boundary slop.
        let Ok(body) = encode_body(index, &payload, p) else {
            continue;
        };
        if !verify_candidate(body.as_slice(), cand, threshold, p.buf_len) {
            continue;
        }
        return Some((index, payload));
    }
    None
}

/// Scans a window for buffer-delimited bodies and decodes every candidate,
/// in left-to-right order. Soft-fails (skips) anything undecodable.
pub fn scan_bodies(window: &BitString, p: &InsdelBlockParams) -> Vec<ScannedBody> {
    scan_bodies_slice(window.as_slice(), p)
}

/// Candidate body segments of a window: the stretches between low-weight
/// runs, widened by the worst-case boundary overshoot.
fn candidate_boundaries(bits: &[u8], min_len: usize, p: &InsdelBlockParams) -> Vec<(usize, usize)> {
    let n = bits.len();
    let lam = p.lambda0;
    if n < min_len || n < lam {
        return Vec::new();
    }

    // Low-weight lambda0-windows mark buffer territory.
    let max_weight = (p.buffer_thresh * lam as f64 + 1e-9).floor() as usize;
    let mut runs: Vec<(usize, usize)> = Vec::new(); // [start, end) in window positions
    let mut weight: usize = bits[..lam].iter().map(|&b| b as usize).sum();
    let mut run_start: Option<usize> = None;
    for pos in 0..=n - lam {
        if pos > 0 {
            weight += bits[pos + lam - 1] as usize;
            weight -= bits[pos - 1] as usize;
        }
        if weight <= max_weight {
            run_start.get_or_insert(pos);
        } else if let Some(s) = run_start.take() {
            runs.push((s, pos));
        }
    }
    if let Some(s) = run_start {
        runs.push((s, n - lam + 1));
    }

    // Candidate segments live between consecutive runs (and against the
    // window edges). A run [s, e) of low windows covers roughly [s, e-1+lam).
    // A window of weight <= thresh*lam can still overlap up to
    // 2*thresh*lam + 2 body bits, so widen each segment by that overshoot;
    // the widened ends land in buffer zeros and are trimmed again before
    // demodulation.
    let overshoot = (2.0 * p.buffer_thresh * lam as f64).floor() as usize + 2;
    let mut boundaries = Vec::new(); // (seg_start, seg_end)
    let mut prev_end = 0usize;
    for &(s, e) in &runs {
        if s > prev_end {
            boundaries.push((prev_end.saturating_sub(overshoot), (s + overshoot).min(n)));
        }
        prev_end = (e - 1 + lam).min(n);
    }
    if prev_end < n {
        boundaries.push((prev_end.saturating_sub(overshoot), n));
    }
    boundaries.retain(|&(s, e)| e - s >= min_len);
    let max_candidates = n / p.blk_len() + 4;
    boundaries.truncate(max_candidates);
    boundaries
}

fn scan_min_len(p: &InsdelBlockParams) -> usize {
    let threshold = (p.verify_gamma * p.tau as f64).ceil() as usize;
    p.body_len().saturating_sub(threshold + 4)
}

/// Allocation-light slice variant of [`scan_bodies`], for the decode hot
/// path.
pub fn scan_bodies_slice(bits: &[u8], p: &InsdelBlockParams) -> Vec<ScannedBody> {
    let mut out = Vec::new();
    for (s, e) in candidate_boundaries(bits, scan_min_len(p), p) {
        if let Some((index, payload)) = try_decode_candidate(bits, s, e, p) {
            out.push(ScannedBody {
                start: s,
                end: e,
                index,
                payload,
            });
        }
    }
    out
}

/// Decodes the block body nearest the window center. This is the soft-failing
/// single-block entry point: any undecodable window yields `None`.
pub fn insdel_block_decode(window: &BitString, p: &InsdelBlockParams) -> Option<(u64, BitString)> {
    insdel_block_decode_slice(window.as_slice(), p)
}

pub fn insdel_block_decode_slice(bits: &[u8], p: &InsdelBlockParams) -> Option<(u64, BitString)> {
    let center = bits.len() / 2;
    // Try candidates nearest the center first and stop at the first decode;
    // more distant candidates can only lose the distance tie-break.
    let mut boundaries = candidate_boundaries(bits, scan_min_len(p), p);
    boundaries.sort_by_key(|&(s, e)| ((s + e) / 2).abs_diff(center));
    boundaries
        .into_iter()
        .find_map(|(s, e)| try_decode_candidate(bits, s, e, p))
}
