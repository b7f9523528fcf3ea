//! Systematic Reed-Solomon code over GF(2^8) with errors-and-erasures
//! decoding.
//!
//! This is the constant-rate, constant-distance block code used both inside
//! the private-key Hamming code (one codeword per message block) and inside
//! the insertion/deletion block code (protecting each Manchester body). The
//! codeword is `message || parity`; up to `floor((A - a)/2)` symbol errors,
//! or any mix with `2*errors + erasures <= A - a`, is corrected.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::gf256;

pub const SYMBOL_BITS: usize = 8;

/// Dimensions of an (A, a) Reed-Solomon code over GF(2^8).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EccParams {
    /// Message length in symbols.
    pub a: usize,
    /// Codeword length in symbols.
    pub code_len: usize,
    /// Bits per symbol; always 8 here (alphabet GF(2^8)).
    pub c: usize,
}

impl EccParams {
    pub fn new(code_len: usize, a: usize) -> Result<EccParams> {
        if a == 0 || a >= code_len {
            return Err(Error::InvalidInput(format!(
                "need 0 < a < A, got a={a}, A={code_len}"
            )));
        }
        if code_len > 255 {
            return Err(Error::InvalidInput(format!(
                "codeword length {code_len} exceeds GF(256) limit of 255 symbols"
            )));
        }
        let p = EccParams {
            a,
            code_len,
            c: SYMBOL_BITS,
        };
        if p.correct_radius() < 1 {
            return Err(Error::InvalidInput("correct radius must be >= 1".into()));
        }
        Ok(p)
    }

    pub fn parity(&self) -> usize {
        self.code_len - self.a
    }

    /// Unique-decoding radius in symbols.
    pub fn correct_radius(&self) -> usize {
        self.parity() / 2
    }

    pub fn rate(&self) -> f64 {
        self.a as f64 / self.code_len as f64
    }

    /// Per-block symbol-error fraction the code corrects: radius / A.
    pub fn tolerance(&self) -> f64 {
        self.correct_radius() as f64 / self.code_len as f64
    }

    /// Message length in bits (a * c).
    pub fn message_bits(&self) -> usize {
        self.a * self.c
    }

    /// Codeword length in bits (A * c).
    pub fn codeword_bits(&self) -> usize {
        self.code_len * self.c
    }

    fn generator_poly(&self) -> Vec<u8> {
        let mut g = vec![1u8];
        for i in 0..self.parity() {
            g = gf256::poly_mul(&g, &[1, gf256::alpha_pow(i)]);
        }
        g
    }
}

/// Bits -> symbols, 8 bits per symbol, least-significant bit first.
pub fn bits_to_symbols(bits: &BitString) -> Vec<u8> {
    assert_eq!(bits.len() % SYMBOL_BITS, 0);
    (0..bits.len() / SYMBOL_BITS)
        .map(|i| bits.read_uint(i * SYMBOL_BITS, SYMBOL_BITS) as u8)
        .collect()
}

pub fn symbols_to_bits(symbols: &[u8]) -> BitString {
    let mut out = BitString::new();
    for &s in symbols {
        out.push_uint(s as u64, SYMBOL_BITS);
    }
    out
}

/// Systematic encode of `a` symbols into `A` symbols.
pub fn encode_symbols(message: &[u8], p: &EccParams) -> Result<Vec<u8>> {
    if message.len() != p.a {
        return Err(Error::InvalidInput(format!(
            "message has {} symbols, expected {}",
            message.len(),
            p.a
        )));
    }
    let gen = p.generator_poly();
    // Polynomial long division of message * x^parity by the generator.
    let mut rem = vec![0u8; p.parity()];
    for &m in message {
        let coef = m ^ rem[0];
        rem.rotate_left(1);
        *rem.last_mut().unwrap() = 0;
        if coef != 0 {
            for (r, &g) in rem.iter_mut().zip(gen[1..].iter()) {
                *r ^= gf256::mul(coef, g);
            }
        }
    }
    let mut code = message.to_vec();
    code.extend_from_slice(&rem);
    Ok(code)
}

/// Errors-and-erasures decode. `erasures` lists 0-based symbol positions
/// known to be unreliable. Returns the message symbols, or an error when the
/// word is not within the combined correction capability.
pub fn decode_symbols(received: &[u8], erasures: &[usize], p: &EccParams) -> Result<Vec<u8>> {
    decode_symbols_counted(received, erasures, p).map(|(msg, _)| msg)
}

/// Like [`decode_symbols`] but also reports how many symbols were changed;
/// zero means `received` was already a codeword.
pub fn decode_symbols_counted(
    received: &[u8],
    erasures: &[usize],
    p: &EccParams,
) -> Result<(Vec<u8>, usize)> {
    if received.len() != p.code_len {
        return Err(Error::InvalidInput(format!(
            "received word has {} symbols, expected {}",
            received.len(),
            p.code_len
        )));
    }
    if erasures.iter().any(|&e| e >= p.code_len) {
        return Err(Error::InvalidInput("erasure position out of range".into()));
    }
    let n_par = p.parity();
    if erasures.len() > n_par {
        return Err(Error::DecodeFailure(format!(
            "{} erasures exceed parity {}",
            erasures.len(),
            n_par
        )));
    }

    // Syndromes S_i = y(alpha^i). Position j carries the coefficient of
    // x^(A-1-j).
    let syndromes: Vec<u8> = (0..n_par)
        .map(|i| gf256::poly_eval(received, gf256::alpha_pow(i)))
        .collect();
    if syndromes.iter().all(|&s| s == 0) && erasures.is_empty() {
        return Ok((received[..p.a].to_vec(), 0));
    }

    // Erasure locator over locators X_e = alpha^(A-1-pos).
    let erasure_locs: Vec<u8> = erasures
        .iter()
        .map(|&e| gf256::alpha_pow(p.code_len - 1 - e))
        .collect();
    // Gamma(x) = prod (1 - X_e x), low degree first.
    let mut gamma = vec![1u8];
    for &x_e in &erasure_locs {
        let mut next = vec![0u8; gamma.len() + 1];
        for (i, &g) in gamma.iter().enumerate() {
            next[i] ^= g;
            next[i + 1] ^= gf256::mul(g, x_e);
        }
        gamma = next;
    }

    // Modified syndromes: T(x) = S(x) * Gamma(x) mod x^n_par (low first).
    let mut t = vec![0u8; n_par];
    for (i, ti) in t.iter_mut().enumerate() {
        let mut acc = 0u8;
        for (j, &g) in gamma.iter().enumerate() {
            if j <= i {
                acc ^= gf256::mul(g, syndromes[i - j]);
            }
        }
        *ti = acc;
    }

    // Berlekamp-Massey on the modified syndromes for the error locator.
    let rho = erasures.len();
    let max_errors = (n_par - rho) / 2;
    let mut sigma = vec![1u8]; // low degree first
    let mut prev = vec![1u8];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut b = 1u8;
    for n in rho..n_par {
        let mut d = t[n];
        for i in 1..=l {
            if i < sigma.len() {
                d ^= gf256::mul(sigma[i], t[n - i]);
            }
        }
        if d == 0 {
            m += 1;
        } else if 2 * l <= n - rho {
            let tmp = sigma.clone();
            let coef = gf256::div(d, b);
            let mut shifted = vec![0u8; m];
            shifted.extend_from_slice(&prev);
            if sigma.len() < shifted.len() {
                sigma.resize(shifted.len(), 0);
            }
            for (s, &sh) in sigma.iter_mut().zip(shifted.iter()) {
                *s ^= gf256::mul(coef, sh);
            }
            l = n - rho + 1 - l;
            prev = tmp;
            b = d;
            m = 1;
        } else {
            let coef = gf256::div(d, b);
            let mut shifted = vec![0u8; m];
            shifted.extend_from_slice(&prev);
            if sigma.len() < shifted.len() {
                sigma.resize(shifted.len(), 0);
            }
            for (s, &sh) in sigma.iter_mut().zip(shifted.iter()) {
                *s ^= gf256::mul(coef, sh);
            }
            m += 1;
        }
    }
    if l > max_errors {
        return Err(Error::DecodeFailure(
            "error locator degree too large".into(),
        ));
    }

    // Combined locator Psi = sigma * gamma (low first).
    let mut psi = vec![0u8; sigma.len() + gamma.len() - 1];
    for (i, &si) in sigma.iter().enumerate() {
        if si == 0 {
            continue;
        }
        for (j, &gj) in gamma.iter().enumerate() {
            psi[i + j] ^= gf256::mul(si, gj);
        }
    }
    while psi.len() > 1 && *psi.last().unwrap() == 0 {
        psi.pop();
    }

    // Chien search for roots; root x = alpha^(-(A-1-j)) marks position j.
    let mut positions = Vec::new();
    for j in 0..p.code_len {
        let x_inv = gf256::alpha_pow(255 - ((p.code_len - 1 - j) % 255));
        let mut acc = 0u8;
        let mut xp = 1u8;
        for &c in &psi {
            acc ^= gf256::mul(c, xp);
            xp = gf256::mul(xp, x_inv);
        }
        if acc == 0 {
            positions.push(j);
        }
    }
    if positions.len() != psi.len() - 1 {
        return Err(Error::DecodeFailure(
            "locator roots do not match degree".into(),
        ));
    }

    // Forney: Omega(x) = S(x) Psi(x) mod x^n_par; magnitude at X_k is
    // X_k * Omega(X_k^-1) / Psi'(X_k^-1)   (for syndromes starting at i=0).
    let mut omega = vec![0u8; n_par];
    for (i, oi) in omega.iter_mut().enumerate() {
        let mut acc = 0u8;
        for (j, &c) in psi.iter().enumerate() {
            if j <= i {
                acc ^= gf256::mul(c, syndromes[i - j]);
            }
        }
        *oi = acc;
    }

    let mut corrected = received.to_vec();
    let mut changed = 0usize;
    for &j in &positions {
        let loc_pow = (p.code_len - 1 - j) % 255;
        let x = gf256::alpha_pow(loc_pow);
        let x_inv = gf256::alpha_pow(255 - loc_pow);
        let mut num = 0u8;
        let mut xp = 1u8;
        for &c in &omega {
            num ^= gf256::mul(c, xp);
            xp = gf256::mul(xp, x_inv);
        }
        // Formal derivative of Psi evaluated at x_inv: odd-degree terms only.
        let mut den = 0u8;
        let mut xp = 1u8; // x_inv^(i-1) for i = 1
        for (i, &c) in psi.iter().enumerate().skip(1) {
            if i % 2 == 1 {
                den ^= gf256::mul(c, xp);
            }
            xp = gf256::mul(xp, x_inv);
        }
        if den == 0 {
            return Err(Error::DecodeFailure("Forney denominator vanished".into()));
        }
        let magnitude = gf256::mul(x, gf256::div(num, den));
        if magnitude != 0 {
            changed += 1;
        }
        corrected[j] ^= magnitude;
    }

    // Reject silently-miscorrected words.
    for i in 0..n_par {
        if gf256::poly_eval(&corrected, gf256::alpha_pow(i)) != 0 {
            return Err(Error::DecodeFailure(
                "residual syndromes after correction".into(),
            ));
        }
    }
    Ok((corrected[..p.a].to_vec(), changed))
}

/// Systematic encode of an `a*c`-bit message block into an `A*c`-bit codeword.
pub fn ecc_encode(message_block: &BitString, p: &EccParams) -> Result<BitString> {
    if message_block.len() != p.message_bits() {
        return Err(Error::InvalidInput(format!(
            "message block has {} bits, expected {}",
            message_block.len(),
            p.message_bits()
        )));
    }
    let symbols = encode_symbols(&bits_to_symbols(message_block), p)?;
    Ok(symbols_to_bits(&symbols))
}

/// Decode of an `A*c`-bit (noisy) codeword back to the `a*c`-bit message.
pub fn ecc_decode(noisy_block: &BitString, p: &EccParams) -> Result<BitString> {
    if noisy_block.len() != p.codeword_bits() {
        return Err(Error::InvalidInput(format!(
            "noisy block has {} bits, expected {}",
            noisy_block.len(),
            p.codeword_bits()
        )));
    }
    let symbols = decode_symbols(&bits_to_symbols(noisy_block), &[], p)?;
    Ok(symbols_to_bits(&symbols))
}
