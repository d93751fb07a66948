//! Seeded randomness with exact bit accounting.
//!
//! Every random bit a construction consumes flows through one
//! [`EntropySource`], which counts bits as they are handed out — including
//! draws discarded by rejection sampling. The counter is the ground truth
//! behind every `random_bits` figure this crate reports.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};

use crate::gf2::BitVector;
use crate::{Error, Result};

/// Identity of the expansion scheme, recorded in set-file headers so a file
/// documents how its seed was stretched.
///
/// The seed bytes are hashed with SHA-256 to a 32-byte key; the key drives a
/// ChaCha20 keystream read as little-endian 64-bit words; bits are served
/// least-significant first.
pub const GENERATOR_ID: &str = "sha256-chacha20-lsb";

/// A deterministic bit source: seed in, counted bits out.
pub struct EntropySource {
    rng: ChaCha20Rng,
    buf: u64,
    buf_bits: u32,
    bits_consumed: u64,
    seed_hex: String,
}

impl EntropySource {
    /// Creates a source from raw seed bytes.
    pub fn from_seed_bytes(seed: &[u8]) -> EntropySource {
        let key: [u8; 32] = Sha256::digest(seed).into();
        EntropySource {
            rng: ChaCha20Rng::from_seed(key),
            buf: 0,
            buf_bits: 0,
            bits_consumed: 0,
            seed_hex: seed.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }

    /// Creates a source from a hex-encoded seed (as passed on the command
    /// line and recorded in set-file headers). An even number of hex digits
    /// is required; the empty string is a valid (empty) seed.
    pub fn from_seed_hex(hex: &str) -> Result<EntropySource> {
        if !hex.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "seed hex must have an even number of digits, got {}",
                hex.len()
            )));
        }
        let mut bytes = Vec::with_capacity(hex.len() / 2);
        for i in (0..hex.len()).step_by(2) {
            let byte = u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| {
                Error::InvalidParameter(format!("invalid seed hex near {:?}", &hex[i..i + 2]))
            })?;
            bytes.push(byte);
        }
        Ok(EntropySource::from_seed_bytes(&bytes))
    }

    /// The seed as lowercase hex, exactly as given.
    pub fn seed_hex(&self) -> &str {
        &self.seed_hex
    }

    /// Total bits handed out so far, rejected draws included.
    pub fn bits_consumed(&self) -> u64 {
        self.bits_consumed
    }

    fn next_bit(&mut self) -> u64 {
        if self.buf_bits == 0 {
            self.buf = self.rng.next_u64();
            self.buf_bits = 64;
        }
        let b = self.buf & 1;
        self.buf >>= 1;
        self.buf_bits -= 1;
        b
    }

    /// Draws `k <= 64` bits into the low bits of a word (first bit drawn is
    /// bit 0). `k = 0` consumes nothing and returns 0.
    pub fn draw_bits(&mut self, k: u32) -> u64 {
        assert!(k <= 64, "draw_bits supports k <= 64");
        let mut w = 0u64;
        for i in 0..k {
            w |= self.next_bit() << i;
        }
        self.bits_consumed += u64::from(k);
        w
    }

    /// Draws an `n`-bit vector (bit `i` of the vector is the `i`-th bit
    /// drawn), consuming exactly `n` bits.
    pub fn draw_bitvec(&mut self, n: usize) -> BitVector {
        let mut v = BitVector::zero(n);
        for i in 0..n {
            if self.next_bit() == 1 {
                v.set_bit(i, true);
            }
        }
        self.bits_consumed += n as u64;
        v
    }

    /// Uniform draw from `{0, 1, …, q-1}` by rejection sampling.
    ///
    /// `q = 1` consumes zero bits. A power of two consumes exactly `log₂ q`
    /// bits, the raw draw. Otherwise draws carry a few guard bits beyond
    /// `⌈log₂ q⌉` so the acceptance rate stays near one (a bare `⌈log₂ q⌉`
    /// draw can be rejected almost half the time when `q` sits just above a
    /// power of two); an accepted draw `v` yields `v mod q`, which is exactly
    /// uniform because the acceptance threshold is a multiple of `q`. The
    /// expected cost stays below `2⌈log₂ q⌉` bits, and rejected draws are
    /// counted like any other.
    pub fn draw_mod(&mut self, q: u64) -> u64 {
        assert!(q >= 1, "draw_mod requires q >= 1");
        if q == 1 {
            return 0;
        }
        let k = 64 - (q - 1).leading_zeros(); // ⌈log₂ q⌉ for q >= 2
        if q.is_power_of_two() {
            return self.draw_bits(k);
        }
        let pad = 7.min(k - 2); // k >= 2 whenever q >= 3 and q not a power of two
        let width = (k + pad).min(64);
        let limit = if width == 64 {
            u64::MAX - (u64::MAX % q) // largest multiple of q representable
        } else {
            (1u64 << width) / q * q
        };
        loop {
            let v = self.draw_bits(width);
            if v < limit {
                return v % q;
            }
        }
    }
}
