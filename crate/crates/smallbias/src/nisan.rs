//! A space-bounded pseudorandom generator: a seed of `b·(2k+1)` bits expands
//! to `2^k` blocks of `b` bits through recursive halving with affine
//! pairwise-independent hashes over `F_{2^b}`.
//!
//! Expansion rule: `G₀(x) = x` and
//! `G_j(x; h₁..h_j) = G_{j−1}(x; h₁..h_{j−1}) ∥ G_{j−1}(h_j(x); h₁..h_{j−1})`,
//! so the last hash splits at the top level and the first `2^(k−1)` blocks of
//! a `k`-hash expansion coincide with the full `(k−1)`-hash expansion — the
//! prefix property the tests pin down.

use crate::entropy::EntropySource;
use crate::gf2::{field_mul, BitVector, FieldElement, FieldSpec};
use crate::{Error, Result};

/// An affine map `h(x) = a·x + c` over `F_{2^b}`; `(a, c)` uniform makes the
/// family pairwise independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashDesc {
    pub a: FieldElement,
    pub c: FieldElement,
}

impl HashDesc {
    /// Applies the map; both elements must live in the same field as `x`.
    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        field_mul(&self.a, x)?.add(&self.c)
    }
}

/// A generator seed: the start block `x0` and `k` hash descriptions, a total
/// of `b·(2k+1)` bits of randomness.
#[derive(Debug, Clone)]
pub struct NisanSeed {
    pub x0: FieldElement,
    pub hashes: Vec<HashDesc>,
}

/// `⌈log₂ t⌉`, the number of doubling levels needed for `t` blocks.
pub fn ceil_log2(t: usize) -> usize {
    if t <= 1 {
        0
    } else {
        (usize::BITS - (t - 1).leading_zeros()) as usize
    }
}

/// Seed length in bits for `t` blocks of `b` bits: `b·(2⌈log₂ t⌉ + 1)`.
pub fn seed_length(b: usize, t: usize) -> u64 {
    assert!(b >= 1 && t >= 1, "seed_length requires b, t >= 1");
    (b as u64) * (2 * ceil_log2(t) as u64 + 1)
}

/// Draws a fresh seed for `t` blocks of `b` bits, consuming exactly
/// [`seed_length`]`(b, t)` bits: first `x0`, then `(a_i, c_i)` per hash.
pub fn sample_seed(b: usize, t: usize, src: &mut EntropySource) -> Result<NisanSeed> {
    if b < 1 || t < 1 {
        return Err(Error::InvalidParameter(
            "seed sampling requires b >= 1 and t >= 1".into(),
        ));
    }
    let spec = FieldSpec::shared(b)?;
    let k = ceil_log2(t);
    let x0 = FieldElement::from_bits(&spec, &src.draw_bitvec(b))?;
    let mut hashes = Vec::with_capacity(k);
    for _ in 0..k {
        let a = FieldElement::from_bits(&spec, &src.draw_bitvec(b))?;
        let c = FieldElement::from_bits(&spec, &src.draw_bitvec(b))?;
        hashes.push(HashDesc { a, c });
    }
    Ok(NisanSeed { x0, hashes })
}

fn expand_rec(x: &FieldElement, hashes: &[HashDesc]) -> Result<Vec<FieldElement>> {
    match hashes.split_last() {
        None => Ok(vec![x.clone()]),
        Some((top, rest)) => {
            let mut left = expand_rec(x, rest)?;
            let right = expand_rec(&top.apply(x)?, rest)?;
            left.extend(right);
            Ok(left)
        }
    }
}

/// Expands a seed with `k` hashes into its `2^k` blocks of `b` bits.
///
/// Errors if the seed's hash count differs from `k`.
pub fn expand(seed: &NisanSeed, k: usize) -> Result<Vec<BitVector>> {
    if seed.hashes.len() != k {
        return Err(Error::InvalidParameter(format!(
            "seed carries {} hashes, expansion level k = {k} requires exactly k",
            seed.hashes.len()
        )));
    }
    let blocks = expand_rec(&seed.x0, &seed.hashes)?;
    Ok(blocks.iter().map(|e| e.to_bits()).collect())
}

/// Budget cap for [`tv_distance_harness`] enumerations: both the uniform
/// input space (`n·t` bits) and the seed space (`b·(2k+1)` bits) must stay
/// within `2^24` states.
const TV_ENUM_BUDGET_BITS: usize = 24;

/// Exact total-variation distance between the final-state distribution of
/// the Hamming-weight program on `x` under (i) truly uniform blocks and
/// (ii) all expanded seeds, by full enumeration.
///
/// The program starts at `|x|` and adds `|α·x|` per block, where `α` is the
/// low `n` bits of the block. The uniform side is computed as the exact
/// distribution of `t` i.i.d. uniform multipliers (the low-`n` truncation of
/// a uniform `b`-bit block is a uniform `n`-bit multiplier); the seed side
/// enumerates every seed. Both histograms have power-of-two denominators, so
/// the returned `f64` is exact.
///
/// Requires `x ≠ 0`, `n = x.len() <= 6`, `n <= b <= 8`, `1 <= t <= 8`, and
/// the enumeration budget above.
pub fn tv_distance_harness(x: &BitVector, t: usize, b: usize) -> Result<f64> {
    let n = x.len();
    if x.is_zero() {
        return Err(Error::InvalidParameter(
            "the weight program is defined for nonzero x".into(),
        ));
    }
    if n > 6 || b > 8 || b < n || !(1..=8).contains(&t) {
        return Err(Error::TooLargeForExhaustion(format!(
            "harness envelope is n <= 6, n <= b <= 8, 1 <= t <= 8 (got n={n}, b={b}, t={t})"
        )));
    }
    let k = ceil_log2(t);
    let seed_bits = b * (2 * k + 1);
    if n * t > TV_ENUM_BUDGET_BITS || seed_bits > TV_ENUM_BUDGET_BITS {
        return Err(Error::TooLargeForExhaustion(format!(
            "enumeration needs 2^{} uniform inputs and 2^{seed_bits} seeds; budget is 2^{TV_ENUM_BUDGET_BITS}",
            n * t
        )));
    }

    let spec = FieldSpec::shared(b)?;
    let embed_n = |v: u64| -> Result<FieldElement> {
        FieldElement::from_bits(&spec, &BitVector::from_u64(b, v))
    };
    // Weight gained per block value: |low_n(block) · x| in F_{2^n}.
    let nspec = FieldSpec::shared(n)?;
    let xe = FieldElement::from_bits(&nspec, x)?;
    let mut gain = vec![0usize; 1 << n];
    for (a, g) in gain.iter_mut().enumerate() {
        let ae = FieldElement::from_bits(&nspec, &BitVector::from_u64(n, a as u64))?;
        *g = field_mul(&ae, &xe)?.to_bits().weight();
    }

    let base = x.weight();
    let max_state = n * (t + 1);

    // Uniform side: exact distribution of the sum of t i.i.d. block weights.
    let mut uniform = vec![0u64; max_state + 1];
    uniform[base] = 1;
    for _ in 0..t {
        let mut next = vec![0u64; max_state + 1];
        for (s, &count) in uniform.iter().enumerate() {
            if count == 0 {
                continue;
            }
            for &g in &gain {
                next[s + g] += count;
            }
        }
        uniform = next;
    }
    let uniform_den = (1u64 << n).pow(t as u32) as f64;

    // Seed side: every seed, expanded in full.
    let mut seeded = vec![0u64; max_state + 1];
    let chunk_mask = (1u64 << b) - 1;
    let low_mask = (1u64 << n) - 1;
    for s in 0u64..(1u64 << seed_bits) {
        let chunk = |i: usize| (s >> (b * i)) & chunk_mask;
        let x0 = embed_n(chunk(0))?;
        let mut hashes = Vec::with_capacity(k);
        for i in 0..k {
            hashes.push(HashDesc {
                a: embed_n(chunk(1 + 2 * i))?,
                c: embed_n(chunk(2 + 2 * i))?,
            });
        }
        let blocks = expand_rec(&x0, &hashes)?;
        let mut state = base;
        for blk in blocks.iter().take(t) {
            state += gain[(blk.to_bits().as_u64() & low_mask) as usize];
        }
        seeded[state] += 1;
    }
    let seeded_den = (1u64 << seed_bits) as f64;

    let tv: f64 = uniform
        .iter()
        .zip(&seeded)
        .map(|(&u, &s)| (u as f64 / uniform_den - s as f64 / seeded_den).abs())
        .sum::<f64>()
        / 2.0;
    Ok(tv)
}
