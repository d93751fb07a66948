//! Bias verification: exact via an integer Walsh–Hadamard transform, or
//! sampled for dimensions beyond the enumeration cutoff.
//!
//! For a multiset `S` and nonempty `T`, the signed correlation
//! `Σ_{x∈S} (-1)^(⊕_{i∈T} x_i)` is an integer, so exact verification never
//! touches floating point until the final division by `|S|`. The transform
//! computes all `2^n - 1` correlations at once from the counting vector
//! `c[x] = multiplicity of x in S`: the transformed vector holds exactly
//! those signed sums.

use crate::entropy::EntropySource;
use crate::gf2::{BitVector, IndexSet};
use crate::{Error, Result};

/// Largest `n` for which exact verification enumerates all `2^n` subsets.
/// At this size the counting vector occupies `2^28` 64-bit words (2 GiB),
/// the desk-scale ceiling.
pub const EXACT_MODE_MAX_N: usize = 28;

/// Method tags recorded in [`CandidateSet::method`] and set-file headers.
pub mod method {
    pub const NAIVE: &str = "naive";
    pub const CODE_UNIFORM: &str = "code-uniform";
    pub const CODE_NISAN: &str = "code-nisan";
    pub const LEGENDRE_SHIFT: &str = "legendre-shift";
    pub const AGHP: &str = "aghp";
}

/// A candidate small-bias multiset with the metadata of how it was built.
///
/// `elements` may contain duplicates; all bias statistics are multiset
/// averages. `params` preserves insertion order and is written verbatim into
/// set-file headers, and `random_bits` is the exact number of random bits the
/// construction consumed.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    n: usize,
    elements: Vec<BitVector>,
    /// One of the [`method`] tags.
    pub method: String,
    /// Construction parameters as ordered key/value pairs.
    pub params: Vec<(String, String)>,
    /// Random bits consumed to build the set (0 for deterministic methods).
    pub random_bits: u64,
}

impl CandidateSet {
    /// Validates dimensions: `n >= 1`, at least one element, every element
    /// of length `n`.
    pub fn new(
        n: usize,
        elements: Vec<BitVector>,
        method: impl Into<String>,
        params: Vec<(String, String)>,
        random_bits: u64,
    ) -> Result<CandidateSet> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if elements.is_empty() {
            return Err(Error::InvalidParameter(
                "a candidate set needs at least one element".into(),
            ));
        }
        for e in &elements {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
        }
        Ok(CandidateSet {
            n,
            elements,
            method: method.into(),
            params,
            random_bits,
        })
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Multiset size `|S|` (duplicates counted).
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// The elements in construction order.
    pub fn elements(&self) -> &[BitVector] {
        &self.elements
    }
}

/// How a bias figure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasMode {
    /// All `2^n - 1` parities enumerated; the figure is exact.
    Exact,
    /// A random sample of parities; the figure is a lower bound.
    Sampled,
}

/// Result of a bias measurement over a candidate set.
#[derive(Debug, Clone)]
pub struct BiasReport {
    pub mode: BiasMode,
    /// `max_T |bias(T)|` over the enumerated or sampled `T`.
    pub max_bias: f64,
    /// A `T` attaining `max_bias`. In exact mode ties resolve to the
    /// numerically smallest mask (the earliest subset in ascending mask
    /// order); in sampled mode, to the first maximizer drawn.
    pub witness: Option<IndexSet>,
    /// Number of sampled subsets (sampled mode only).
    pub samples: Option<u64>,
    /// Exact mode only: entry `w - 1` is `max |bias(T)|` over `|T| = w`.
    pub per_weight_max: Option<Vec<f64>>,
}

/// In-place Walsh–Hadamard transform: replaces `data[u]` with
/// `Σ_x (-1)^(popcount(u & x)) data[x]`. Length must be a power of two.
pub fn walsh_hadamard(data: &mut [i64]) {
    assert!(data.len().is_power_of_two(), "length must be a power of two");
    let mut h = 1;
    while h < data.len() {
        for block in data.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// The signed correlation `Σ_{x∈S} (-1)^(⊕_{i∈T} x_i)` as an exact integer.
pub fn signed_sum(s: &CandidateSet, t: &IndexSet) -> Result<i64> {
    if t.n() != s.n {
        return Err(Error::DimensionMismatch {
            expected: s.n,
            got: t.n(),
        });
    }
    let mask = t.mask();
    let mut sum = 0i64;
    for x in &s.elements {
        if x.and_weight(mask) % 2 == 0 {
            sum += 1;
        } else {
            sum -= 1;
        }
    }
    Ok(sum)
}

/// The signed bias `signed_sum(S, T) / |S|`.
pub fn bias_for(s: &CandidateSet, t: &IndexSet) -> Result<f64> {
    Ok(signed_sum(s, t)? as f64 / s.size() as f64)
}

/// The counting vector of `S` transformed in place: entry `u` is the signed
/// sum for the subset with mask `u`.
fn transformed_counts(s: &CandidateSet) -> Result<Vec<i64>> {
    if s.n > EXACT_MODE_MAX_N {
        return Err(Error::ExactModeTooLarge { n: s.n });
    }
    let mut counts = vec![0i64; 1usize << s.n];
    for x in &s.elements {
        counts[x.as_u64() as usize] += 1;
    }
    walsh_hadamard(&mut counts);
    Ok(counts)
}

/// Exact maximum bias over every nonempty subset, via one transform of the
/// counting vector. Requires `n <=` [`EXACT_MODE_MAX_N`].
pub fn exact_max_bias(s: &CandidateSet) -> Result<BiasReport> {
    let hat = transformed_counts(s)?;
    let size = s.size() as f64;
    let mut best: i64 = -1;
    let mut best_mask = 0u64;
    let mut per_weight = vec![0i64; s.n];
    for (u, &v) in hat.iter().enumerate().skip(1) {
        let a = v.abs();
        if a > best {
            best = a;
            best_mask = u as u64;
        }
        let w = (u as u64).count_ones() as usize;
        if a > per_weight[w - 1] {
            per_weight[w - 1] = a;
        }
    }
    let witness = IndexSet::from_mask(BitVector::from_u64(s.n, best_mask))?;
    Ok(BiasReport {
        mode: BiasMode::Exact,
        max_bias: best as f64 / size,
        witness: Some(witness),
        samples: None,
        per_weight_max: Some(per_weight.iter().map(|&v| v as f64 / size).collect()),
    })
}

/// Sampled maximum bias: draws `trials` uniform nonempty subsets and takes
/// the largest magnitude seen. A lower bound on the true maximum.
pub fn sampled_max_bias(
    s: &CandidateSet,
    trials: u64,
    src: &mut EntropySource,
) -> Result<BiasReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "sampled verification needs at least one trial".into(),
        ));
    }
    let size = s.size() as f64;
    let mut best: i64 = -1;
    let mut witness: Option<IndexSet> = None;
    for _ in 0..trials {
        let t = random_nonempty_subset(s.n, src);
        let v = signed_sum(s, &t)?.abs();
        if v > best {
            best = v;
            witness = Some(t);
        }
    }
    Ok(BiasReport {
        mode: BiasMode::Sampled,
        max_bias: best as f64 / size,
        witness,
        samples: Some(trials),
        per_weight_max: None,
    })
}

/// The i.i.d. baseline: `size` uniform `n`-bit elements, consuming exactly
/// `n·size` random bits. Every other construction is measured against this
/// one's randomness cost.
pub fn naive_random_set(
    n: usize,
    size: usize,
    epsilon: f64,
    src: &mut EntropySource,
) -> Result<CandidateSet> {
    if size == 0 {
        return Err(Error::InvalidParameter(
            "naive construction needs size >= 1".into(),
        ));
    }
    let before = src.bits_consumed();
    let elements: Vec<BitVector> = (0..size).map(|_| src.draw_bitvec(n)).collect();
    let params = vec![
        ("epsilon".into(), epsilon.to_string()),
        ("seed".into(), src.seed_hex().to_string()),
        ("generator".into(), crate::entropy::GENERATOR_ID.into()),
    ];
    let consumed = src.bits_consumed() - before;
    debug_assert_eq!(consumed, (n * size) as u64);
    CandidateSet::new(n, elements, method::NAIVE, params, consumed)
}

fn random_nonempty_subset(n: usize, src: &mut EntropySource) -> IndexSet {
    if n <= 63 {
        // Uniform over [1, 2^n - 1] in one draw.
        let mask = src.draw_mod((1u64 << n) - 1) + 1;
        return IndexSet::from_mask(BitVector::from_u64(n, mask)).unwrap();
    }
    loop {
        let mask = src.draw_bitvec(n);
        if !mask.is_zero() {
            return IndexSet::from_mask(mask).unwrap();
        }
    }
}

/// The linear-code view of a candidate set: the code spanned by the `n`
/// coordinate rows of the `n × |S|` matrix whose columns are the elements.
///
/// Bias and codeword weight are two views of one quantity: the codeword
/// generated by the rows in `T` has weight `(|S| - signed_sum(S, T)) / 2`.
#[derive(Debug, Clone)]
pub struct LinearCodeView {
    /// Code length = multiset size `|S|`.
    pub length: usize,
    /// Rank of the row space over GF(2) (at most `min(n, |S|)`).
    pub rank: usize,
    /// The `n` generator rows, each of length `|S|`.
    pub rows: Vec<BitVector>,
    /// Smallest weight over codewords from nonempty `T` (0 when some
    /// nonempty combination cancels, e.g. rank-deficient generators).
    pub min_weight: usize,
    /// Largest weight over codewords from nonempty `T`.
    pub max_weight: usize,
    /// Whether the weight extremes are exact (all `T` enumerated) or
    /// sampled lower/upper estimates.
    pub weights_exact: bool,
}

/// Number of subsets sampled for the weight extremes when `n` exceeds the
/// exact cutoff.
const WEIGHT_SAMPLE_TRIALS: u64 = 4096;

/// Builds the linear-code view of `S`. Weight extremes are exact for
/// `n <=` [`EXACT_MODE_MAX_N`], otherwise estimated from a fixed-seed sample
/// of subsets (deterministic across runs).
pub fn to_code(s: &CandidateSet) -> Result<LinearCodeView> {
    let size = s.size();
    let mut rows = Vec::with_capacity(s.n);
    for i in 0..s.n {
        let mut row = BitVector::zero(size);
        for (j, x) in s.elements.iter().enumerate() {
            if x.bit(i) {
                row.set_bit(j, true);
            }
        }
        rows.push(row);
    }
    let rank = gf2_rank(&rows, size);
    let (min_weight, max_weight, weights_exact) = if s.n <= EXACT_MODE_MAX_N {
        let hat = transformed_counts(s)?;
        let n64 = size as i64;
        let mut min_w = usize::MAX;
        let mut max_w = 0usize;
        for &v in hat.iter().skip(1) {
            // weight = (|S| - signed sum) / 2, always an integer.
            let w = ((n64 - v) / 2) as usize;
            min_w = min_w.min(w);
            max_w = max_w.max(w);
        }
        (min_w, max_w, true)
    } else {
        let mut src = EntropySource::from_seed_bytes(b"to_code weight sample");
        let mut min_w = usize::MAX;
        let mut max_w = 0usize;
        for _ in 0..WEIGHT_SAMPLE_TRIALS {
            let t = random_nonempty_subset(s.n, &mut src);
            let v = signed_sum(s, &t)?;
            let w = ((size as i64 - v) / 2) as usize;
            min_w = min_w.min(w);
            max_w = max_w.max(w);
        }
        (min_w, max_w, false)
    };
    Ok(LinearCodeView {
        length: size,
        rank,
        rows,
        min_weight,
        max_weight,
        weights_exact,
    })
}

fn gf2_rank(rows: &[BitVector], width: usize) -> usize {
    let mut work: Vec<BitVector> = rows.to_vec();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..work.len()).find(|&r| work[r].bit(col)) else {
            continue;
        };
        work.swap(rank, pivot);
        let pivot_row = work[rank].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r != rank && row.bit(col) {
                row.xor_assign(&pivot_row);
            }
        }
        rank += 1;
        if rank == work.len() {
            break;
        }
    }
    rank
}
