//! Construction and verification of small-bias sets over `F_2^n`.
//!
//! A multiset `S` of `n`-bit vectors is *ε-biased* when every nonzero parity
//! function is nearly balanced on it: for each nonempty `T ⊆ {1..n}`, the
//! average of `(-1)^(⊕_{i∈T} x_i)` over `x ∈ S` has magnitude at most `ε`.
//! Such sets substitute for uniform randomness in linear tests while being
//! exponentially smaller than `2^n`.
//!
//! The crate provides two randomness-efficient constructions of near-optimal
//! size `O(n/ε²)`, two baselines, and exact verification machinery:
//!
//! * [`code::construct_code_uniform`] — the columns of a random linear code
//!   generator matrix `(x, α₁·x, …, α_t·x)` with uniform `α_i ∈ F_{2^n}`.
//! * [`code::construct_code_nisan`] — the same code with the `α_i` produced
//!   by a Nisan-style space-bounded pseudorandom generator, cutting the seed
//!   from `m` bits to `O(n log(m/n))`.
//! * [`legendre::shifted_legendre_set`] — quadratic-character rows
//!   `(χ(x+s₁), …, χ(x+s_n))` over a short interval with random shifts `s_j`,
//!   needing only `n·⌈log₂ q⌉` random bits.
//! * [`legendre::aghp_set`] — the classical deterministic quadratic-character
//!   construction (zero random bits, quadratically larger sets).
//! * `construct --method naive` in the CLI — i.i.d. uniform sampling, the
//!   baseline every other method is measured against.
//!
//! Verification is exact for `n ≤ 28` via an integer Walsh–Hadamard transform
//! of the multiset's counting vector ([`bias::exact_max_bias`]), and sampled
//! beyond that. Every construction reports the exact number of random bits it
//! consumed, counted bit-by-bit by [`entropy::EntropySource`].
//!
//! Bit convention, used everywhere including the on-disk format: coordinate 1
//! of a vector is the least-significant bit, and coefficient `X^k` of a field
//! element is bit `k`.

use thiserror::Error;

pub mod bias;
pub mod code;
pub mod entropy;
pub mod gf2;
pub mod legendre;
pub mod nisan;
pub mod setfile;

/// Unified error type for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Field elements from structurally different fields were combined.
    #[error("mismatched field descriptors")]
    FieldMismatch,
    /// Extension degree outside the supported range `1..=65536`.
    #[error("unsupported extension degree {0} (supported: 1..=65536)")]
    UnsupportedDegree(usize),
    /// An index set that must be nonempty was empty.
    #[error("index set must be nonempty")]
    EmptyIndexSet,
    /// Exact bias verification requested above the enumeration cutoff.
    #[error("exact mode supports n <= {max}, got n = {n}", max = bias::EXACT_MODE_MAX_N)]
    ExactModeTooLarge { n: usize },
    /// A parameter failed validation; the message names the constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An exhaustive enumeration was requested beyond the supported budget.
    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLargeForExhaustion(String),
    /// No prime could be certified in the searched range.
    #[error("no certifiable prime found starting from {0} (range limit 2^63)")]
    PrimeSearchExhausted(u64),
    /// Character-sum brute force requested over too large a field.
    #[error("brute-force character sum supports q <= {max}, got q = {q}", max = legendre::WEIL_BRUTE_FORCE_MAX_Q)]
    FieldTooLargeForBruteForce { q: u64 },
    /// Shift re-draws kept colliding with a zero of the character.
    #[error("shift sampling exhausted {0} retries without avoiding character zeros")]
    ShiftRetriesExhausted(u32),
    /// A tail-bound series has ratio >= 1 and does not converge.
    #[error("union-bound series diverges: ratio {ratio} >= 1")]
    DivergentSeries { ratio: f64 },
    /// A set file could not be parsed; the message pinpoints the defect.
    #[error("set file parse error: {0}")]
    Parse(String),
    /// Underlying I/O failure while reading or writing a set file.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
