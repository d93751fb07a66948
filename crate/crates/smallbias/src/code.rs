//! The concatenated linear code `w_x = (x, α₁x, …, α_tx)` over `F_{2^n}` and
//! the small-bias sets read off its generator matrix columns.
//!
//! With `m = t·n ≈ A·n/ε²` check bits, a uniformly random multiplier tuple
//! `α` gives every nonzero codeword weight within `ε(n+m)/2` of the midpoint
//! with high probability, which is exactly the statement that the `n+m`
//! columns of the generator matrix form an ε-biased set. The multipliers can
//! come from `m` truly uniform bits ([`construct_code_uniform`]) or from a
//! short pseudorandom seed ([`construct_code_nisan`]) — the weight check is a
//! tiny streaming state machine ([`run_weight_program`]), which is what makes
//! a space-bounded generator sufficient.

use crate::bias::{method, CandidateSet};
use crate::entropy::{EntropySource, GENERATOR_ID};
use crate::gf2::{field_mul, project, BitVector, FieldElement, FieldSpec};
use crate::nisan;
use crate::{Error, Result};

/// Lower bound for the expansion constant `A` (exclusive): `2 ln 2`.
pub const MIN_A: f64 = 2.0 * std::f64::consts::LN_2;

/// Derived shape of the code for a target dimension and bias.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeParams {
    pub n: usize,
    pub epsilon: f64,
    /// Expansion constant; the check-bit count is `⌈A·n/ε²⌉` before rounding.
    pub a_const: f64,
    /// Check bits, rounded up to a multiple of `n` so blocks are whole.
    pub m: usize,
    /// Number of multiplier blocks, `m / n`.
    pub t: usize,
    /// Acceptance threshold `⌈(1−ε)(n+m)/2⌉` on codeword weight.
    pub threshold: usize,
}

/// Practical ceiling on the derived code length `n + m`.
const MAX_CODE_LENGTH: f64 = (1u64 << 32) as f64;

/// Computes the code shape for `(n, ε, A)`.
///
/// Requires `n ≥ 1`, `0 < ε < 1`, and `A > 2 ln 2` (the constant below which
/// the failure bound's exponent stops being negative asymptotically).
pub fn derive_params(n: usize, epsilon: f64, a_const: f64) -> Result<CodeParams> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    if !a_const.is_finite() || a_const <= MIN_A {
        return Err(Error::InvalidParameter(format!(
            "A must exceed 2 ln 2 ≈ {MIN_A:.6}, got {a_const}"
        )));
    }
    let m_raw = (a_const * n as f64 / (epsilon * epsilon)).ceil();
    if !m_raw.is_finite() || m_raw + n as f64 > MAX_CODE_LENGTH {
        return Err(Error::InvalidParameter(format!(
            "derived code length n + m ≈ {m_raw} exceeds practical limits"
        )));
    }
    let t = (m_raw as usize).div_ceil(n);
    let m = t * n;
    let threshold = ((1.0 - epsilon) * ((n + m) as f64) / 2.0).ceil() as usize;
    Ok(CodeParams {
        n,
        epsilon,
        a_const,
        m,
        t,
        threshold,
    })
}

fn check_alphas(n: usize, alphas: &[FieldElement]) -> Result<()> {
    if alphas.is_empty() {
        return Err(Error::InvalidParameter(
            "the code needs at least one multiplier block".into(),
        ));
    }
    for a in alphas {
        if a.field().degree() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.field().degree(),
            });
        }
    }
    Ok(())
}

/// The codeword `w_x = (x, α₁x, …, α_tx)` of dimension `n + t·n`.
pub fn codeword(x: &BitVector, alphas: &[FieldElement]) -> Result<BitVector> {
    let n = x.len();
    check_alphas(n, alphas)?;
    let t = alphas.len();
    let mut w = BitVector::zero(n + t * n);
    w.write_block(0, x);
    let spec = alphas[0].field();
    let xe = FieldElement::from_bits(spec, x)?;
    for (i, a) in alphas.iter().enumerate() {
        let product = project(&field_mul(a, &xe)?, n)?;
        w.write_block((i + 1) * n, &product);
    }
    Ok(w)
}

/// Runs the streaming weight checker: start at `|x|`, add `|αᵢx|` per block,
/// accept when the final state reaches the threshold.
///
/// Returns `(final_state, accepts)`; the final state always equals the full
/// codeword's Hamming weight. Rejects `x = 0` (the weight statement concerns
/// nonzero messages).
pub fn run_weight_program(
    x: &BitVector,
    alphas: &[FieldElement],
    params: &CodeParams,
) -> Result<(usize, bool)> {
    if x.is_zero() {
        return Err(Error::InvalidParameter(
            "the weight program is defined for nonzero x".into(),
        ));
    }
    if x.len() != params.n {
        return Err(Error::DimensionMismatch {
            expected: params.n,
            got: x.len(),
        });
    }
    if alphas.len() != params.t {
        return Err(Error::DimensionMismatch {
            expected: params.t,
            got: alphas.len(),
        });
    }
    check_alphas(params.n, alphas)?;
    let spec = alphas[0].field();
    let xe = FieldElement::from_bits(spec, x)?;
    let mut state = x.weight();
    for a in alphas {
        state += field_mul(a, &xe)?.to_bits().weight();
    }
    Ok((state, state >= params.threshold))
}

/// The candidate set read off the code: the `n + m` columns of the
/// `n × (n+m)` generator matrix whose row `i` is `codeword(eᵢ, α)`.
///
/// The first `n` columns are `e₁..e_n` (every codeword starts with `x`
/// itself), and the signed bias of the set on `T` equals
/// `1 − 2·wt(c_T)/(n+m)` where `c_T = codeword(mask of T, α)` — the duality
/// the verifier leans on. Metadata is left generic; the `construct_*`
/// wrappers fill in method, parameters, and the bit count.
pub fn biased_set_from_alphas(
    params: &CodeParams,
    alphas: &[FieldElement],
) -> Result<CandidateSet> {
    if alphas.len() != params.t {
        return Err(Error::DimensionMismatch {
            expected: params.t,
            got: alphas.len(),
        });
    }
    let n = params.n;
    let length = n + params.m;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = BitVector::zero(n);
        e.set_bit(i, true);
        rows.push(codeword(&e, alphas)?);
    }
    let mut columns = Vec::with_capacity(length);
    for j in 0..length {
        let mut col = BitVector::zero(n);
        for (i, row) in rows.iter().enumerate() {
            if row.bit(j) {
                col.set_bit(i, true);
            }
        }
        columns.push(col);
    }
    CandidateSet::new(n, columns, "code-alphas", vec![], 0)
}

fn base_params(params: &CodeParams, src: &EntropySource) -> Vec<(String, String)> {
    vec![
        ("epsilon".into(), params.epsilon.to_string()),
        ("seed".into(), src.seed_hex().to_string()),
        ("generator".into(), GENERATOR_ID.into()),
        ("A".into(), params.a_const.to_string()),
        ("m".into(), params.m.to_string()),
        ("t".into(), params.t.to_string()),
        ("threshold".into(), params.threshold.to_string()),
    ]
}

/// Construction with truly uniform multipliers: draws `t·n = m` bits.
pub fn construct_code_uniform(
    n: usize,
    epsilon: f64,
    a_const: f64,
    src: &mut EntropySource,
) -> Result<CandidateSet> {
    let params = derive_params(n, epsilon, a_const)?;
    let spec = FieldSpec::shared(n)?;
    let before = src.bits_consumed();
    let mut alphas = Vec::with_capacity(params.t);
    for _ in 0..params.t {
        alphas.push(FieldElement::from_bits(&spec, &src.draw_bitvec(n))?);
    }
    let mut set = biased_set_from_alphas(&params, &alphas)?;
    set.method = method::CODE_UNIFORM.into();
    set.params = base_params(&params, src);
    set.random_bits = src.bits_consumed() - before;
    Ok(set)
}

/// Construction with multipliers from the recursive generator: draws only
/// the `b·(2⌈log₂ t⌉+1)`-bit seed, expands to `t` blocks of `b ≥ n` bits,
/// and keeps the low `n` bits of each block as `αᵢ`.
pub fn construct_code_nisan(
    n: usize,
    epsilon: f64,
    a_const: f64,
    b: usize,
    src: &mut EntropySource,
) -> Result<CandidateSet> {
    let params = derive_params(n, epsilon, a_const)?;
    if b < n {
        return Err(Error::InvalidParameter(format!(
            "block size b = {b} must be at least n = {n}"
        )));
    }
    let k = nisan::ceil_log2(params.t);
    let spec = FieldSpec::shared(n)?;
    let before = src.bits_consumed();
    let seed = nisan::sample_seed(b, params.t, src)?;
    let blocks = nisan::expand(&seed, k)?;
    let mut alphas = Vec::with_capacity(params.t);
    for blk in blocks.iter().take(params.t) {
        alphas.push(FieldElement::from_bits(&spec, &blk.truncated(n))?);
    }
    let mut set = biased_set_from_alphas(&params, &alphas)?;
    set.method = method::CODE_NISAN.into();
    set.params = base_params(&params, src);
    set.params.push(("b".into(), b.to_string()));
    set.params.push(("k".into(), k.to_string()));
    set.random_bits = src.bits_consumed() - before;
    Ok(set)
}

/// Whether `(n, t)` sits inside the generator analysis' stated regime
/// `t ≤ 2^(n/20)`. Desk-scale parameters usually do not; the construction
/// still runs (the guarantee is asymptotic), and callers may surface this as
/// a notice.
pub fn prg_regime_ok(n: usize, t: usize) -> bool {
    (t as f64).log2() <= n as f64 / 20.0
}

/// Probability bound for a uniform multiplier tuple failing the two-sided
/// weight condition: `n² · exp(n ln 2 − (ε²/2)(n+m))`, clamped to `[0,1]`.
pub fn failure_bound(n: usize, m: usize, epsilon: f64) -> f64 {
    assert!(
        epsilon > 0.0 && epsilon < 1.0,
        "failure_bound requires epsilon in (0,1)"
    );
    let nf = n as f64;
    let exponent = nf * std::f64::consts::LN_2
        - (epsilon * epsilon / 2.0) * ((n + m) as f64);
    (nf * nf * exponent.exp()).clamp(0.0, 1.0)
}

/// Natural-log binary entropy `h(δ) = −δ ln δ − (1−δ) ln(1−δ)`, with the
/// endpoint values `h(0) = h(1) = 0` by continuity.
pub fn entropy_h(delta: f64) -> f64 {
    assert!((0.0..=1.0).contains(&delta), "entropy_h requires 0 <= delta <= 1");
    if delta == 0.0 || delta == 1.0 {
        return 0.0;
    }
    -delta * delta.ln() - (1.0 - delta) * (1.0 - delta).ln()
}
