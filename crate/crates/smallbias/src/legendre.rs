//! Quadratic-character constructions over prime fields: the deterministic
//! character-window baseline ([`aghp_set`]), the randomized shifted variant
//! that needs only `n·⌈log₂ q⌉` bits ([`shifted_legendre_set`]), a
//! brute-force character-sum oracle ([`weil_sum`]), and the tail-bound
//! calculators backing the shifted construction's analysis.
//!
//! Character values map to bits as `+1 ↦ 0`, `−1 ↦ 1`, `0 ↦ 1` in both set
//! constructions.

use crate::bias::{method, CandidateSet};
use crate::entropy::{EntropySource, GENERATOR_ID};
use crate::gf2::BitVector;
use crate::{Error, Result};

/// Ceiling on `q` for brute-force character sums (a full pass over `F_q`).
pub const WEIL_BRUTE_FORCE_MAX_Q: u64 = 10_000_000;

/// Ceiling on constructed set sizes (`q` for the deterministic baseline,
/// `ℓ` for the shifted variant) so sets stay in memory.
pub const MAX_CONSTRUCTION_SIZE: u64 = 100_000_000;

/// Attempts before shift sampling gives up (each failure has probability
/// `≈ n·ℓ/q`, which the parameter derivation makes tiny).
pub const SHIFT_RETRY_CAP: u32 = 64;

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    base %= q;
    let mut acc = 1u64 % q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, q);
        }
        base = mulmod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for all `u64` inputs: trial division by the
/// first few primes, then strong-pseudoprime rounds with the fixed base set
/// {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}, which certifies every
/// integer below 2⁶⁴.
pub fn is_prime_u64(x: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if x < 2 {
        return false;
    }
    for p in SMALL {
        if x == p {
            return true;
        }
        if x.is_multiple_of(p) {
            return false;
        }
    }
    // x = d·2^s + 1 with d odd.
    let s = (x - 1).trailing_zeros();
    let d = (x - 1) >> s;
    'base: for a in SMALL {
        let mut y = powmod(a, d, x);
        if y == 1 || y == x - 1 {
            continue;
        }
        for _ in 1..s {
            y = mulmod(y, y, x);
            if y == x - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// An odd prime modulus `q < 2⁶³`, certified at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Certifies `q` as an odd prime below 2⁶³.
    pub fn new(q: u64) -> Result<PrimeField> {
        if !(3..1u64 << 63).contains(&q) {
            return Err(Error::InvalidParameter(format!(
                "field order must lie in [3, 2^63), got {q}"
            )));
        }
        if !is_prime_u64(q) {
            return Err(Error::InvalidParameter(format!("{q} is not prime")));
        }
        Ok(PrimeField { q })
    }

    /// The field order.
    pub fn order(&self) -> u64 {
        self.q
    }
}

/// The smallest certified prime `≥ x`; requires `x ≥ 3`, so the result is
/// always odd.
pub fn next_prime(x: u64) -> Result<PrimeField> {
    if x < 3 {
        return Err(Error::InvalidParameter(format!(
            "prime search starts at 3, got {x}"
        )));
    }
    let mut candidate = x | 1; // first odd ≥ x
    loop {
        if candidate >= 1 << 63 {
            return Err(Error::PrimeSearchExhausted(x));
        }
        if is_prime_u64(candidate) {
            return Ok(PrimeField { q: candidate });
        }
        candidate += 2;
    }
}

/// The quadratic character `χ(x)`: `+1` on nonzero squares, `−1` on
/// non-squares, `0` at zero. Computed as `x^((q−1)/2) mod q`; inputs are
/// reduced mod `q` first.
pub fn legendre_symbol(x: u64, field: &PrimeField) -> i32 {
    let q = field.q;
    let x = x % q;
    if x == 0 {
        return 0;
    }
    let e = powmod(x, (q - 1) / 2, q);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, q - 1);
        -1
    }
}

/// Character value to set bit: `+1 ↦ 0`, `−1 ↦ 1`, `0 ↦ 1`.
fn symbol_bit(sym: i32) -> bool {
    sym != 1
}

// --- dense polynomial arithmetic over F_q (little-endian coefficients) ---

fn poly_trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_reduce(coeffs: &[u64], q: u64) -> Vec<u64> {
    let mut p: Vec<u64> = coeffs.iter().map(|&c| c % q).collect();
    poly_trim(&mut p);
    p
}

fn poly_derivative(p: &[u64], q: u64) -> Vec<u64> {
    let mut d: Vec<u64> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(i as u64 % q, c, q))
        .collect();
    poly_trim(&mut d);
    d
}

/// Remainder of `a` modulo `b` over `F_q`; `b` must be nonzero.
fn poly_rem(mut a: Vec<u64>, b: &[u64], q: u64) -> Vec<u64> {
    debug_assert!(!b.is_empty());
    let lead_inv = powmod(*b.last().unwrap(), q - 2, q);
    while a.len() >= b.len() {
        let factor = mulmod(*a.last().unwrap(), lead_inv, q);
        let shift = a.len() - b.len();
        if factor != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let sub = mulmod(factor, bc, q);
                a[shift + i] = (a[shift + i] + q - sub) % q;
            }
        }
        debug_assert_eq!(*a.last().unwrap(), 0);
        a.pop();
        poly_trim(&mut a);
        if a.len() < b.len() {
            break;
        }
    }
    a
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> Vec<u64> {
    while !b.is_empty() {
        let r = poly_rem(a, &b, q);
        a = b;
        b = r;
    }
    a
}

/// Horner evaluation of `p` at `x` over `F_q`.
fn poly_eval(p: &[u64], x: u64, q: u64) -> u64 {
    let mut acc = 0u64;
    for &c in p.iter().rev() {
        acc = (mulmod(acc, x, q) + c) % q;
    }
    acc
}

/// `|Σ_{x∈F_q} χ(p(x))| / q` by direct summation; requires degree `≥ 1`
/// after reduction mod `q`, and `q ≤` [`WEIL_BRUTE_FORCE_MAX_Q`].
///
/// `coeffs[i]` is the coefficient of `xⁱ`. For squarefree `p` of degree `d`
/// the averaged sum is at most `(d−1)/√q`; [`is_squarefree`] decides whether
/// that bound applies.
pub fn weil_sum(coeffs: &[u64], field: &PrimeField) -> Result<f64> {
    let q = field.q;
    if q > WEIL_BRUTE_FORCE_MAX_Q {
        return Err(Error::FieldTooLargeForBruteForce { q });
    }
    let p = poly_reduce(coeffs, q);
    if p.len() < 2 {
        return Err(Error::InvalidParameter(
            "character-sum polynomial must have degree at least 1".into(),
        ));
    }
    let mut sum: i64 = 0;
    for x in 0..q {
        sum += legendre_symbol(poly_eval(&p, x, q), field) as i64;
    }
    Ok(sum.unsigned_abs() as f64 / q as f64)
}

/// Whether `p` (coefficients mod `q`) has no repeated irreducible factor,
/// decided by `gcd(p, p′)`. The zero polynomial is not squarefree; nonzero
/// constants are. A vanishing derivative on a nonconstant `p` means `p` is a
/// perfect `q`-th power, hence not squarefree.
pub fn is_squarefree(coeffs: &[u64], field: &PrimeField) -> bool {
    let q = field.q;
    let p = poly_reduce(coeffs, q);
    if p.is_empty() {
        return false;
    }
    if p.len() == 1 {
        return true;
    }
    let d = poly_derivative(&p, q);
    if d.is_empty() {
        return false;
    }
    poly_gcd(p, d, q).len() == 1
}

/// The deterministic character-window construction: `q = next_prime(⌈n²/ε²⌉)`
/// and one `n`-bit word per field element `x`, with bit `j` (0-based) the
/// mapped character value `χ((x + j + 1) mod q)`.
///
/// Uses zero random bits; the set has size `q ≈ n²/ε²`, quadratically larger
/// in `n` than the randomized constructions.
pub fn aghp_set(n: usize, epsilon: f64) -> Result<CandidateSet> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    let target = ((n * n) as f64 / (epsilon * epsilon)).ceil();
    if !target.is_finite() || target > MAX_CONSTRUCTION_SIZE as f64 {
        return Err(Error::InvalidParameter(format!(
            "derived set size ≈ {target} exceeds the in-memory limit {MAX_CONSTRUCTION_SIZE}"
        )));
    }
    let field = next_prime((target as u64).max(3))?;
    let q = field.order();
    let mut elements = Vec::with_capacity(q as usize);
    for x in 0..q {
        let mut w = BitVector::zero(n);
        for j in 0..n {
            let sym = legendre_symbol((x + j as u64 + 1) % q, &field);
            w.set_bit(j, symbol_bit(sym));
        }
        elements.push(w);
    }
    let params = vec![
        ("epsilon".into(), epsilon.to_string()),
        ("q".into(), q.to_string()),
    ];
    CandidateSet::new(n, elements, method::AGHP, params, 0)
}

/// Derived parameters and sampled shifts for the randomized character
/// construction.
#[derive(Debug, Clone)]
pub struct ShiftParams {
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Evaluation-window length `⌈6n/(δε²)⌉`; the set is indexed by
    /// `x ∈ {1, …, ell}`.
    pub ell: usize,
    /// Field of order `next_prime(⌈4(e·ell)²⌉)`.
    pub field: PrimeField,
    /// The `n` sampled shifts, each in `[0, q − ell)` so that `x + s_j`
    /// never vanishes mod `q` on the window.
    pub shifts: Vec<u64>,
    /// Exact bits consumed sampling the shifts (rejections included).
    pub random_bits: u64,
    pub seed_hex: String,
}

/// Computes `ell` and `q`, then samples the `n` shifts with `draw_mod(q)`.
///
/// A shift in `[q − ell, q − 1]` would put a character zero inside the
/// window, so any such draw triggers a full redraw of all `n` shifts
/// (keeping the shifts jointly uniform on the allowed box); after
/// [`SHIFT_RETRY_CAP`] failed rounds this errors out. Requires `0 < ε < 1`
/// and `0 < δ ≤ 1`.
pub fn derive_shift_params(
    n: usize,
    epsilon: f64,
    delta: f64,
    src: &mut EntropySource,
) -> Result<ShiftParams> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0,1], got {delta}"
        )));
    }
    let ell_raw = (6.0 * n as f64 / (delta * epsilon * epsilon)).ceil();
    if !ell_raw.is_finite() || ell_raw > MAX_CONSTRUCTION_SIZE as f64 {
        return Err(Error::InvalidParameter(format!(
            "derived window length ≈ {ell_raw} exceeds the in-memory limit {MAX_CONSTRUCTION_SIZE}"
        )));
    }
    let ell = ell_raw as usize;
    let q_target = (4.0 * (std::f64::consts::E * ell as f64).powi(2)).ceil() as u64;
    let field = next_prime(q_target.max(3))?;
    let q = field.order();
    debug_assert!(q > ell as u64);
    let before = src.bits_consumed();
    let mut shifts = Vec::with_capacity(n);
    for attempt in 0.. {
        if attempt == SHIFT_RETRY_CAP {
            return Err(Error::ShiftRetriesExhausted(SHIFT_RETRY_CAP));
        }
        shifts.clear();
        for _ in 0..n {
            shifts.push(src.draw_mod(q));
        }
        if shifts.iter().all(|&s| s < q - ell as u64) {
            break;
        }
    }
    Ok(ShiftParams {
        n,
        epsilon,
        delta,
        ell,
        field,
        shifts,
        random_bits: src.bits_consumed() - before,
        seed_hex: src.seed_hex().to_string(),
    })
}

/// The randomized character construction: one `n`-bit word per
/// `x ∈ {1, …, ell}` with bit `j` the mapped value `χ((x + s_j) mod q)`.
///
/// With the derived parameters the set is ε-biased with probability at least
/// `1 − δ` over the shifts, at size `ℓ = ⌈6n/(δε²)⌉` — within a constant of
/// the random-code construction — from only `n` field draws.
pub fn shifted_legendre_set(params: &ShiftParams) -> Result<CandidateSet> {
    let q = params.field.order();
    if params.shifts.len() != params.n {
        return Err(Error::DimensionMismatch {
            expected: params.n,
            got: params.shifts.len(),
        });
    }
    for &s in &params.shifts {
        if s >= q || s >= q - params.ell as u64 {
            return Err(Error::InvalidParameter(format!(
                "shift {s} puts a character zero inside the window (q = {q}, ell = {})",
                params.ell
            )));
        }
    }
    let mut elements = Vec::with_capacity(params.ell);
    for x in 1..=params.ell as u64 {
        let mut w = BitVector::zero(params.n);
        for (j, &s) in params.shifts.iter().enumerate() {
            let sym = legendre_symbol((x + s) % q, &params.field);
            w.set_bit(j, symbol_bit(sym));
        }
        elements.push(w);
    }
    let shift_list = params
        .shifts
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let header = vec![
        ("epsilon".into(), params.epsilon.to_string()),
        ("delta".into(), params.delta.to_string()),
        ("seed".into(), params.seed_hex.clone()),
        ("generator".into(), GENERATOR_ID.into()),
        ("ell".into(), params.ell.to_string()),
        ("q".into(), q.to_string()),
        ("shifts".into(), shift_list),
    ];
    CandidateSet::new(
        params.n,
        elements,
        method::LEGENDRE_SHIFT,
        header,
        params.random_bits,
    )
}

/// The 2k-th–moment tail bound on a single parity's bias over the window:
/// `√2·(2k/(e·ℓ))^k + (2k/√q)^t` where `t` is the parity's support size.
///
/// `n` does not enter the displayed form; the argument is kept so call sites
/// read like the surrounding derivations. Requires `k ≥ 1`, `t ≥ 1`.
pub fn moment_bound(_n: usize, ell: usize, q: u64, k: u32, t_size: u32) -> f64 {
    assert!(k >= 1 && t_size >= 1, "moment_bound needs k, t >= 1");
    assert!(ell >= 1 && q >= 1);
    let e = std::f64::consts::E;
    let first = std::f64::consts::SQRT_2 * (2.0 * k as f64 / (e * ell as f64)).powi(k as i32);
    let second = (2.0 * k as f64 / (q as f64).sqrt()).powi(t_size as i32);
    first + second
}

/// Both sides of the union-bound step: the finite geometric series actually
/// summed and the closed form it is compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct UnionBoundReport {
    /// `2·Σ_{w=1}^{n} r^w` with `r = 2n/(ℓε²)` — the quantity the failure
    /// probability is bounded by.
    pub series: f64,
    /// The closed form `(2δ/3)/(1 − δ/3)`, which equals the infinite series
    /// when `ℓ = 6n/(δε²)` exactly.
    pub closed_form: f64,
    /// The series ratio `r = 2n/(ℓε²)`; `δ/3` at the recommended `ℓ`.
    pub ratio: f64,
    /// True when `ℓ` is below the recommended `6n/(δε²)`, i.e. the series
    /// value may exceed `δ`.
    pub below_recommended: bool,
}

/// Sums the union bound over all `2ⁿ − 1` parities by support weight.
///
/// Errors when the ratio `2n/(ℓε²)` reaches 1 (the series diverges and
/// bounds nothing).
pub fn union_bound(n: usize, ell: usize, epsilon: f64, delta: f64) -> Result<UnionBoundReport> {
    if n < 1 || ell < 1 {
        return Err(Error::InvalidParameter("n and ell must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(
            "union_bound needs epsilon in (0,1) and delta in (0,1]".into(),
        ));
    }
    let ratio = 2.0 * n as f64 / (ell as f64 * epsilon * epsilon);
    if ratio >= 1.0 {
        return Err(Error::DivergentSeries { ratio });
    }
    let mut series = 0.0;
    let mut term = 1.0;
    for _ in 0..n {
        term *= ratio;
        series += term;
    }
    series *= 2.0;
    let closed_form = (2.0 * delta / 3.0) / (1.0 - delta / 3.0);
    let recommended = 6.0 * n as f64 / (delta * epsilon * epsilon);
    Ok(UnionBoundReport {
        series,
        closed_form,
        ratio,
        below_recommended: (ell as f64) < recommended,
    })
}

/// The pair-matching probability behind the moment bound's first term.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingProbability {
    /// `(2k−1)!! / ℓᵏ` — the exact probability that `2k` independent uniform
    /// window points collide in `k` pairs, summed over all pairings.
    pub exact: f64,
    /// The Stirling-form upper estimate `√2·(2k/(eℓ))ᵏ`.
    pub stirling_bound: f64,
}

/// Practical bound on `k` in [`matching_probability`] (the double factorial
/// overflows `f64` shortly beyond it).
pub const MATCHING_MAX_K: u32 = 150;

/// Computes the exact matching probability and its Stirling-form bound;
/// `exact ≤ stirling_bound` for every valid input. Requires `k ≥ 1`,
/// `ell ≥ 1`, `k ≤` [`MATCHING_MAX_K`].
pub fn matching_probability(k: u32, ell: usize) -> Result<MatchingProbability> {
    if k < 1 || ell < 1 {
        return Err(Error::InvalidParameter(
            "matching_probability needs k >= 1 and ell >= 1".into(),
        ));
    }
    if k > MATCHING_MAX_K {
        return Err(Error::InvalidParameter(format!(
            "k = {k} exceeds the double-factorial range (max {MATCHING_MAX_K})"
        )));
    }
    let mut double_factorial = 1.0f64;
    for i in 1..=k as u64 {
        double_factorial *= (2 * i - 1) as f64;
    }
    let exact = double_factorial / (ell as f64).powi(k as i32);
    let e = std::f64::consts::E;
    let stirling_bound =
        std::f64::consts::SQRT_2 * (2.0 * k as f64 / (e * ell as f64)).powi(k as i32);
    Ok(MatchingProbability {
        exact,
        stirling_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bias::exact_max_bias;
    use rand_core::{RngCore, SeedableRng};

    fn rng(tag: u8) -> rand_chacha::ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[0] = tag;
        rand_chacha::ChaCha8Rng::from_seed(seed)
    }

    fn trial_division(x: u64) -> bool {
        if x < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= x {
            if x.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn primality_matches_trial_division() {
        for x in 0..2000 {
            assert_eq!(is_prime_u64(x), trial_division(x), "x = {x}");
        }
        // Strong-pseudoprime traps and a few large knowns.
        assert!(!is_prime_u64(2047)); // 23 * 89, fools base 2 alone
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(!is_prime_u64(3215031751)); // fools bases {2,3,5,7}
        assert!(is_prime_u64(1_000_003));
        assert!(is_prime_u64(4_358_257));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(u64::MAX)); // 3 * 5 * 17 * ...
    }

    #[test]
    fn next_prime_examples() {
        assert_eq!(next_prime(10).unwrap().order(), 11);
        assert_eq!(next_prime(7919).unwrap().order(), 7919);
        assert_eq!(next_prime(3).unwrap().order(), 3);
        assert_eq!(next_prime(14).unwrap().order(), 17);
        assert_eq!(next_prime(4_358_243).unwrap().order(), 4_358_257);
        assert!(next_prime(2).is_err());
        assert!(next_prime(0).is_err());
        let mut r = rng(1);
        for _ in 0..50 {
            let x = 3 + r.next_u64() % 1_000_000;
            let q = next_prime(x).unwrap().order();
            assert!(q >= x && q % 2 == 1 && q > 2 && is_prime_u64(q));
        }
    }

    #[test]
    fn prime_field_certifies() {
        assert!(PrimeField::new(31).is_ok());
        assert!(PrimeField::new(2).is_err()); // even
        assert!(PrimeField::new(9).is_err()); // composite
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(1 << 63).is_err()); // out of range
    }

    #[test]
    fn symbol_examples_and_zero() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(legendre_symbol(0, &f7), 0);
        assert_eq!(legendre_symbol(2, &f7), 1); // squares mod 7: {1, 2, 4}
        assert_eq!(legendre_symbol(3, &f7), -1);
        assert_eq!(legendre_symbol(7 + 2, &f7), 1); // reduced first
    }

    #[test]
    fn symbol_matches_square_enumeration_small_fields() {
        for q in (3..=97).filter(|&q| is_prime_u64(q)) {
            let field = PrimeField::new(q).unwrap();
            let mut squares = vec![false; q as usize];
            for x in 1..q {
                squares[mulmod(x, x, q) as usize] = true;
            }
            for x in 0..q {
                let expect = if x == 0 {
                    0
                } else if squares[x as usize] {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_symbol(x, &field), expect, "q={q} x={x}");
            }
        }
    }

    #[test]
    fn symbol_is_multiplicative() {
        let field = PrimeField::new(1_000_003).unwrap();
        let q = field.order();
        let mut r = rng(2);
        for _ in 0..2000 {
            let x = 1 + r.next_u64() % (q - 1);
            let y = 1 + r.next_u64() % (q - 1);
            assert_eq!(
                legendre_symbol(mulmod(x, y, q), &field),
                legendre_symbol(x, &field) * legendre_symbol(y, &field)
            );
        }
    }

    #[test]
    fn weil_sum_examples() {
        let f101 = PrimeField::new(101).unwrap();
        // p(x) = x: the full character sum vanishes.
        assert_eq!(weil_sum(&[0, 1], &f101).unwrap(), 0.0);
        // p(x) = x²: χ(x²) = 1 except at 0.
        let v = weil_sum(&[0, 0, 1], &f101).unwrap();
        assert!((v - 100.0 / 101.0).abs() < 1e-15);
        // q = 5, p(x) = x(x+1): values χ(0),χ(2),χ(1),χ(2),χ(0) = 0,-1,1,-1,0.
        let f5 = PrimeField::new(5).unwrap();
        let v = weil_sum(&[0, 1, 1], &f5).unwrap();
        assert!((v - 0.2).abs() < 1e-15);
        assert!(v <= 1.0 / 5.0f64.sqrt());
    }

    #[test]
    fn weil_sum_rejects_bad_inputs() {
        let f5 = PrimeField::new(5).unwrap();
        assert!(weil_sum(&[3], &f5).is_err()); // constant
        assert!(weil_sum(&[1, 5, 10], &f5).is_err()); // degree collapses mod 5
        let big = next_prime(WEIL_BRUTE_FORCE_MAX_Q + 1).unwrap();
        assert!(matches!(
            weil_sum(&[0, 1], &big),
            Err(Error::FieldTooLargeForBruteForce { .. })
        ));
    }

    /// Brute-force squarefreeness for tiny fields: search for a monic square
    /// g² (deg g ≥ 1) dividing p.
    fn squarefree_by_search(p: &[u64], q: u64) -> bool {
        let p = poly_reduce(p, q);
        if p.is_empty() {
            return false;
        }
        let deg_p = p.len() - 1;
        // Enumerate monic g of degree 1..=deg_p/2 by odometer over coefficients.
        for dg in 1..=deg_p / 2 {
            let mut coeffs = vec![0u64; dg];
            loop {
                let mut g: Vec<u64> = coeffs.clone();
                g.push(1); // monic
                // g²
                let mut g2 = vec![0u64; 2 * dg + 1];
                for (i, &a) in g.iter().enumerate() {
                    for (j, &b) in g.iter().enumerate() {
                        g2[i + j] = (g2[i + j] + mulmod(a, b, q)) % q;
                    }
                }
                if poly_rem(p.clone(), &g2, q).is_empty() {
                    return false;
                }
                // Next coefficient vector.
                let mut pos = 0;
                loop {
                    if pos == dg {
                        break;
                    }
                    coeffs[pos] += 1;
                    if coeffs[pos] < q {
                        break;
                    }
                    coeffs[pos] = 0;
                    pos += 1;
                }
                if pos == dg {
                    break;
                }
            }
        }
        true
    }

    #[test]
    fn squarefree_known_cases() {
        let f5 = PrimeField::new(5).unwrap();
        assert!(is_squarefree(&[0, 1, 1], &f5)); // x(x+1)
        assert!(!is_squarefree(&[0, 0, 1], &f5)); // x²
        assert!(!is_squarefree(&[1, 2, 1], &f5)); // (x+1)²
        assert!(is_squarefree(&[1, 1, 0, 1], &f5)); // x³+x+1
        assert!(is_squarefree(&[2], &f5)); // nonzero constant
        assert!(!is_squarefree(&[0], &f5)); // zero polynomial
        assert!(!is_squarefree(&[], &f5));
        // Vanishing derivative: x³ + 1 = (x+1)³ over F₃.
        let f3 = PrimeField::new(3).unwrap();
        assert!(!is_squarefree(&[1, 0, 0, 1], &f3));
    }

    #[test]
    fn squarefree_matches_exhaustive_divisor_search() {
        let mut r = rng(3);
        for &q in &[3u64, 5, 7] {
            let field = PrimeField::new(q).unwrap();
            for _ in 0..60 {
                let deg = 2 + (r.next_u64() % 3) as usize; // 2..=4
                let mut p: Vec<u64> = (0..deg).map(|_| r.next_u64() % q).collect();
                p.push(1 + r.next_u64() % (q - 1)); // nonzero leading coeff
                assert_eq!(
                    is_squarefree(&p, &field),
                    squarefree_by_search(&p, q),
                    "q={q} p={p:?}"
                );
            }
        }
    }

    #[test]
    fn weil_bound_holds_for_random_squarefree_polys() {
        let field = PrimeField::new(101).unwrap();
        let q = 101u64;
        let mut r = rng(4);
        let mut checked = 0;
        while checked < 100 {
            let deg = 2 + (r.next_u64() % 5) as usize; // 2..=6
            let mut p: Vec<u64> = (0..deg).map(|_| r.next_u64() % q).collect();
            p.push(1); // monic
            if !is_squarefree(&p, &field) {
                continue;
            }
            let v = weil_sum(&p, &field).unwrap();
            assert!(
                v <= deg as f64 / (q as f64).sqrt() + 1e-12,
                "deg={deg} p={p:?} v={v}"
            );
            checked += 1;
        }
    }

    #[test]
    fn aghp_worked_example() {
        let set = aghp_set(6, 0.7).unwrap();
        let q = 79.0f64;
        assert_eq!(set.size(), 79); // next_prime(ceil(36/0.49) = 74) = 79
        assert_eq!(set.random_bits, 0);
        assert_eq!(set.method, method::AGHP);
        assert_eq!(
            set.params.iter().find(|(k, _)| k == "q").map(|(_, v)| v.as_str()),
            Some("79")
        );
        let bound = 6.0 / q.sqrt() + 6.0 / q;
        assert!((bound - 0.7510021076442219).abs() < 1e-15);
        let report = exact_max_bias(&set).unwrap();
        assert!(report.max_bias <= bound + 1e-12, "bias {}", report.max_bias);
    }

    #[test]
    fn aghp_bits_match_symbol_oracle() {
        let set = aghp_set(4, 0.7).unwrap();
        let field = PrimeField::new(37).unwrap(); // next_prime(ceil(16/0.49) = 33)
        assert_eq!(set.size(), 37);
        for (x, w) in set.elements().iter().enumerate() {
            for j in 0..4 {
                let sym = legendre_symbol((x as u64 + j as u64 + 1) % 37, &field);
                assert_eq!(w.bit(j), sym != 1, "x={x} j={j}");
            }
        }
        let report = exact_max_bias(&set).unwrap();
        assert!(report.max_bias <= 4.0 / 37.0f64.sqrt() + 4.0 / 37.0 + 1e-12);
    }

    #[test]
    fn aghp_validation_and_tiny_case() {
        assert!(aghp_set(0, 0.5).is_err());
        assert!(aghp_set(4, 0.0).is_err());
        assert!(aghp_set(4, 1.0).is_err());
        assert!(aghp_set(30, 1e-6).is_err()); // size guard
        let set = aghp_set(1, 0.9).unwrap(); // target 2 clamps to q = 3
        assert_eq!(set.size(), 3);
    }

    #[test]
    fn shift_params_worked_example() {
        let mut src = EntropySource::from_seed_hex("07").unwrap();
        let p = derive_shift_params(8, 0.5, 0.5, &mut src).unwrap();
        assert_eq!(p.ell, 384); // ceil(6*8 / (0.5 * 0.25))
        assert_eq!(p.field.order(), 4_358_257); // next_prime(ceil(4(e*384)^2))
        assert_eq!(p.shifts.len(), 8);
        assert!(p.shifts.iter().all(|&s| s < 4_358_257 - 384));
        // Exact accounting, within 2x of the no-rejection cost.
        assert_eq!(p.random_bits, src.bits_consumed());
        assert!(p.random_bits <= 2 * 8 * 23); // ceil(log2 q) = 23
        // Determinism.
        let mut src2 = EntropySource::from_seed_hex("07").unwrap();
        let p2 = derive_shift_params(8, 0.5, 0.5, &mut src2).unwrap();
        assert_eq!(p.shifts, p2.shifts);
        assert_eq!(p.random_bits, p2.random_bits);
    }

    #[test]
    fn shift_params_validation() {
        let mut src = EntropySource::from_seed_bytes(b"x");
        assert!(derive_shift_params(0, 0.5, 0.5, &mut src).is_err());
        assert!(derive_shift_params(8, 0.0, 0.5, &mut src).is_err());
        assert!(derive_shift_params(8, 1.0, 0.5, &mut src).is_err());
        assert!(derive_shift_params(8, 0.5, 0.0, &mut src).is_err());
        assert!(derive_shift_params(8, 0.5, 1.5, &mut src).is_err());
        assert!(derive_shift_params(8, 1e-4, 1e-4, &mut src).is_err()); // size guard
    }

    #[test]
    fn shifted_set_matches_symbol_oracle() {
        let mut src = EntropySource::from_seed_bytes(b"legendre spot");
        let p = derive_shift_params(8, 0.5, 0.5, &mut src).unwrap();
        let set = shifted_legendre_set(&p).unwrap();
        assert_eq!(set.size(), 384);
        assert_eq!(set.method, method::LEGENDRE_SHIFT);
        assert_eq!(set.random_bits, p.random_bits);
        let q = p.field.order();
        let mut r = rng(5);
        for _ in 0..200 {
            let xi = (r.next_u64() % 384) as usize;
            let j = (r.next_u64() % 8) as usize;
            let x = xi as u64 + 1;
            let sym = legendre_symbol((x + p.shifts[j]) % q, &p.field);
            assert_eq!(set.elements()[xi].bit(j), sym != 1);
        }
        let shifts_param = set
            .params
            .iter()
            .find(|(k, _)| k == "shifts")
            .map(|(_, v)| v.clone())
            .unwrap();
        let parsed: Vec<u64> = shifts_param.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(parsed, p.shifts);
    }

    #[test]
    fn shifted_set_rejects_zero_collisions() {
        let field = PrimeField::new(31).unwrap();
        let params = ShiftParams {
            n: 2,
            epsilon: 0.5,
            delta: 0.5,
            ell: 5,
            field,
            shifts: vec![30, 3], // 30 >= 31 - 5: x = 1 makes x + s ≡ 0
            random_bits: 0,
            seed_hex: String::new(),
        };
        assert!(shifted_legendre_set(&params).is_err());
        let ok = ShiftParams {
            shifts: vec![7, 3],
            ..params
        };
        let set = shifted_legendre_set(&ok).unwrap();
        assert_eq!(set.size(), 5);
    }

    #[test]
    fn moment_bound_frozen_value_and_monotonicity() {
        let v = moment_bound(8, 384, 4_358_257, 1, 1);
        assert!((v - 0.0036677057929694326).abs() < 1e-15, "v = {v}");
        let mut last = v;
        for q in [8_000_000u64, 16_000_000, 64_000_000] {
            let w = moment_bound(8, 384, q, 1, 1);
            assert!(w < last);
            last = w;
        }
    }

    #[test]
    fn moment_bound_markov_form_comparison() {
        // At k = |T| and q ≥ 4(eℓ)², dividing the moment bound by ε^(2k)
        // stays below the displayed simplification 2(2k/(eℓε²))^k.
        let e = std::f64::consts::E;
        for &ell in &[50usize, 384, 1000] {
            let q = (4.0 * (e * ell as f64).powi(2)).ceil() as u64;
            for k in 1..=6u32 {
                for &eps in &[0.25f64, 0.5] {
                    let markov =
                        moment_bound(8, ell, q, k, k) / eps.powi(2 * k as i32);
                    let displayed =
                        2.0 * (2.0 * k as f64 / (e * ell as f64 * eps * eps)).powi(k as i32);
                    assert!(
                        markov <= displayed * (1.0 + 1e-12),
                        "ell={ell} k={k} eps={eps}: {markov} vs {displayed}"
                    );
                }
            }
        }
    }

    #[test]
    fn union_bound_frozen_values() {
        // ℓ = 6n/(δε²) for n=8, ε=0.5 at three δ values.
        let r = union_bound(8, 384, 0.5, 0.5).unwrap();
        assert!((r.series - 0.39999976185032765).abs() < 1e-12);
        assert!((r.ratio - 0.5 / 3.0).abs() < 1e-15);
        assert!((r.closed_form - 0.4).abs() < 1e-12);
        assert!(r.series <= 0.5 && !r.below_recommended);

        let r = union_bound(8, 1920, 0.5, 0.1).unwrap();
        assert!((r.series - 0.0689655172412742).abs() < 1e-12);
        assert!(r.series <= 0.1 && !r.below_recommended);

        let r = union_bound(8, 192, 0.5, 1.0).unwrap();
        assert!((r.series - 0.9998475842097241).abs() < 1e-12);
        assert!(r.series <= 1.0 && !r.below_recommended);
        assert!((r.closed_form - 1.0).abs() < 1e-12);
    }

    #[test]
    fn union_bound_flags_and_divergence() {
        // Below-recommended window: flag set, series may exceed δ.
        let r = union_bound(8, 200, 0.5, 0.5).unwrap();
        assert!(r.below_recommended);
        // Ratio ≥ 1 diverges.
        assert!(matches!(
            union_bound(8, 32, 0.5, 0.5),
            Err(Error::DivergentSeries { .. })
        ));
        assert!(union_bound(8, 0, 0.5, 0.5).is_err());
        assert!(union_bound(8, 384, 0.5, 0.0).is_err());
    }

    #[test]
    fn union_bound_series_below_closed_form_at_recommended_ell() {
        for &(n, eps, delta) in &[(4usize, 0.3f64, 0.2f64), (8, 0.5, 0.5), (12, 0.7, 1.0)] {
            let ell = (6.0 * n as f64 / (delta * eps * eps)).ceil() as usize;
            let r = union_bound(n, ell, eps, delta).unwrap();
            assert!(r.series <= r.closed_form + 1e-12);
            assert!(r.series <= delta + 1e-12);
            assert!(!r.below_recommended);
        }
    }

    #[test]
    fn matching_probability_examples_and_bound() {
        let m = matching_probability(1, 384).unwrap();
        assert_eq!(m.exact, 1.0 / 384.0);
        let m = matching_probability(2, 384).unwrap();
        assert!((m.exact - 3.0 / (384.0 * 384.0)).abs() < 1e-20);
        for &ell in &[10usize, 100, 1000] {
            for k in 1..=20u32 {
                let m = matching_probability(k, ell).unwrap();
                assert!(
                    m.exact <= m.stirling_bound,
                    "k={k} ell={ell}: {} vs {}",
                    m.exact,
                    m.stirling_bound
                );
            }
        }
        assert!(matching_probability(0, 10).is_err());
        assert!(matching_probability(1, 0).is_err());
        assert!(matching_probability(MATCHING_MAX_K + 1, 10).is_err());
    }
}
