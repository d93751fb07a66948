//! Vectors over GF(2), parity evaluation, and binary extension fields.
//!
//! Conventions fixed here and relied on by every other module:
//!
//! * Coordinate `i` of an n-bit vector (1-based in mathematical notation) is
//!   stored as bit `i-1`, counting from the least-significant bit of word 0.
//! * A field element of `F_{2^m}` is a polynomial residue; bit `k` holds the
//!   coefficient of `X^k`.
//! * Each degree `m` gets one canonical modulus: the irreducible polynomial
//!   whose bit pattern, read as an integer, is smallest.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

const WORD_BITS: usize = 64;

/// Highest supported extension degree for `F_{2^m}`.
pub const MAX_FIELD_DEGREE: usize = 1 << 16;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A vector in `F_2^n`, bit-packed into 64-bit words.
///
/// Bit `i` (0-based) of the vector is bit `i % 64` of word `i / 64`; all bits
/// at positions `>= n` are kept zero so equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    n: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// The zero vector of length `n`.
    pub fn zero(n: usize) -> Self {
        BitVector {
            n,
            words: vec![0u64; words_for(n)],
        }
    }

    /// Builds a vector of length `n <= 64` from the low bits of `value`.
    ///
    /// Panics if `value` has bits at or above position `n`.
    pub fn from_u64(n: usize, value: u64) -> Self {
        assert!(n <= 64, "from_u64 supports n <= 64");
        if n < 64 {
            assert!(value >> n == 0, "value has bits above position n");
        }
        let mut v = BitVector::zero(n);
        if n > 0 {
            v.words[0] = value;
        }
        v
    }

    /// Length `n` of the vector.
    pub fn len(&self) -> usize {
        self.n
    }

    /// True when the vector has length zero.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Bit at 0-based position `i`.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.n, "bit index {i} out of range for length {}", self.n);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// Sets the bit at 0-based position `i`.
    pub fn set_bit(&mut self, i: usize, value: bool) {
        assert!(i < self.n, "bit index {i} out of range for length {}", self.n);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    /// Hamming weight: the number of 1 bits.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when every coordinate is zero.
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Weight of the AND with `other` (same length required).
    pub fn and_weight(&self, other: &BitVector) -> usize {
        assert_eq!(self.n, other.n, "and_weight requires equal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// XORs `other` into `self` (same length required).
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.n, other.n, "xor requires equal lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// The vector as a `u64`; requires `n <= 64`.
    pub fn as_u64(&self) -> u64 {
        assert!(self.n <= 64, "as_u64 requires n <= 64");
        if self.n == 0 {
            0
        } else {
            self.words[0]
        }
    }

    /// Copies the bits of `src` into `self` starting at position `offset`.
    pub fn write_block(&mut self, offset: usize, src: &BitVector) {
        assert!(offset + src.n <= self.n, "block exceeds vector length");
        for i in 0..src.n {
            self.set_bit(offset + i, src.bit(i));
        }
    }

    /// The sub-vector of the first `k` bits.
    pub fn truncated(&self, k: usize) -> BitVector {
        assert!(k <= self.n, "cannot truncate to a longer vector");
        let mut out = BitVector::zero(k);
        for i in 0..k {
            out.set_bit(i, self.bit(i));
        }
        out
    }

    /// Lowercase hex encoding, `ceil(n/4)` digits, most-significant first.
    ///
    /// Nibble boundaries follow bit positions: digit `j` from the right holds
    /// bits `4j .. 4j+4`. This is the body encoding of the set-file format.
    pub fn to_hex(&self) -> String {
        let digits = self.n.div_ceil(4);
        let mut s = String::with_capacity(digits);
        for j in (0..digits).rev() {
            let mut nibble = 0u8;
            for b in 0..4 {
                let i = 4 * j + b;
                if i < self.n && self.bit(i) {
                    nibble |= 1 << b;
                }
            }
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
    }

    /// Parses the encoding produced by [`BitVector::to_hex`].
    pub fn from_hex(n: usize, s: &str) -> Result<BitVector> {
        let digits = n.div_ceil(4);
        if s.len() != digits {
            return Err(Error::Parse(format!(
                "expected {digits} hex digits for n = {n}, got {}",
                s.len()
            )));
        }
        let mut v = BitVector::zero(n);
        for (pos, ch) in s.chars().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {ch:?}")))?
                as u8;
            let j = digits - 1 - pos;
            for b in 0..4 {
                let i = 4 * j + b;
                if nibble >> b & 1 == 1 {
                    if i >= n {
                        return Err(Error::Parse(format!(
                            "bit {i} set beyond vector length {n}"
                        )));
                    }
                    v.set_bit(i, true);
                }
            }
        }
        Ok(v)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(n={}, 0x{})", self.n, self.to_hex())
    }
}

/// A nonempty subset `T` of coordinates `{1..n}`, stored as a mask vector.
///
/// Internally 0-based (bit `i-1` of the mask marks membership of coordinate
/// `i`); displayed 1-based to match mathematical notation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    mask: BitVector,
}

impl IndexSet {
    /// Wraps a mask vector; rejects the empty set.
    pub fn from_mask(mask: BitVector) -> Result<IndexSet> {
        if mask.is_zero() {
            return Err(Error::EmptyIndexSet);
        }
        Ok(IndexSet { mask })
    }

    /// Builds a set over `{1..n}` from 1-based coordinates.
    pub fn from_coords(n: usize, coords: &[usize]) -> Result<IndexSet> {
        let mut mask = BitVector::zero(n);
        for &c in coords {
            if c == 0 || c > n {
                return Err(Error::InvalidParameter(format!(
                    "coordinate {c} outside 1..={n}"
                )));
            }
            mask.set_bit(c - 1, true);
        }
        IndexSet::from_mask(mask)
    }

    /// The ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.mask.len()
    }

    /// The mask vector (bit `i-1` marks coordinate `i`).
    pub fn mask(&self) -> &BitVector {
        &self.mask
    }

    /// Number of coordinates in the set.
    pub fn weight(&self) -> usize {
        self.mask.weight()
    }

    /// The 1-based coordinates, ascending.
    pub fn coords(&self) -> Vec<usize> {
        (0..self.mask.len())
            .filter(|&i| self.mask.bit(i))
            .map(|i| i + 1)
            .collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, c) in self.coords().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexSet{self}")
    }
}

/// Parity `⊕_{i∈T} x_i` of `x` on the coordinates of `T`.
pub fn parity(x: &BitVector, t: &IndexSet) -> Result<bool> {
    if x.len() != t.n() {
        return Err(Error::DimensionMismatch {
            expected: t.n(),
            got: x.len(),
        });
    }
    Ok(x.and_weight(t.mask()) % 2 == 1)
}

// ---------------------------------------------------------------------------
// Polynomials over GF(2), used for moduli and the Euclidean inverse.
// Represented as word vectors, bit k = coefficient of X^k, no length field:
// the degree is wherever the top set bit is.
// ---------------------------------------------------------------------------

fn poly_trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_deg(p: &[u64]) -> Option<usize> {
    for (w, &word) in p.iter().enumerate().rev() {
        if word != 0 {
            return Some(w * WORD_BITS + 63 - word.leading_zeros() as usize);
        }
    }
    None
}

fn poly_is_zero(p: &[u64]) -> bool {
    p.iter().all(|&w| w == 0)
}

fn poly_get(p: &[u64], i: usize) -> bool {
    let w = i / WORD_BITS;
    w < p.len() && (p[w] >> (i % WORD_BITS)) & 1 == 1
}

fn poly_xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    let (wshift, bshift) = (shift / WORD_BITS, shift % WORD_BITS);
    let need = src.len() + wshift + 1;
    if dst.len() < need {
        dst.resize(need, 0);
    }
    for (i, &w) in src.iter().enumerate() {
        dst[i + wshift] ^= w << bshift;
        if bshift > 0 {
            dst[i + wshift + 1] ^= w >> (WORD_BITS - bshift);
        }
    }
    poly_trim(dst);
}

fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for (w, &word) in a.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            poly_xor_shifted(&mut out, b, w * WORD_BITS + k);
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo `f` (long division over GF(2)); `f` nonzero.
fn poly_rem(a: &[u64], f: &[u64]) -> Vec<u64> {
    let df = poly_deg(f).expect("division by zero polynomial");
    let mut r = a.to_vec();
    poly_trim(&mut r);
    while let Some(dr) = poly_deg(&r) {
        if dr < df {
            break;
        }
        poly_xor_shifted(&mut r, f, dr - df);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    while !poly_is_zero(&r1) {
        let r = poly_rem(&r0, &r1);
        r0 = r1;
        r1 = r;
    }
    r0
}

/// Squares `p` and reduces modulo `f` (squaring over GF(2) spreads bits).
fn poly_sqr_mod(p: &[u64], f: &[u64]) -> Vec<u64> {
    let deg = match poly_deg(p) {
        None => return Vec::new(),
        Some(d) => d,
    };
    let mut sq = vec![0u64; words_for(2 * deg + 2)];
    for i in 0..=deg {
        if poly_get(p, i) {
            sq[2 * i / WORD_BITS] |= 1u64 << (2 * i % WORD_BITS);
        }
    }
    poly_rem(&sq, f)
}

fn distinct_prime_divisors(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Irreducibility over GF(2) via the Frobenius criterion: `f` of degree `m`
/// is irreducible iff `X^(2^m) ≡ X (mod f)` and, for every prime `p | m`,
/// `gcd(X^(2^(m/p)) - X, f) = 1`.
fn poly_is_irreducible(f: &[u64], m: usize) -> bool {
    debug_assert_eq!(poly_deg(f), Some(m));
    let x = vec![2u64]; // the polynomial X
    let x_mod = poly_rem(&x, f);
    let mut checkpoints: Vec<usize> = distinct_prime_divisors(m).iter().map(|p| m / p).collect();
    checkpoints.sort_unstable();
    let mut r = x_mod.clone();
    let mut next = 0;
    for j in 1..=m {
        r = poly_sqr_mod(&r, f);
        while next < checkpoints.len() && checkpoints[next] == j {
            // gcd(X^(2^(m/p)) - X, f) must be trivial.
            let mut diff = r.clone();
            poly_xor_shifted(&mut diff, &x, 0);
            let g = poly_gcd(&diff, f);
            if poly_deg(&g) != Some(0) {
                return false;
            }
            next += 1;
        }
    }
    r == x_mod
}

/// The canonical irreducible polynomial of degree `m`: the one whose
/// coefficient bit pattern, read as an integer, is numerically smallest.
///
/// Returned as a vector of `m + 1` bits (bit `k` = coefficient of `X^k`).
/// Examples: `m = 1 → X`, `m = 2 → X² + X + 1`, `m = 3 → X³ + X + 1`,
/// `m = 4 → X⁴ + X + 1`.
pub fn choose_irreducible(m: usize) -> Result<BitVector> {
    if m == 0 || m > MAX_FIELD_DEGREE {
        return Err(Error::UnsupportedDegree(m));
    }
    // Candidates are X^m + g for g = 0, 1, 2, ... in numeric order. For
    // m >= 2 the constant term must be 1 (else X divides) and the total
    // number of terms must be odd (else X + 1 divides), which the loop uses
    // as a cheap pre-filter before the Frobenius test.
    let mut g = vec![0u64; words_for(m.max(1))];
    loop {
        let mut f = g.clone();
        f.resize(words_for(m + 1), 0);
        f[m / WORD_BITS] |= 1u64 << (m % WORD_BITS);
        let plausible = m == 1
            || (f[0] & 1 == 1 && f.iter().map(|w| w.count_ones()).sum::<u32>() % 2 == 1);
        if plausible && poly_is_irreducible(&f, m) {
            let mut out = BitVector::zero(m + 1);
            for i in 0..=m {
                out.set_bit(i, poly_get(&f, i));
            }
            return Ok(out);
        }
        // Increment g; the search always terminates (irreducibles of every
        // degree exist below X^m + 2^m).
        for w in g.iter_mut() {
            let (v, carry) = w.overflowing_add(1);
            *w = v;
            if !carry {
                break;
            }
        }
    }
}

/// Descriptor of the field `F_{2^m}` with the canonical modulus for `m`.
#[derive(Debug, PartialEq, Eq)]
pub struct FieldSpec {
    m: usize,
    /// Full modulus, bit k = coefficient of X^k, bit m set.
    modulus: Vec<u64>,
    /// Modulus with the leading X^m term dropped: the XOR mask applied when
    /// a left shift carries out of degree m - 1.
    reduction: Vec<u64>,
}

static FIELD_CACHE: OnceLock<Mutex<HashMap<usize, Arc<FieldSpec>>>> = OnceLock::new();

impl FieldSpec {
    /// The shared descriptor for `F_{2^m}`; descriptors are cached per degree
    /// so elements of the same field share one allocation.
    pub fn shared(m: usize) -> Result<Arc<FieldSpec>> {
        let cache = FIELD_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(spec) = cache.lock().unwrap().get(&m) {
            return Ok(Arc::clone(spec));
        }
        let poly = choose_irreducible(m)?;
        let mut modulus = vec![0u64; words_for(m + 1)];
        for i in 0..=m {
            if poly.bit(i) {
                modulus[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
            }
        }
        let mut reduction = modulus.clone();
        reduction[m / WORD_BITS] &= !(1u64 << (m % WORD_BITS));
        reduction.truncate(words_for(m));
        let spec = Arc::new(FieldSpec {
            m,
            modulus,
            reduction,
        });
        cache
            .lock()
            .unwrap()
            .entry(m)
            .or_insert_with(|| Arc::clone(&spec));
        Ok(spec)
    }

    /// Extension degree `m`.
    pub fn degree(&self) -> usize {
        self.m
    }

    /// The modulus polynomial as a bit vector of `m + 1` coefficients.
    pub fn modulus(&self) -> BitVector {
        let mut out = BitVector::zero(self.m + 1);
        for i in 0..=self.m {
            out.set_bit(i, poly_get(&self.modulus, i));
        }
        out
    }
}

/// An element of `F_{2^m}`: a residue polynomial of degree `< m`.
#[derive(Clone)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    /// Coefficients, bit k = coefficient of X^k; exactly `words_for(m)` words.
    coeffs: Vec<u64>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.spec.m == other.spec.m && self.coeffs == other.coeffs
    }
}
impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement(m={}, 0x{})", self.spec.m, self.to_bits().to_hex())
    }
}

impl FieldElement {
    /// The zero element.
    pub fn zero(spec: &Arc<FieldSpec>) -> FieldElement {
        FieldElement {
            spec: Arc::clone(spec),
            coeffs: vec![0u64; words_for(spec.m)],
        }
    }

    /// The one element.
    pub fn one(spec: &Arc<FieldSpec>) -> FieldElement {
        let mut e = FieldElement::zero(spec);
        e.coeffs[0] = 1;
        e
    }

    /// Builds an element from a coefficient vector of length `m`.
    pub fn from_bits(spec: &Arc<FieldSpec>, bits: &BitVector) -> Result<FieldElement> {
        if bits.len() != spec.m {
            return Err(Error::DimensionMismatch {
                expected: spec.m,
                got: bits.len(),
            });
        }
        let mut e = FieldElement::zero(spec);
        for i in 0..spec.m {
            if bits.bit(i) {
                e.coeffs[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
            }
        }
        Ok(e)
    }

    /// The coefficient vector as a length-`m` bit vector.
    pub fn to_bits(&self) -> BitVector {
        let mut out = BitVector::zero(self.spec.m);
        for i in 0..self.spec.m {
            if poly_get(&self.coeffs, i) {
                out.set_bit(i, true);
            }
        }
        out
    }

    /// The field this element belongs to.
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&w| w == 0)
    }

    fn same_field(&self, other: &FieldElement) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec)
            || (self.spec.m == other.spec.m && self.spec.modulus == other.spec.modulus)
    }

    /// Sum (coefficient-wise XOR).
    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        if !self.same_field(other) {
            return Err(Error::FieldMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a ^= b;
        }
        Ok(out)
    }

    /// `self` raised to the power `e` by square-and-multiply.
    pub fn pow(&self, e: u64) -> FieldElement {
        let mut acc = FieldElement::one(&self.spec);
        for k in (0..64 - e.leading_zeros().min(63)).rev() {
            acc = field_mul(&acc, &acc).unwrap();
            if e >> k & 1 == 1 {
                acc = field_mul(&acc, self).unwrap();
            }
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    ///
    /// Errors on the zero element.
    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::InvalidParameter(
                "zero field element has no inverse".into(),
            ));
        }
        let f = &self.spec.modulus;
        let mut r0 = f.clone();
        let mut r1 = self.coeffs.clone();
        poly_trim(&mut r0);
        poly_trim(&mut r1);
        let mut t0: Vec<u64> = Vec::new();
        let mut t1: Vec<u64> = vec![1];
        while let Some(d1) = poly_deg(&r1) {
            if d1 == 0 {
                break;
            }
            // One full division step: r0 = q*r1 + r, t accumulates q.
            let mut r = r0.clone();
            let mut q: Vec<u64> = Vec::new();
            while let Some(dr) = poly_deg(&r) {
                if dr < d1 {
                    break;
                }
                poly_xor_shifted(&mut q, &[1], dr - d1);
                poly_xor_shifted(&mut r, &r1, dr - d1);
            }
            let qt1 = poly_mul(&q, &t1);
            let mut t = t0.clone();
            poly_xor_shifted(&mut t, &qt1, 0);
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        // r1 is now the gcd, necessarily the constant 1 since f is irreducible.
        debug_assert_eq!(poly_deg(&r1), Some(0));
        let mut inv = poly_rem(&t1, f);
        inv.resize(words_for(self.spec.m), 0);
        Ok(FieldElement {
            spec: Arc::clone(&self.spec),
            coeffs: inv,
        })
    }
}

/// Product in `F_{2^m}`, Horner-style: scan multiplier bits from the top,
/// shifting and reducing one degree at a time so no intermediate exceeds
/// degree `m`.
pub fn field_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    if !a.same_field(b) {
        return Err(Error::FieldMismatch);
    }
    let spec = &a.spec;
    let m = spec.m;
    let nw = words_for(m);
    let top_word = (m - 1) / WORD_BITS;
    let top_bit = (m - 1) % WORD_BITS;
    let mut acc = vec![0u64; nw];
    for k in (0..m).rev() {
        // acc = acc * X mod f
        let carry = (acc[top_word] >> top_bit) & 1 == 1;
        for w in (1..nw).rev() {
            acc[w] = (acc[w] << 1) | (acc[w - 1] >> (WORD_BITS - 1));
        }
        acc[0] <<= 1;
        if top_bit < WORD_BITS - 1 {
            acc[top_word] &= (1u64 << (top_bit + 1)) - 1;
        }
        if carry {
            for (w, &r) in acc.iter_mut().zip(&spec.reduction) {
                *w ^= r;
            }
        }
        if poly_get(&b.coeffs, k) {
            for (w, &av) in acc.iter_mut().zip(&a.coeffs) {
                *w ^= av;
            }
        }
    }
    Ok(FieldElement {
        spec: Arc::clone(spec),
        coeffs: acc,
    })
}

/// Interprets an `n`-bit vector as an element of `F_{2^m}`, `m >= n`, by
/// zero-extending the coefficient vector.
pub fn embed(x: &BitVector, m: usize) -> Result<FieldElement> {
    if m < x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: m,
        });
    }
    let spec = FieldSpec::shared(m)?;
    let mut e = FieldElement::zero(&spec);
    for i in 0..x.len() {
        if x.bit(i) {
            e.coeffs[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
        }
    }
    Ok(e)
}

/// Extracts the coefficient vector of a field element as an `n`-bit vector;
/// requires `n` to equal the extension degree.
pub fn project(a: &FieldElement, n: usize) -> Result<BitVector> {
    if n != a.spec.m {
        return Err(Error::DimensionMismatch {
            expected: a.spec.m,
            got: n,
        });
    }
    Ok(a.to_bits())
}
