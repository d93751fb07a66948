//! The on-disk set format: a construction-metadata header plus one hex-encoded element
//! per line.
//!
//! ```text
//! # smallbias-set v1
//! # n=12
//! # method=code-nisan
//! # epsilon=0.5
//! # seed=0a
//! # generator=sha256-chacha20-lsb
//! # m=96
//! # ...
//! # random_bits=84
//! 04a
//! ...
//! ```
//!
//! Header lines start with `# `; `n` and `method` come first, construction
//! parameters follow in their stored order, and `random_bits` closes the
//! header. Each body line is one element as lowercase hex of `⌈n/4⌉` digits
//! with coordinate 1 in the least-significant bit. Serialization is
//! deterministic, and parsing preserves element order, multiplicity, and
//! parameter order, so `serialize(parse(text)) == text`.

use crate::bias::CandidateSet;
use crate::gf2::BitVector;
use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// First line of every set file.
pub const MAGIC: &str = "# smallbias-set v1";

/// Renders a set in the on-disk format.
pub fn serialize_set(set: &CandidateSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "# n={}", set.n());
    let _ = writeln!(out, "# method={}", set.method);
    for (key, value) in &set.params {
        let _ = writeln!(out, "# {key}={value}");
    }
    let _ = writeln!(out, "# random_bits={}", set.random_bits);
    for e in set.elements() {
        let _ = writeln!(out, "{}", e.to_hex());
    }
    out
}

/// Parses the format produced by [`serialize_set`], rejecting structural
/// defects: bad magic, missing or duplicated `n`/`method`/`random_bits`,
/// header lines after the body begins, malformed hex, or an empty body.
pub fn parse_set(text: &str) -> Result<CandidateSet> {
    let mut lines = text.lines();
    match lines.next() {
        Some(first) if first == MAGIC => {}
        other => {
            return Err(Error::Parse(format!(
                "first line must be {MAGIC:?}, got {other:?}"
            )))
        }
    }
    let mut n: Option<usize> = None;
    let mut method: Option<String> = None;
    let mut random_bits: Option<u64> = None;
    let mut params: Vec<(String, String)> = Vec::new();
    let mut elements: Vec<BitVector> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        if let Some(rest) = line.strip_prefix("# ") {
            if !elements.is_empty() {
                return Err(Error::Parse(format!(
                    "line {lineno}: header line after body began"
                )));
            }
            let (key, value) = rest.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {lineno}: header line without '='"))
            })?;
            let dup = |k: &str| Error::Parse(format!("line {lineno}: duplicate key {k}"));
            match key {
                "n" => {
                    if n.is_some() {
                        return Err(dup("n"));
                    }
                    let v: usize = value.parse().map_err(|_| {
                        Error::Parse(format!("line {lineno}: invalid n {value:?}"))
                    })?;
                    n = Some(v);
                }
                "method" => {
                    if method.is_some() {
                        return Err(dup("method"));
                    }
                    method = Some(value.to_string());
                }
                "random_bits" => {
                    if random_bits.is_some() {
                        return Err(dup("random_bits"));
                    }
                    let v: u64 = value.parse().map_err(|_| {
                        Error::Parse(format!("line {lineno}: invalid random_bits {value:?}"))
                    })?;
                    random_bits = Some(v);
                }
                _ => params.push((key.to_string(), value.to_string())),
            }
        } else if line.starts_with('#') {
            return Err(Error::Parse(format!(
                "line {lineno}: header lines use the form \"# key=value\""
            )));
        } else {
            let n = n.ok_or_else(|| {
                Error::Parse(format!("line {lineno}: body before the n header"))
            })?;
            elements.push(
                BitVector::from_hex(n, line.trim_end_matches('\r'))
                    .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?,
            );
        }
    }
    let n = n.ok_or_else(|| Error::Parse("missing n header".into()))?;
    let method = method.ok_or_else(|| Error::Parse("missing method header".into()))?;
    let random_bits =
        random_bits.ok_or_else(|| Error::Parse("missing random_bits header".into()))?;
    if elements.is_empty() {
        return Err(Error::Parse("set file has no elements".into()));
    }
    CandidateSet::new(n, elements, method, params, random_bits)
}

/// Serializes and writes a set file.
pub fn write_set_file(path: &Path, set: &CandidateSet) -> Result<()> {
    std::fs::write(path, serialize_set(set))?;
    Ok(())
}

/// Reads and parses a set file.
pub fn read_set_file(path: &Path) -> Result<CandidateSet> {
    parse_set(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bias::naive_random_set;
    use crate::code::construct_code_nisan;
    use crate::entropy::EntropySource;
    use crate::legendre::{aghp_set, derive_shift_params, shifted_legendre_set};

    #[test]
    fn round_trip_is_byte_identical() {
        let mut src = EntropySource::from_seed_hex("beef").unwrap();
        let set = construct_code_nisan(12, 0.5, 2.0, 12, &mut src).unwrap();
        let text = serialize_set(&set);
        let parsed = parse_set(&text).unwrap();
        assert_eq!(serialize_set(&parsed), text);
        assert_eq!(parsed.n(), set.n());
        assert_eq!(parsed.method, set.method);
        assert_eq!(parsed.params, set.params);
        assert_eq!(parsed.random_bits, set.random_bits);
        assert_eq!(parsed.elements(), set.elements());
    }

    #[test]
    fn round_trip_preserves_order_and_multiplicity() {
        let mut src = EntropySource::from_seed_bytes(b"dups");
        // Small naive sets repeat elements with high probability at n = 2.
        let set = naive_random_set(2, 40, 0.5, &mut src).unwrap();
        let parsed = parse_set(&serialize_set(&set)).unwrap();
        assert_eq!(parsed.elements(), set.elements());
        assert_eq!(parsed.size(), 40);
    }

    #[test]
    fn round_trip_all_methods() {
        let mut sets = Vec::new();
        let mut src = EntropySource::from_seed_hex("aa").unwrap();
        sets.push(naive_random_set(7, 20, 0.5, &mut src).unwrap());
        let mut src = EntropySource::from_seed_hex("bb").unwrap();
        sets.push(crate::code::construct_code_uniform(8, 0.6, 2.0, &mut src).unwrap());
        let mut src = EntropySource::from_seed_hex("cc").unwrap();
        let p = derive_shift_params(4, 0.6, 0.9, &mut src).unwrap();
        sets.push(shifted_legendre_set(&p).unwrap());
        sets.push(aghp_set(5, 0.8).unwrap());
        for set in sets {
            let text = serialize_set(&set);
            let parsed = parse_set(&text).unwrap();
            assert_eq!(serialize_set(&parsed), text, "method {}", set.method);
        }
    }

    #[test]
    fn header_shape() {
        let set = aghp_set(5, 0.8).unwrap();
        let text = serialize_set(&set);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], MAGIC);
        assert_eq!(lines[1], "# n=5");
        assert_eq!(lines[2], "# method=aghp");
        assert_eq!(lines[3], "# epsilon=0.8");
        assert!(lines[4].starts_with("# q="));
        assert_eq!(lines[5], "# random_bits=0");
        assert_eq!(lines.len(), 6 + set.size());
        // Two hex digits per 5-bit element.
        assert!(lines[6].len() == 2 && lines[6].chars().all(|c| c.is_ascii_hexdigit()));
    }

    #[test]
    fn parse_rejects_structural_defects() {
        let good = "# smallbias-set v1\n# n=4\n# method=naive\n# random_bits=8\n3\na\n";
        assert!(parse_set(good).is_ok());
        for (broken, why) in [
            ("# other v9\n# n=4\n# method=m\n# random_bits=0\nf\n", "magic"),
            ("# smallbias-set v1\n# method=m\n# random_bits=0\nf\n", "no n"),
            ("# smallbias-set v1\n# n=4\n# random_bits=0\nf\n", "no method"),
            ("# smallbias-set v1\n# n=4\n# method=m\nf\n", "no random_bits"),
            ("# smallbias-set v1\n# n=4\n# n=4\n# method=m\n# random_bits=0\nf\n", "dup n"),
            ("# smallbias-set v1\n# n=4\n# method=m\n# random_bits=0\n", "empty body"),
            ("# smallbias-set v1\n# n=4\n# method=m\n# random_bits=0\nf\n# late=1\nf\n", "late header"),
            ("# smallbias-set v1\n# n=4\n# method=m\n# random_bits=0\nzz\n", "bad hex"),
            ("# smallbias-set v1\n# n=4\n# method=m\n# random_bits=0\nff\n", "hex too long"),
            ("# smallbias-set v1\n# n=4\n# method=m\n# random_bits=x\nf\n", "bad bits"),
            ("# smallbias-set v1\n# n=4\n# method=m\n#bare\n# random_bits=0\nf\n", "malformed header"),
        ] {
            assert!(parse_set(broken).is_err(), "should reject: {why}");
        }
    }

    #[test]
    fn file_helpers_round_trip() {
        let dir = std::env::temp_dir().join(format!("smallbias-setfile-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("set.txt");
        let set = aghp_set(4, 0.7).unwrap();
        write_set_file(&path, &set).unwrap();
        let parsed = read_set_file(&path).unwrap();
        assert_eq!(parsed.elements(), set.elements());
        assert_eq!(serialize_set(&parsed), serialize_set(&set));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
