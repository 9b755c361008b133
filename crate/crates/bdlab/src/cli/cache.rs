//! On-disk coefficient tables.
//!
//! ```text
//! BDLAB1\n
//! label=delta level=1 weight=12 n_max=10000 encoding=i128\n
//! payload: n_max little-endian values for n = 1..=n_max
//! xxh3-64 of the payload, little-endian
//! ```
//!
//! `encoding=i128` stores the integer coefficients `a(n)` in 16 bytes each;
//! `encoding=f64` stores normalized `lambda(n)` in 8 bytes each and is used
//! for tables that carry no integers.

use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;
use xxhash_rust::xxh3::xxh3_64;

use crate::forms::{CoefficientTable, NewformDescriptor};

pub const MAGIC: &str = "BDLAB";
pub const VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("{path}: not a coefficient cache (missing {MAGIC} magic)")]
    NotACache { path: String },
    #[error("{path}: cache version {found} is not supported (this build reads version {expected})")]
    Version { path: String, found: String, expected: String },
    #[error("{path}: malformed header: {reason}")]
    Header { path: String, reason: String },
    #[error("{path}: truncated: expected {expected} bytes after the header, found {found}")]
    Truncated { path: String, expected: usize, found: usize },
    #[error("{path}: {extra} unexpected bytes after the checksum")]
    Trailing { path: String, extra: usize },
    #[error("{path}: checksum mismatch: stored {stored:016x}, computed {computed:016x}")]
    Checksum { path: String, stored: u64, computed: u64 },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Encoding {
    I128,
    F64,
}

impl Encoding {
    fn width(self) -> usize {
        match self {
            Encoding::I128 => 16,
            Encoding::F64 => 8,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Encoding::I128 => "i128",
            Encoding::F64 => "f64",
        }
    }
}

/// Serializes `table` in the cache format.
pub fn encode(table: &CoefficientTable) -> Vec<u8> {
    let desc = table.descriptor();
    let n_max = table.n_max();
    let (encoding, payload) = match table.integers() {
        Some(ints) => (Encoding::I128, ints[1..].iter().flat_map(|v| v.to_le_bytes()).collect::<Vec<u8>>()),
        None => (Encoding::F64, table.values()[1..].iter().flat_map(|v| v.to_le_bytes()).collect()),
    };
    let mut out = format!(
        "{MAGIC}{VERSION}\nlabel={} level={} weight={} n_max={n_max} encoding={}\n",
        desc.label,
        desc.level,
        desc.weight,
        encoding.name()
    )
    .into_bytes();
    out.extend_from_slice(&payload);
    out.extend_from_slice(&xxh3_64(&payload).to_le_bytes());
    out
}

/// Parses the cache format. The descriptor comes back uncalibrated.
pub fn decode(bytes: &[u8], path: &str) -> Result<CoefficientTable, CacheError> {
    let (first, rest) = split_line(bytes).ok_or_else(|| CacheError::NotACache { path: path.into() })?;
    let first = std::str::from_utf8(first).map_err(|_| CacheError::NotACache { path: path.into() })?;
    let version = first.strip_prefix(MAGIC).ok_or_else(|| CacheError::NotACache { path: path.into() })?;
    if version != VERSION {
        return Err(CacheError::Version { path: path.into(), found: version.into(), expected: VERSION.into() });
    }
    let header_err = |reason: String| CacheError::Header { path: path.into(), reason };
    let (header, payload_and_sum) = split_line(rest).ok_or_else(|| header_err("no header line".into()))?;
    let header = std::str::from_utf8(header).map_err(|_| header_err("not UTF-8".into()))?;

    let mut fields = std::collections::BTreeMap::new();
    for item in header.split_whitespace() {
        let (k, v) = item.split_once('=').ok_or_else(|| header_err(format!("field {item:?} is not key=value")))?;
        fields.insert(k, v);
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| header_err(format!("missing field {k}")));
    let label = get("label")?;
    let level: u64 = get("level")?.parse().map_err(|e| header_err(format!("level: {e}")))?;
    let weight: u32 = get("weight")?.parse().map_err(|e| header_err(format!("weight: {e}")))?;
    let n_max: usize = get("n_max")?.parse().map_err(|e| header_err(format!("n_max: {e}")))?;
    let encoding = match get("encoding")? {
        "i128" => Encoding::I128,
        "f64" => Encoding::F64,
        other => return Err(header_err(format!("unknown encoding {other:?}"))),
    };
    if fields.len() != 5 {
        return Err(header_err(format!("expected 5 fields, found {}", fields.len())));
    }

    let payload_len = n_max.checked_mul(encoding.width()).ok_or_else(|| header_err(format!("n_max {n_max} too large")))?;
    let expected = payload_len + 8;
    if payload_and_sum.len() < expected {
        return Err(CacheError::Truncated { path: path.into(), expected, found: payload_and_sum.len() });
    }
    if payload_and_sum.len() > expected {
        return Err(CacheError::Trailing { path: path.into(), extra: payload_and_sum.len() - expected });
    }
    let (payload, sum) = payload_and_sum.split_at(payload_len);
    let stored = u64::from_le_bytes(sum.try_into().expect("8 bytes"));
    let computed = xxh3_64(payload);
    if stored != computed {
        return Err(CacheError::Checksum { path: path.into(), stored, computed });
    }

    let desc = NewformDescriptor::new(label, level, weight);
    let chunks = payload.chunks_exact(encoding.width());
    Ok(match encoding {
        Encoding::I128 => {
            let a = std::iter::once(0).chain(chunks.map(|c| i128::from_le_bytes(c.try_into().expect("16 bytes")))).collect();
            CoefficientTable::from_integers(desc, a)
        }
        Encoding::F64 => {
            let l = std::iter::once(0.0).chain(chunks.map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))).collect();
            CoefficientTable::from_normalized(desc, l)
        }
    })
}

fn split_line(bytes: &[u8]) -> Option<(&[u8], &[u8])> {
    let i = bytes.iter().position(|&b| b == b'\n')?;
    Some((&bytes[..i], &bytes[i + 1..]))
}

/// Writes through a temporary file in the same directory and renames, so
/// readers never see a half-written table.
pub fn cache_write(table: &CoefficientTable, path: &Path) -> Result<(), CacheError> {
    let io = |source| CacheError::Io { path: path.display().to_string(), source };
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(&encode(table)).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub fn cache_read(path: &Path) -> Result<CoefficientTable, CacheError> {
    let name = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| CacheError::Io { path: name.clone(), source })?;
    decode(&bytes, &name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::coefficients_11a;

    #[test]
    fn header_layout() {
        let t = coefficients_11a(5).unwrap();
        let bytes = encode(&t);
        assert!(bytes.starts_with(b"BDLAB1\nlabel=11a level=11 weight=2 n_max=5 encoding=i128\n"));
        assert_eq!(bytes.len(), 57 + 5 * 16 + 8);
    }

    #[test]
    fn normalized_tables_round_trip() {
        let t = coefficients_11a(50).unwrap();
        let f = CoefficientTable::from_normalized(t.descriptor().clone(), t.values().to_vec());
        assert_eq!(decode(&encode(&f), "mem").unwrap(), f);
    }
}
