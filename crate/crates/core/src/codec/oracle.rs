//! Truncated oracle tables: the first `horizon` membership bits of a
//! characteristic function, indexed by length-lex string index.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::codec::CodecError;
use crate::format::{self, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleTable {
    bits: Vec<bool>,
    /// File the table was read from, used when a network referencing it is
    /// written back out.
    source: Option<PathBuf>,
}

impl OracleTable {
    /// Table answering `bits[i - 1]` for index `i`.
    pub fn from_bits(bits: Vec<bool>) -> Self {
        OracleTable { bits, source: None }
    }

    /// Builds a table from explicit entries. Every index in `1..=horizon`
    /// must be present and no key may exceed the horizon.
    pub fn from_entries(entries: &BTreeMap<u64, bool>, horizon: u64) -> Result<Self, CodecError> {
        if let Some((&k, _)) = entries.iter().next_back() {
            if k > horizon {
                return Err(CodecError::TableShape(format!("index {k} exceeds horizon {horizon}")));
            }
        }
        let mut bits = Vec::with_capacity(horizon as usize);
        for i in 1..=horizon {
            match entries.get(&i) {
                Some(&b) => bits.push(b),
                None => return Err(CodecError::TableShape(format!("index {i} missing below horizon {horizon}"))),
            }
        }
        Ok(Self::from_bits(bits))
    }

    pub fn horizon(&self) -> u64 {
        self.bits.len() as u64
    }

    /// Membership bit for 1-based index `i`, or `None` past the horizon.
    pub fn get(&self, i: u64) -> Option<bool> {
        if i == 0 {
            return None;
        }
        self.bits.get((i - 1) as usize).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    pub fn with_source(mut self, path: impl Into<PathBuf>) -> Self {
        self.source = Some(path.into());
        self
    }

    /// Parses `horizon <n>` and `index <i> <bit>` lines.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut horizon = None;
        let mut entries = BTreeMap::new();
        for (line_no, line) in format::records(text) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["horizon", n] => {
                    if horizon.is_some() {
                        return Err(ParseError::at(line_no, "duplicate horizon"));
                    }
                    horizon = Some(format::parse_u64(n, line_no)?);
                }
                ["index", i, b] => {
                    let i = format::parse_u64(i, line_no)?;
                    if i == 0 {
                        return Err(ParseError::at(line_no, "indices start at 1"));
                    }
                    let bit = format::parse_bit(b, line_no)?;
                    if entries.insert(i, bit).is_some() {
                        return Err(ParseError::at(line_no, format!("duplicate index {i}")));
                    }
                }
                _ => return Err(ParseError::at(line_no, format!("unrecognized record `{line}`"))),
            }
        }
        let horizon = horizon.unwrap_or_else(|| entries.keys().next_back().copied().unwrap_or(0));
        Self::from_entries(&entries, horizon).map_err(|e| ParseError::at(0, e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError::io(path, e))?;
        Ok(Self::parse(&text)?.with_source(path))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("horizon {}\n", self.horizon());
        for (i, b) in self.bits.iter().enumerate() {
            let _ = writeln!(out, "index {} {}", i + 1, u8::from(*b));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let t = OracleTable::from_bits(vec![false, true, false, false, true]);
        let back = OracleTable::parse(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.get(2), Some(true));
        assert_eq!(back.get(6), None);
        assert_eq!(back.get(0), None);
    }

    #[test]
    fn gaps_below_horizon_rejected() {
        let err = OracleTable::parse("horizon 3\nindex 1 0\nindex 3 1\n").unwrap_err();
        assert!(err.to_string().contains("index 2 missing"), "{err}");
    }

    #[test]
    fn keys_past_horizon_rejected() {
        assert!(OracleTable::parse("horizon 1\nindex 1 0\nindex 2 1\n").is_err());
    }
}
