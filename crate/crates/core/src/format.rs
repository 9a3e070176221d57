//! Shared helpers for the line-oriented text formats (languages, oracle
//! tables, networks, automata, lattices, spike schedules).
//!
//! Every format is UTF-8, one record per line. Blank lines and lines whose
//! first non-space character is `#` are ignored.

use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ParseError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { line, message: message.into() }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        ParseError::Io { path: path.display().to_string(), source }
    }
}

/// Yields `(1-based line number, trimmed line)` for each meaningful record.
pub fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_u64(s: &str, line: usize) -> Result<u64, ParseError> {
    s.parse().map_err(|_| ParseError::at(line, format!("expected a non-negative integer, found `{s}`")))
}

pub fn parse_usize(s: &str, line: usize) -> Result<usize, ParseError> {
    s.parse().map_err(|_| ParseError::at(line, format!("expected an index, found `{s}`")))
}

pub fn parse_bit(s: &str, line: usize) -> Result<bool, ParseError> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(ParseError::at(line, format!("expected bit 0 or 1, found `{s}`"))),
    }
}

/// Parses a digit string such as `0100100` into bits.
pub fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
