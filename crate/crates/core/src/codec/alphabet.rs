use std::fmt;

use super::CodecError;

/// Ordered set of input symbols. The order fixes lexicographic rank and the
/// assignment of symbols to network data lines.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, CodecError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(CodecError::EmptyAlphabet);
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(CodecError::DuplicateSymbol(*c));
            }
            if c.is_whitespace() {
                return Err(CodecError::InvalidSymbol(*c));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// `"ab"` → `{a, b}`.
    pub fn parse(s: &str) -> Result<Self, CodecError> {
        Self::new(s.chars())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn rank(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    pub fn symbol(&self, rank: usize) -> Option<char> {
        self.symbols.get(rank).copied()
    }

    pub fn contains_word(&self, w: &str) -> bool {
        w.chars().all(|c| self.rank(c).is_some())
    }

    /// Ranks of each symbol of `w`, or the first foreign symbol.
    pub fn ranks(&self, w: &str) -> Result<Vec<usize>, CodecError> {
        w.chars()
            .map(|c| self.rank(c).ok_or(CodecError::Alphabet { symbol: c, alphabet: self.to_string() }))
            .collect()
    }

    /// All words of length exactly `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| self.symbols.iter().map(move |&c| format!("{w}{c}")))
                .collect();
        }
        out
    }

    /// All words of length at most `n`, in length-lex order.
    pub fn words_up_to(&self, n: usize) -> Vec<String> {
        (0..=n).flat_map(|k| self.words_of_length(k)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({self})")
    }
}
