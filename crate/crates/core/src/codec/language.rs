//! Languages and their characteristic reals.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use super::{index_of_string, string_of_index, Alphabet, CodecError};
use crate::format::{self, ParseError};
use crate::numerics::{NumericError, UnitReal};

type DecideFn = dyn Fn(&str) -> Option<bool> + Send + Sync;

/// Built-in decision rules.
#[derive(Clone)]
pub enum Rule {
    /// Words with an even (or odd) number of `symbol`.
    Parity { symbol: char, even: bool },
    /// `aⁿbⁿ`, n ≥ 0.
    AnBn { a: char, b: char },
    /// Words starting with the given prefix.
    Prefix(String),
    /// Words fully matched by a regular expression.
    Regex(regex::Regex),
    /// Caller-supplied rule; `None` means it could not decide.
    Custom { name: String, decide: Arc<DecideFn> },
}

impl Rule {
    pub fn regex(pattern: &str) -> Result<Self, CodecError> {
        regex::Regex::new(&format!("^(?:{pattern})$"))
            .map(Rule::Regex)
            .map_err(|e| CodecError::Rule(e.to_string()))
    }

    pub fn custom(name: impl Into<String>, decide: impl Fn(&str) -> Option<bool> + Send + Sync + 'static) -> Self {
        Rule::Custom { name: name.into(), decide: Arc::new(decide) }
    }

    fn decide(&self, w: &str) -> Option<bool> {
        match self {
            Rule::Parity { symbol, even } => Some((w.chars().filter(|c| c == symbol).count() % 2 == 0) == *even),
            Rule::AnBn { a, b } => {
                let n = w.chars().take_while(|c| c == a).count();
                let rest: Vec<char> = w.chars().skip(n).collect();
                Some(rest.len() == n && rest.iter().all(|c| c == b))
            }
            Rule::Prefix(p) => Some(w.starts_with(p.as_str())),
            Rule::Regex(re) => Some(re.is_match(w)),
            Rule::Custom { decide, .. } => decide(w),
        }
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Parity { symbol, even } => write!(f, "parity {symbol} {}", if *even { "even" } else { "odd" }),
            Rule::AnBn { a, b } => write!(f, "anbn {a} {b}"),
            Rule::Prefix(p) => write!(f, "prefix {p}"),
            Rule::Regex(re) => write!(f, "regex {}", re.as_str()),
            Rule::Custom { name, .. } => write!(f, "custom {name}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Backing {
    FiniteTable(BTreeSet<String>),
    Predicate(Rule),
    /// Membership read from the binary digits of a unit real.
    RealCode(UnitReal),
}

#[derive(Clone, Debug)]
pub struct Language {
    alphabet: Alphabet,
    backing: Backing,
}

impl Language {
    pub fn finite<S: Into<String>>(alphabet: Alphabet, members: impl IntoIterator<Item = S>) -> Result<Self, CodecError> {
        let members: BTreeSet<String> = members.into_iter().map(Into::into).collect();
        for m in &members {
            alphabet.ranks(m)?;
        }
        Ok(Language { alphabet, backing: Backing::FiniteTable(members) })
    }

    pub fn rule(alphabet: Alphabet, rule: Rule) -> Self {
        Language { alphabet, backing: Backing::Predicate(rule) }
    }

    pub fn real_code(alphabet: Alphabet, real: UnitReal) -> Result<Self, CodecError> {
        if real.base() != 2 {
            return Err(CodecError::Encoding(format!("characteristic reals are binary, got base {}", real.base())));
        }
        Ok(Language { alphabet, backing: Backing::RealCode(real) })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Language { alphabet, backing: Backing::FiniteTable(BTreeSet::new()) }
    }

    /// Σ*.
    pub fn full(alphabet: Alphabet) -> Self {
        Self::rule(alphabet, Rule::custom("all", |_| Some(true)))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    pub fn contains(&self, w: &str) -> Result<bool, CodecError> {
        self.alphabet.ranks(w)?;
        match &self.backing {
            Backing::FiniteTable(set) => Ok(set.contains(w)),
            Backing::Predicate(rule) => rule.decide(w).ok_or_else(|| CodecError::MembershipUndecided(w.to_string())),
            Backing::RealCode(r) => decode_membership(r, w, &self.alphabet),
        }
    }

    /// Parses a language file: `alphabet: <symbols>` followed by either
    /// `member: <string>` lines or a single `rule: <name> <params>` line.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut alphabet = None;
        let mut members: Option<BTreeSet<String>> = None;
        let mut rule = None;
        for (line_no, line) in format::records(text) {
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| ParseError::at(line_no, format!("expected `key: value`, found `{line}`")))?;
            let rest = rest.trim();
            match key.trim() {
                "alphabet" => {
                    if alphabet.is_some() {
                        return Err(ParseError::at(line_no, "duplicate alphabet"));
                    }
                    alphabet = Some(Alphabet::parse(rest).map_err(|e| ParseError::at(line_no, e.to_string()))?);
                }
                "member" => {
                    // `member:` with nothing after it is the empty string.
                    members.get_or_insert_with(BTreeSet::new).insert(rest.to_string());
                }
                "rule" => {
                    if rule.is_some() {
                        return Err(ParseError::at(line_no, "only one rule per language"));
                    }
                    rule = Some(parse_rule(rest).map_err(|e| ParseError::at(line_no, e.to_string()))?);
                }
                other => return Err(ParseError::at(line_no, format!("unknown key `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| ParseError::at(0, "missing `alphabet:` line"))?;
        match (members, rule) {
            (Some(_), Some(_)) => Err(ParseError::at(0, "a language has members or a rule, not both")),
            (None, Some(rule)) => Ok(Language::rule(alphabet, rule)),
            (members, None) => Language::finite(alphabet, members.unwrap_or_default())
                .map_err(|e| ParseError::at(0, e.to_string())),
        }
    }

    pub fn load(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError::io(path, e))?;
        Self::parse(&text)
    }
}

fn single_char(s: &str) -> Result<char, CodecError> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(CodecError::Rule(format!("expected a single symbol, found `{s}`"))),
    }
}

fn parse_rule(spec: &str) -> Result<Rule, CodecError> {
    let (name, params) = spec.split_once(char::is_whitespace).unwrap_or((spec, ""));
    let params = params.trim();
    let fields: Vec<&str> = params.split_whitespace().collect();
    match (name, fields.as_slice()) {
        ("parity", [sym, parity]) => {
            let even = match *parity {
                "even" => true,
                "odd" => false,
                p => return Err(CodecError::Rule(format!("parity must be even or odd, found `{p}`"))),
            };
            Ok(Rule::Parity { symbol: single_char(sym)?, even })
        }
        ("anbn", [a, b]) => Ok(Rule::AnBn { a: single_char(a)?, b: single_char(b)? }),
        ("prefix", [p]) => Ok(Rule::Prefix(p.to_string())),
        ("prefix", []) => Ok(Rule::Prefix(String::new())),
        ("regex", _) if !params.is_empty() => Rule::regex(params),
        _ => Err(CodecError::Rule(format!("unknown rule `{spec}`"))),
    }
}

/// The first `n` binary digits of the characteristic real of `lang`:
/// digit `k` is 1 iff the string with index `k` is a member.
pub fn encode_language(lang: &Language, n: u64) -> Result<UnitReal, CodecError> {
    Ok(UnitReal::from_bits(&characteristic_bits(lang, n)?))
}

/// Same digits as [`encode_language`], as a bit vector.
pub fn characteristic_bits(lang: &Language, n: u64) -> Result<Vec<bool>, CodecError> {
    (1..=n)
        .map(|k| {
            let s = string_of_index(k, &lang.alphabet)?;
            lang.contains(&s)
        })
        .collect()
}

/// Reads the membership bit of `s` from a characteristic real. Binary reals
/// use digit 1 for members; Cantor-4 reals use digit 3.
pub fn decode_membership(r: &UnitReal, s: &str, alphabet: &Alphabet) -> Result<bool, CodecError> {
    let i = index_of_string(s, alphabet)?;
    let d = r.digit_at(i)?;
    match (r.base(), d) {
        (2, d) => Ok(d == 1),
        (4, 1) => Ok(false),
        (4, 3) => Ok(true),
        (base, d) => Err(CodecError::Encoding(format!("digit {d} at index {i} is not a membership bit in base {base}"))),
    }
}

impl From<NumericError> for CodecError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::HorizonExceeded { index, horizon } => CodecError::HorizonExceeded { index, horizon },
            other => CodecError::Numeric(other),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    fn lang_l() -> Language {
        Language::rule(ab(), Rule::regex("ab*").unwrap())
    }

    fn digits(r: &UnitReal, n: u64) -> String {
        r.prefix(n).unwrap().iter().map(|d| char::from(b'0' + d)).collect()
    }

    #[test]
    fn golden_characteristic_real() {
        let r = encode_language(&lang_l(), 25).unwrap();
        assert_eq!(digits(&r, 25), "0100100000100000000000100");
        assert_eq!(r.digit_at(2).unwrap(), 1);
        assert_eq!(r.digit_at(1).unwrap(), 0);
    }

    #[test]
    fn empty_and_full() {
        assert_eq!(digits(&encode_language(&Language::empty(ab()), 8).unwrap(), 8), "00000000");
        assert_eq!(digits(&encode_language(&Language::full(ab()), 8).unwrap(), 8), "11111111");
    }

    #[test]
    fn decode_examples() {
        let r = encode_language(&lang_l(), 25).unwrap();
        assert!(decode_membership(&r, "ab", &ab()).unwrap());
        assert!(!decode_membership(&r, "b", &ab()).unwrap());
        let zero = UnitReal::from_bits(&[false; 8]);
        assert!(!decode_membership(&zero, "ba", &ab()).unwrap());
    }

    #[test]
    fn undecided_predicate() {
        let l = Language::rule(ab(), Rule::custom("shy", |w| (w.len() < 2).then_some(true)));
        assert!(l.contains("a").unwrap());
        assert_eq!(encode_language(&l, 4).unwrap_err(), CodecError::MembershipUndecided("aa".into()));
    }

    #[test]
    fn oracle_horizon_propagates() {
        use crate::codec::OracleTable;
        use crate::numerics::Packing;
        let table = Arc::new(OracleTable::from_bits(vec![false, true]));
        let r = UnitReal::from_oracle(table, Packing::Cantor4);
        assert!(decode_membership(&r, "a", &ab()).unwrap());
        assert_eq!(
            decode_membership(&r, "b", &ab()),
            Err(CodecError::HorizonExceeded { index: 3, horizon: 2 })
        );
    }

    #[test]
    fn parse_files() {
        let l = Language::parse("alphabet: ab\nmember: a\nmember: ab\nmember:\n").unwrap();
        assert!(l.contains("").unwrap());
        assert!(l.contains("ab").unwrap());
        assert!(!l.contains("b").unwrap());

        let p = Language::parse("# even b's\nalphabet: ab\nrule: parity b even\n").unwrap();
        assert!(p.contains("abab").unwrap());
        assert!(!p.contains("ab").unwrap());

        let n = Language::parse("alphabet: ab\nrule: anbn a b\n").unwrap();
        assert!(n.contains("aabb").unwrap());
        assert!(!n.contains("aab").unwrap());

        let x = Language::parse("alphabet: ab\nrule: prefix ba\n").unwrap();
        assert!(x.contains("bab").unwrap());

        let r = Language::parse("alphabet: ab\nrule: regex ab*\n").unwrap();
        assert!(r.contains("abbb").unwrap());
        assert!(!r.contains("aab").unwrap());

        assert!(Language::parse("alphabet: ab\nmember: c\n").is_err());
        assert!(Language::parse("member: a\n").is_err());
        assert!(Language::parse("alphabet: ab\nrule: nope\n").is_err());
    }
}
