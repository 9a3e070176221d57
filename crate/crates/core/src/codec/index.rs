//! Length-then-lexicographic numbering of strings, starting at ε → 1.
//!
//! Over a `k`-letter alphabet a word `s₁…sₙ` read as a bijective base-`k`
//! numeral (digit of `sⱼ` = rank + 1) has value `v`, and its index is
//! `v + 1`. This agrees with the closed form
//! `(kⁿ − 1)/(k − 1) + 1 + lexrank` and also covers `k = 1`.

use super::{Alphabet, CodecError};

/// 1-based length-lex index of `s`.
pub fn index_of_string(s: &str, alphabet: &Alphabet) -> Result<u64, CodecError> {
    let k = alphabet.len() as u64;
    let mut v: u64 = 0;
    for r in alphabet.ranks(s)? {
        v = v
            .checked_mul(k)
            .and_then(|x| x.checked_add(r as u64 + 1))
            .ok_or(CodecError::IndexOverflow)?;
    }
    v.checked_add(1).ok_or(CodecError::IndexOverflow)
}

/// Inverse of [`index_of_string`]. Index 0 has no string.
pub fn string_of_index(i: u64, alphabet: &Alphabet) -> Result<String, CodecError> {
    if i == 0 {
        return Err(CodecError::IndexZero);
    }
    let k = alphabet.len() as u64;
    let mut v = i - 1;
    let mut rev = Vec::new();
    while v > 0 {
        // Bijective base-k digit in 1..=k.
        let d = (v - 1) % k;
        rev.push(alphabet.symbol(d as usize).expect("rank below alphabet size"));
        v = (v - 1) / k;
    }
    Ok(rev.into_iter().rev().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    #[test]
    fn davis_table() {
        let table = [("", 1), ("a", 2), ("b", 3), ("aa", 4), ("ab", 5), ("ba", 6), ("bb", 7), ("aaa", 8), ("aab", 9), ("aba", 10)];
        for (s, i) in table {
            assert_eq!(index_of_string(s, &ab()).unwrap(), i, "{s:?}");
            assert_eq!(string_of_index(i, &ab()).unwrap(), s);
        }
        assert_eq!(index_of_string("abbb", &ab()).unwrap(), 23);
        assert_eq!(string_of_index(11, &ab()).unwrap(), "abb");
    }

    #[test]
    fn closed_form_agrees() {
        for k in 1..=4usize {
            let alpha = Alphabet::new("abcd".chars().take(k)).unwrap();
            for w in alpha.words_up_to(5) {
                let n = w.chars().count() as u32;
                let k64 = k as u64;
                let shorter = if k == 1 { n as u64 } else { (k64.pow(n) - 1) / (k64 - 1) };
                let lexrank = alpha.ranks(&w).unwrap().iter().fold(0u64, |acc, &r| acc * k64 + r as u64);
                assert_eq!(index_of_string(&w, &alpha).unwrap(), shorter + 1 + lexrank, "{w}");
            }
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            index_of_string("abc", &ab()),
            Err(CodecError::Alphabet { symbol: 'c', alphabet: "ab".into() })
        );
        assert_eq!(string_of_index(0, &ab()), Err(CodecError::IndexZero));
        let long = "b".repeat(64);
        assert_eq!(index_of_string(&long, &ab()), Err(CodecError::IndexOverflow));
    }
}
