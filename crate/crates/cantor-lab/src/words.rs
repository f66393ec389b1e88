//! Finite binary words and their canonical enumeration.
//!
//! Words are the universal currency of this crate: they address cylinders,
//! label level-graph vertices, and prefix the dense sequence. The enumeration
//! orders `{0,1}*` by length, then lexicographically with `0 < 1`, so the
//! word of index `n` is the binary expansion of `n + 1` with the leading `1`
//! removed.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A finite binary word. Empty words are allowed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    bits: Vec<u8>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid character {0:?} in word literal (expected '0' or '1')")]
    BadChar(char),
    #[error("invalid bit value {0} (expected 0 or 1)")]
    BadBit(u8),
}

impl Word {
    pub fn empty() -> Self {
        Word { bits: Vec::new() }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = u8>) -> Result<Self, WordError> {
        let bits: Vec<u8> = bits.into_iter().collect();
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(WordError::BadBit(b));
        }
        Ok(Word { bits })
    }

    /// All-zero word of length `n`.
    pub fn zeros(n: usize) -> Self {
        Word { bits: vec![0; n] }
    }

    /// Panicking parser, for literals in tests and examples.
    pub fn parse(s: &str) -> Self {
        s.parse().expect("bad word literal")
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits.push(bit);
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Word { bits }
    }

    pub fn extended(&self, bit: u8) -> Word {
        let mut w = self.clone();
        w.push(bit);
        w
    }

    /// First `n` letters. Panics if `n > len`.
    pub fn prefix(&self, n: usize) -> Word {
        Word {
            bits: self.bits[..n].to_vec(),
        }
    }

    /// Letters from position `n` on.
    pub fn suffix_from(&self, n: usize) -> Word {
        Word {
            bits: self.bits[n..].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.bits.len() >= self.bits.len() && other.bits[..self.bits.len()] == self.bits[..]
    }

    /// Prefix-comparability: one of the two extends the other.
    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Number of ones.
    pub fn count_ones(&self) -> u64 {
        self.bits.iter().filter(|&&b| b == 1).count() as u64
    }

    /// Letter-reversal; an involution.
    pub fn reversed(&self) -> Word {
        let mut bits = self.bits.clone();
        bits.reverse();
        Word { bits }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.reversed()
    }

    pub fn with_bit(&self, i: usize, bit: u8) -> Word {
        let mut w = self.clone();
        w.bits[i] = bit;
        w
    }

    pub fn flipped(&self, i: usize) -> Word {
        self.with_bit(i, 1 - self.bits[i])
    }

    /// Longest common prefix length with `other`.
    pub fn meet_len(&self, other: &Word) -> usize {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// All words of length `n`, in lexicographic order.
    pub fn all_of_len(n: usize) -> Vec<Word> {
        let mut out = Vec::with_capacity(1usize << n);
        let mut cur = Word::zeros(n);
        loop {
            out.push(cur.clone());
            // lexicographic increment
            let mut i = n;
            while i > 0 && cur.bits[i - 1] == 1 {
                cur.bits[i - 1] = 0;
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur.bits[i - 1] = 1;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                other => return Err(WordError::BadChar(other)),
            }
        }
        Ok(Word { bits })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Word of index `n` in the length-then-lex enumeration: the binary
/// expansion of `n + 1` without its leading `1`. Its length is at most `n`.
pub fn nth_word(n: u64) -> Word {
    let m = n + 1;
    let len = 63 - m.leading_zeros() as usize; // bits below the leading 1
    let mut bits = Vec::with_capacity(len);
    for i in (0..len).rev() {
        bits.push(((m >> i) & 1) as u8);
    }
    Word { bits }
}

/// Index of `w` in the enumeration; inverse of [`nth_word`].
pub fn word_index(w: &Word) -> u64 {
    let mut m: u64 = 1;
    for &b in &w.bits {
        m = (m << 1) | b as u64;
    }
    m - 1
}

/// `n`-th member of the dense sequence: the word of index `n` padded with
/// zeros to length exactly `n`. Every finite word is a prefix of some member.
pub fn dense_word(n: u64) -> Word {
    let mut w = nth_word(n);
    debug_assert!(w.len() as u64 <= n);
    while (w.len() as u64) < n {
        w.push(0);
    }
    w
}

/// An index `n` with `t` a prefix of [`dense_word`]`(n)`. The canonical
/// witness is the enumeration index of `t` itself.
pub fn density_witness(t: &Word) -> u64 {
    word_index(t)
}

/// Least shift `l` such that `s` is a prefix of `t` with its first `l`
/// letters removed, if any. The empty word occurs everywhere at shift 0.
pub fn factor_occurs(s: &Word, t: &Word) -> Option<usize> {
    if s.len() > t.len() {
        return None;
    }
    (0..=t.len() - s.len()).find(|&l| t.bits[l..l + s.len()] == s.bits[..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumeration_matches_listed_values() {
        let expected = ["", "0", "1", "00", "01", "10", "11"];
        for (n, s) in expected.iter().enumerate() {
            assert_eq!(nth_word(n as u64), Word::parse(s), "index {}", n);
        }
        assert_eq!(nth_word(7), Word::parse("000"));
    }

    #[test]
    fn enumeration_is_bijective_on_short_words() {
        // indices 0 ..= 2^(L+1) - 2 are exactly the words of length <= L
        let l = 14;
        let top = (1u64 << (l + 1)) - 1;
        let mut seen = std::collections::HashSet::new();
        for n in 0..top {
            let w = nth_word(n);
            assert!(w.len() as u64 <= n);
            assert!(w.len() <= l as usize);
            assert_eq!(word_index(&w), n);
            assert!(seen.insert(w));
        }
        assert_eq!(seen.len() as u64, top);
    }

    #[test]
    fn dense_word_has_exact_length() {
        for n in 0..(1u64 << 15) {
            // length check only; contents exercised elsewhere
            assert_eq!(dense_word(n).len() as u64, n);
        }
    }

    #[test]
    fn dense_word_values() {
        assert_eq!(dense_word(0), Word::empty());
        assert_eq!(dense_word(4), Word::parse("0100"));
        assert_eq!(dense_word(6), Word::parse("110000"));
    }

    #[test]
    fn density_witness_values() {
        assert_eq!(density_witness(&Word::empty()), 0);
        assert_eq!(density_witness(&Word::parse("0")), 1);
        assert_eq!(density_witness(&Word::parse("11")), 6);
        assert!(Word::parse("11").is_prefix_of(&dense_word(6)));
    }

    #[test]
    fn density_holds_for_all_short_words() {
        for len in 0..=10usize {
            for w in Word::all_of_len(len) {
                let n = density_witness(&w);
                assert!(w.is_prefix_of(&dense_word(n)), "word {}", w);
            }
        }
    }

    #[test]
    fn count_ones_values() {
        assert_eq!(Word::parse("0100").count_ones(), 1);
        assert_eq!(Word::empty().count_ones(), 0);
        assert_eq!(Word::parse("110000").count_ones(), 2);
    }

    #[test]
    fn factor_occurrence_values() {
        assert_eq!(
            factor_occurs(&Word::parse("01"), &Word::parse("001")),
            Some(1)
        );
        assert_eq!(factor_occurs(&Word::empty(), &Word::parse("0100")), Some(0));
        assert_eq!(factor_occurs(&Word::empty(), &Word::empty()), Some(0));
        assert_eq!(factor_occurs(&Word::parse("11"), &Word::parse("0100")), None);
    }

    fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u8..=1, 0..=max_len)
            .prop_map(|v| Word::from_bits(v).unwrap())
    }

    proptest! {
        #[test]
        fn factor_occurs_agrees_with_naive_scan(s in word_strategy(6), t in word_strategy(12)) {
            let naive = (0..=t.len()).find(|&l| {
                l + s.len() <= t.len() && (0..s.len()).all(|i| t.bit(l + i) == s.bit(i))
            });
            prop_assert_eq!(factor_occurs(&s, &t), naive);
        }

        #[test]
        fn reversal_is_an_involution(w in word_strategy(16)) {
            prop_assert_eq!(w.reversed().reversed(), w.clone());
            prop_assert_eq!(w.is_symmetric(), w == w.reversed());
        }

        #[test]
        fn enumeration_round_trip(n in 0u64..1_000_000) {
            prop_assert_eq!(word_index(&nth_word(n)), n);
        }
    }
}
