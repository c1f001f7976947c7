//! Words over a symmetric generating set.
//!
//! Generators are written as lowercase letters (`a`, `b`, ...) and their
//! inverses as the matching uppercase letters, so `abAB` is the commutator of
//! `a` and `b`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported alphabet rank (one letter per generator, `a` to `z`).
pub const MAX_RANK: usize = 26;

/// A signed generator letter.
///
/// Ordering is `a < A < b < B < ...`, the order used by every shortlex
/// comparison in the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(u8);

impl Generator {
    pub fn new(index: usize, inverse: bool) -> Self {
        assert!(index < MAX_RANK, "generator index {index} out of range");
        Generator((index as u8) << 1 | inverse as u8)
    }

    pub fn positive(index: usize) -> Self {
        Self::new(index, false)
    }

    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Generator(self.0 ^ 1)
    }

    /// Dense code in `0..2*rank`, matching the shortlex order.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Self {
        assert!(code < 2 * MAX_RANK);
        Generator(code as u8)
    }

    /// All `2 * rank` letters in shortlex order.
    pub fn alphabet(rank: usize) -> impl Iterator<Item = Generator> {
        (0..2 * rank).map(Generator::from_code)
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.index() as u8) as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        if c.is_ascii_lowercase() {
            Some(Self::new((c as u8 - b'a') as usize, false))
        } else if c.is_ascii_uppercase() {
            Some(Self::new((c as u8 - b'A') as usize, true))
        } else {
            None
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseWordError {
    #[error("invalid letter {0:?} in word")]
    InvalidLetter(char),
}

/// A finite sequence of generator letters.
///
/// Words are not reduced automatically; models and [`free_reduce`] decide
/// what a word means. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Generator>) -> Self {
        Word(letters)
    }

    pub fn letter(g: Generator) -> Self {
        Word(vec![g])
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Generator> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Generator> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Generator> {
        self.0.last().copied()
    }

    pub fn push(&mut self, g: Generator) {
        self.0.push(g);
    }

    /// Largest generator index used plus one.
    pub fn rank_hint(&self) -> usize {
        self.0.iter().map(|g| g.index() + 1).max().unwrap_or(0)
    }

    /// Plain concatenation, without any reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The word `g^n` (uses the inverse letter for negative `n`).
    pub fn power_of(g: Generator, n: i64) -> Word {
        let letter = if n < 0 { g.inverse() } else { g };
        Word(vec![letter; n.unsigned_abs() as usize])
    }

    /// Concatenation of `|n|` copies of `self` (or of its inverse when `n < 0`).
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { inverse(self) } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.first(), self.last()) {
                (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
                _ => true,
            }
    }

    /// Shortlex comparison: shorter words first, then lexicographic.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            write!(f, "{}", g.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{self}")
        }
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Word {
    type Err = ParseWordError;

    /// Parses `abAB`; whitespace is ignored and `1`, `ε` or the empty
    /// string denote the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed == "1" || trimmed == "ε" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(trimmed.len());
        for c in trimmed.chars().filter(|c| !c.is_whitespace()) {
            letters.push(Generator::from_char(c).ok_or(ParseWordError::InvalidLetter(c))?);
        }
        Ok(Word(letters))
    }
}

/// Parses a word, panicking on invalid input. Intended for literals in tests
/// and examples.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}

/// Cancels adjacent inverse pairs until none remain.
pub fn free_reduce(word: &Word) -> Word {
    let mut out: Vec<Generator> = Vec::with_capacity(word.len());
    for &g in word.letters() {
        if out.last() == Some(&g.inverse()) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    Word(out)
}

/// Reduced product in the free group.
pub fn free_mul(a: &Word, b: &Word) -> Word {
    let mut out: Vec<Generator> = Vec::with_capacity(a.len() + b.len());
    for &g in a.letters().iter().chain(b.letters()) {
        if out.last() == Some(&g.inverse()) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    Word(out)
}

/// Formal inverse: reversed word with every letter inverted.
pub fn inverse(word: &Word) -> Word {
    Word(word.letters().iter().rev().map(|g| g.inverse()).collect())
}

/// Splits a freely reduced word as `conjugator · core · conjugator⁻¹` with
/// `core` cyclically reduced.
pub fn cyclic_reduce(word: &Word) -> (Word, Word) {
    let letters = word.letters();
    let (mut lo, mut hi) = (0usize, letters.len());
    while hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    (Word(letters[lo..hi].to_vec()), Word(letters[..lo].to_vec()))
}

/// Every freely reduced word of length exactly `n` over `rank` generators, in
/// shortlex order.
pub fn reduced_words_of_length(rank: usize, n: usize) -> Vec<Word> {
    let mut layer = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * (2 * rank).saturating_sub(1).max(1));
        for word in &layer {
            for g in Generator::alphabet(rank) {
                if word.last() != Some(g.inverse()) {
                    let mut v = word.clone();
                    v.push(g);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Every freely reduced word of length at most `n`, in shortlex order.
pub fn reduced_words_up_to(rank: usize, n: usize) -> Vec<Word> {
    (0..=n).flat_map(|k| reduced_words_of_length(rank, k)).collect()
}

/// Every word (reduced or not) of length at most `n`, in shortlex order.
pub fn all_words_up_to(rank: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * 2 * rank);
        for word in &layer {
            for g in Generator::alphabet(rank) {
                let mut v = word.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn letters_round_trip() {
        for g in Generator::alphabet(3) {
            assert_eq!(Generator::from_char(g.to_char()), Some(g));
            assert_eq!(g.inverse().inverse(), g);
        }
        assert_eq!(w("abAB").to_string(), "abAB");
        assert!("a1".parse::<Word>().is_err());
        assert_eq!(w(""), Word::empty());
    }

    #[test]
    fn alphabet_order_is_shortlex() {
        let letters: String = Generator::alphabet(2).map(|g| g.to_char()).collect();
        assert_eq!(letters, "aAbB");
        assert_eq!(w("b").shortlex_cmp(&w("aa")), Ordering::Less);
        assert_eq!(w("ab").shortlex_cmp(&w("ba")), Ordering::Less);
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(free_reduce(&w("aAb")), w("b"));
        assert_eq!(free_reduce(&w("")), w(""));
        assert_eq!(free_reduce(&w("abBa")), w("aa"));
        assert_eq!(free_mul(&w("a"), &w("A")), w(""));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&w("ab")), w("BA"));
        assert_eq!(inverse(&w("")), w(""));
        assert_eq!(inverse(&inverse(&w("aBa"))), w("aBa"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(cyclic_reduce(&w("abA")), (w("b"), w("a")));
        assert_eq!(cyclic_reduce(&w("ab")), (w("ab"), w("")));
        let (core, conj) = cyclic_reduce(&w("BabAb"));
        assert_eq!((core.clone(), conj.clone()), (w("b"), w("Ba")));
        let rebuilt = free_reduce(&conj.concat(&core).concat(&inverse(&conj)));
        assert_eq!(rebuilt, w("BabAb"));
    }

    #[test]
    fn reduced_word_counts() {
        let counts: Vec<usize> = (0..5).map(|n| reduced_words_of_length(2, n).len()).collect();
        assert_eq!(counts, vec![1, 4, 12, 36, 108]);
        let words = reduced_words_up_to(2, 3);
        assert!(words.windows(2).all(|p| p[0].shortlex_cmp(&p[1]) == Ordering::Less));
        assert_eq!(all_words_up_to(2, 2).len(), 1 + 4 + 16);
    }

    fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0..2 * rank, 0..=max_len)
            .prop_map(|codes| Word::from_letters(codes.into_iter().map(Generator::from_code).collect()))
    }

    proptest! {
        #[test]
        fn free_reduce_is_idempotent_and_reduced(word in arb_word(3, 30)) {
            let r = free_reduce(&word);
            prop_assert!(r.is_freely_reduced());
            prop_assert_eq!(free_reduce(&r), r);
        }

        #[test]
        fn inverse_cancels(word in arb_word(3, 30)) {
            prop_assert!(free_mul(&word, &inverse(&word)).is_empty());
            prop_assert_eq!(inverse(&inverse(&word)), word);
        }

        #[test]
        fn cyclic_reduction_rebuilds(word in arb_word(2, 30)) {
            let r = free_reduce(&word);
            let (core, conj) = cyclic_reduce(&r);
            prop_assert!(core.is_cyclically_reduced());
            let rebuilt = free_reduce(&conj.concat(&core).concat(&inverse(&conj)));
            prop_assert_eq!(rebuilt, r);
        }
    }
}
