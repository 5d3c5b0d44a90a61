//! The free product `<x_1, ..., x_n | x_1^2, ..., x_n^2>` and its index-2
//! free subgroup `N`, freely generated by `y_j = x_j x_{j+1}`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::word::GeneratorWord;

/// Reduced word: no two equal adjacent letters. Every letter is an involution.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FpWord {
    letters: Vec<usize>,
    rank: usize,
}

impl FpWord {
    pub fn identity(rank: usize) -> Self {
        Self {
            letters: Vec::new(),
            rank,
        }
    }

    /// Reduces an arbitrary letter sequence.
    pub fn new(letters: Vec<usize>, rank: usize) -> Result<Self> {
        let mut w = Self::identity(rank);
        for i in letters {
            if i == 0 || i > rank {
                return Err(Error::IndexOutOfRange { index: i, rank });
            }
            w.push(i);
        }
        Ok(w)
    }

    /// Wraps letters already known to be reduced and in range.
    pub(crate) fn from_reduced(letters: Vec<usize>, rank: usize) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1]));
        Self { letters, rank }
    }

    /// Reads a group-grammar word, reducing exponents mod 2.
    pub fn from_word(word: &GeneratorWord, rank: usize) -> Result<Self> {
        word.check_rank(rank)?;
        let mut w = Self::identity(rank);
        for &(i, e) in word.tokens() {
            if e.rem_euclid(2) == 1 {
                w.push(i);
            }
        }
        Ok(w)
    }

    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        Self::from_word(&GeneratorWord::parse(text, rank)?, rank)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn push(&mut self, i: usize) {
        if self.letters.last() == Some(&i) {
            self.letters.pop();
        } else {
            self.letters.push(i);
        }
    }

    pub fn multiply(&self, other: &FpWord) -> Result<FpWord> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &FpWord) -> FpWord {
        // cancel the longest matching suffix/prefix pair, then concatenate
        let overlap = self
            .letters
            .iter()
            .rev()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count();
        let mut letters = self.letters[..self.letters.len() - overlap].to_vec();
        letters.extend_from_slice(&other.letters[overlap..]);
        FpWord::from_reduced(letters, self.rank)
    }

    pub fn invert(&self) -> FpWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        FpWord::from_reduced(letters, self.rank)
    }

    pub fn pow(&self, k: i64) -> FpWord {
        crate::group::power(&C2FreeProduct::new(self.rank), self, k)
    }

    /// Image in `Z/2`: word length mod 2.
    pub fn parity(&self) -> u8 {
        (self.letters.len() % 2) as u8
    }

    /// Writes `self = conjugator * core * conjugator^-1` with `core`
    /// cyclically reduced.
    pub fn cyclically_reduce(&self) -> (FpWord, FpWord) {
        let w = &self.letters;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo] == w[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        (
            FpWord::from_reduced(w[lo..hi].to_vec(), self.rank),
            FpWord::from_reduced(w[..lo].to_vec(), self.rank),
        )
    }

    /// Nontrivial torsion elements are exactly the conjugates of single
    /// letters; returns the letter when `self` is one.
    pub fn torsion_witness(&self) -> Option<usize> {
        let (core, _) = self.cyclically_reduce();
        match core.letters.as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    }

    pub fn is_torsion(&self) -> bool {
        self.torsion_witness().is_some()
    }

    /// Rewrites an even-length word in the free basis `y_j = x_j x_{j+1}`.
    pub fn to_free_generators(&self) -> Result<FreeWord> {
        if self.parity() != 0 {
            return Err(Error::NotInEvenSubgroup);
        }
        let mut out = FreeWord::identity(self.rank);
        for pair in self.letters.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a < b {
                // x_a x_b = y_a y_{a+1} ... y_{b-1}
                for j in a..b {
                    out.push(j, 1);
                }
            } else {
                // x_a x_b = (x_b x_a)^-1 = y_{a-1}^-1 ... y_b^-1
                for j in (b..a).rev() {
                    out.push(j, -1);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.letters.iter().map(|i| format!("x{i}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Reduced word in the free generators `y_1, ..., y_{n-1}` of `N`, where `n`
/// is the rank of the ambient free product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FreeWord {
    syllables: Vec<(usize, i64)>,
    rank: usize,
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        Self {
            syllables: Vec::new(),
            rank,
        }
    }

    pub fn new<I: IntoIterator<Item = (usize, i64)>>(syllables: I, rank: usize) -> Result<Self> {
        let mut w = Self::identity(rank);
        for (j, e) in syllables {
            if j == 0 || j >= rank {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    rank: rank.saturating_sub(1),
                });
            }
            w.push(j, e);
        }
        Ok(w)
    }

    /// Parses `y<j>^<e>` tokens (also accepts `x` as the letter).
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let normalized = text
            .split_whitespace()
            .map(|t| {
                t.strip_prefix('y')
                    .map(|r| format!("x{r}"))
                    .unwrap_or(t.to_string())
            })
            .collect::<Vec<_>>()
            .join(" ");
        let w = GeneratorWord::parse(&normalized, rank.saturating_sub(1))?;
        Self::new(w.tokens().iter().copied(), rank)
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    fn push(&mut self, j: usize, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((last, exp)) if *last == j => {
                *exp += e;
                if *exp == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((j, e)),
        }
    }

    /// Substitutes `y_j = x_j x_{j+1}` and reduces.
    pub fn to_free_product(&self) -> FpWord {
        let mut out = FpWord::identity(self.rank);
        for &(j, e) in &self.syllables {
            let (a, b) = if e > 0 { (j, j + 1) } else { (j + 1, j) };
            for _ in 0..e.unsigned_abs() {
                out.push(a);
                out.push(b);
            }
        }
        out
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|&(j, e)| {
                if e == 1 {
                    format!("y{j}")
                } else {
                    format!("y{j}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Inverse of [`FpWord::to_free_generators`].
pub fn from_free_generators(f: &FreeWord) -> FpWord {
    f.to_free_product()
}

/// The free product of `n` groups of order two as a [`GroupContext`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct C2FreeProduct {
    n: usize,
}

impl C2FreeProduct {
    pub fn new(n: usize) -> Self {
        Self { n }
    }
}

impl GroupContext for C2FreeProduct {
    type Element = FpWord;

    fn name(&self) -> String {
        format!("fp:{}", self.n)
    }

    fn rank(&self) -> usize {
        self.n
    }

    fn identity(&self) -> FpWord {
        FpWord::identity(self.n)
    }

    fn multiply(&self, a: &FpWord, b: &FpWord) -> FpWord {
        assert_eq!(a.rank, self.n, "element rank does not match context");
        assert_eq!(b.rank, self.n, "element rank does not match context");
        a.mul_unchecked(b)
    }

    fn invert(&self, a: &FpWord) -> FpWord {
        a.invert()
    }

    fn canonical_key(&self, a: &FpWord) -> String {
        let parts: Vec<String> = a.letters.iter().map(|i| i.to_string()).collect();
        format!("fp:{}", parts.join("."))
    }

    fn generators(&self) -> Vec<FpWord> {
        (1..=self.n)
            .map(|i| FpWord::from_reduced(vec![i], self.n))
            .collect()
    }

    fn evaluate(&self, word: &GeneratorWord) -> Result<FpWord> {
        FpWord::from_word(word, self.n)
    }

    fn word_for(&self, a: &FpWord) -> Option<GeneratorWord> {
        Some(GeneratorWord::from_tokens(
            a.letters.iter().map(|&i| (i, 1)),
        ))
    }
}
