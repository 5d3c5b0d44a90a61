//! Words in numbered generators, written `x1 x2^-3 x1^2`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A word in generators `x_1..x_n`, kept exactly as parsed: tokens are not
/// merged or reduced, only zero exponents are dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GeneratorWord {
    tokens: Vec<(usize, i64)>,
}

impl GeneratorWord {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a word from `(index, exponent)` pairs, dropping zero exponents.
    pub fn from_tokens<I: IntoIterator<Item = (usize, i64)>>(tokens: I) -> Self {
        Self {
            tokens: tokens.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    pub fn letter(index: usize) -> Self {
        Self::from_tokens([(index, 1)])
    }

    pub fn tokens(&self) -> &[(usize, i64)] {
        &self.tokens
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_index(&self) -> usize {
        self.tokens.iter().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn push(&mut self, index: usize, exponent: i64) {
        if exponent != 0 {
            self.tokens.push((index, exponent));
        }
    }

    /// Like [`push`](Self::push), but folds into a trailing token with the same index.
    pub fn push_merged(&mut self, index: usize, exponent: i64) {
        match self.tokens.last_mut() {
            Some((i, e)) if *i == index => {
                *e += exponent;
                if *e == 0 {
                    self.tokens.pop();
                }
            }
            _ => self.push(index, exponent),
        }
    }

    pub fn extend(&mut self, other: &GeneratorWord) {
        self.tokens.extend_from_slice(&other.tokens);
    }

    /// The formal inverse: tokens reversed with negated exponents.
    pub fn inverse(&self) -> Self {
        Self {
            tokens: self.tokens.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        match self.tokens.iter().find(|&&(i, _)| i == 0 || i > rank) {
            Some(&(index, _)) => Err(Error::IndexOutOfRange { index, rank }),
            None => Ok(()),
        }
    }

    /// Parses whitespace-separated `x<i>` / `x<i>^<e>` tokens with `1 <= i <= rank`.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let mut word = Self::new();
        for token in text.split_whitespace() {
            let (index, exponent) = parse_token(token)?;
            if index == 0 || index > rank {
                return Err(Error::IndexOutOfRange { index, rank });
            }
            word.push(index, exponent);
        }
        Ok(word)
    }
}

fn parse_token(token: &str) -> Result<(usize, i64)> {
    let malformed = || Error::MalformedToken(token.to_string());
    let body = token.strip_prefix('x').ok_or_else(malformed)?;
    let (index, exponent) = match body.split_once('^') {
        Some((index, exponent)) => {
            if exponent.is_empty() {
                return Err(Error::EmptyExponent(token.to_string()));
            }
            let exponent = exponent.parse::<i64>().map_err(|_| malformed())?;
            (index, exponent)
        }
        None => (body, 1),
    };
    if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let index = index.parse::<usize>().map_err(|_| malformed())?;
    Ok((index, exponent))
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &(i, e)) in self.tokens.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Serialized as its text form, e.g. `"x1 x2^-3"`.
impl Serialize for GeneratorWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
