//! The interface shared by every concrete group, plus operations derived from it.

use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::word::GeneratorWord;

/// A group presented by exact element values.
///
/// Contexts are immutable after construction, so one context can be shared
/// by any number of worker threads. `canonical_key(a) == canonical_key(b)`
/// must hold exactly when `a == b`.
pub trait GroupContext: Sync {
    type Element: Clone + Eq + Hash + Debug + Send + Sync;

    /// Short identifier such as `chw:2`, used in witness files and reports.
    fn name(&self) -> String;
    fn rank(&self) -> usize;
    fn identity(&self) -> Self::Element;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn invert(&self, a: &Self::Element) -> Self::Element;
    fn canonical_key(&self, a: &Self::Element) -> String;
    fn generators(&self) -> Vec<Self::Element>;

    /// Evaluates a word by substituting the generators.
    fn evaluate(&self, word: &GeneratorWord) -> Result<Self::Element> {
        word.check_rank(self.rank())?;
        let gens = self.generators();
        Ok(word.tokens().iter().fold(self.identity(), |acc, &(i, e)| {
            self.multiply(&acc, &power(self, &gens[i - 1], e))
        }))
    }

    fn is_identity(&self, a: &Self::Element) -> bool {
        *a == self.identity()
    }

    /// A word evaluating to `a`, when the context can produce one.
    fn word_for(&self, _a: &Self::Element) -> Option<GeneratorWord> {
        None
    }
}

/// `g^k` by square-and-multiply; negative `k` powers the inverse.
pub fn power<C: GroupContext + ?Sized>(ctx: &C, g: &C::Element, k: i64) -> C::Element {
    let mut base = if k < 0 { ctx.invert(g) } else { g.clone() };
    let mut exp = k.unsigned_abs();
    let mut acc = ctx.identity();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ctx.multiply(&acc, &base);
        }
        exp >>= 1;
        if exp > 0 {
            base = ctx.multiply(&base, &base);
        }
    }
    acc
}

/// `a b a^-1 b^-1`.
pub fn commutator<C: GroupContext + ?Sized>(ctx: &C, a: &C::Element, b: &C::Element) -> C::Element {
    let ab = ctx.multiply(a, b);
    let ab_ainv = ctx.multiply(&ab, &ctx.invert(a));
    ctx.multiply(&ab_ainv, &ctx.invert(b))
}

/// Checks associativity, identity and inverse laws on one triple; returns a
/// description of the first violated law.
pub fn check_laws<C: GroupContext + ?Sized>(
    ctx: &C,
    a: &C::Element,
    b: &C::Element,
    c: &C::Element,
) -> std::result::Result<(), String> {
    let left = ctx.multiply(&ctx.multiply(a, b), c);
    let right = ctx.multiply(a, &ctx.multiply(b, c));
    if left != right {
        return Err(format!("associativity fails on {a:?}, {b:?}, {c:?}"));
    }
    let e = ctx.identity();
    if ctx.multiply(a, &e) != *a || ctx.multiply(&e, a) != *a {
        return Err(format!("identity law fails on {a:?}"));
    }
    let inv = ctx.invert(a);
    if !ctx.is_identity(&ctx.multiply(a, &inv)) || !ctx.is_identity(&ctx.multiply(&inv, a)) {
        return Err(format!("inverse law fails on {a:?}"));
    }
    Ok(())
}

/// The integers under addition, with the single generator 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl GroupContext for Integers {
    type Element = i64;

    fn name(&self) -> String {
        "z".to_string()
    }

    fn rank(&self) -> usize {
        1
    }

    fn identity(&self) -> i64 {
        0
    }

    fn multiply(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn invert(&self, a: &i64) -> i64 {
        -a
    }

    fn canonical_key(&self, a: &i64) -> String {
        a.to_string()
    }

    fn generators(&self) -> Vec<i64> {
        vec![1]
    }

    fn word_for(&self, a: &i64) -> Option<GeneratorWord> {
        Some(GeneratorWord::from_tokens([(1, *a)]))
    }
}

impl Integers {
    pub fn parse_element(&self, text: &str) -> Result<i64> {
        text.trim()
            .parse()
            .map_err(|_| Error::MalformedToken(text.to_string()))
    }
}
