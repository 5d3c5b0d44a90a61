//! Helpers shared by the integration tests: seeded generators and an
//! independent string-rewriting oracle for `G_n`.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use upg_core::chw::GnElement;
use upg_core::{FpWord, GeneratorWord};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Word with `len` tokens `x_i^e`, `1 <= i <= n`, `e` in `-3..=3`.
pub fn random_word(rng: &mut impl Rng, n: usize, len: usize) -> GeneratorWord {
    GeneratorWord::from_tokens((0..len).map(|_| (rng.gen_range(1..=n), rng.gen_range(-3..=3))))
}

/// Uniform choice from a nonempty slice.
pub fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("nonempty")
}

/// Reduced free-product word from a random letter string with length in `lens`.
pub fn random_fp(rng: &mut impl Rng, n: usize, lens: std::ops::Range<usize>) -> FpWord {
    let len = rng.gen_range(lens);
    let letters = (0..len).map(|_| rng.gen_range(1..=n)).collect();
    FpWord::new(letters, n).expect("letters in range")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    /// `x_i`
    L(usize),
    /// `x_i^-1`
    X(usize),
    /// `x_i^2`
    S(usize),
    /// `x_i^-2`
    T(usize),
}

fn square_index(t: Tok) -> Option<(usize, i64)> {
    match t {
        Tok::S(i) => Some((i, 1)),
        Tok::T(i) => Some((i, -1)),
        _ => None,
    }
}

/// One rewrite at the leftmost applicable position, or `None` at a fixpoint.
fn rewrite_once(w: &[Tok]) -> Option<Vec<Tok>> {
    for (pos, &t) in w.iter().enumerate() {
        if let Tok::X(i) = t {
            let mut out = w[..pos].to_vec();
            out.extend([Tok::L(i), Tok::T(i)]);
            out.extend_from_slice(&w[pos + 1..]);
            return Some(out);
        }
    }
    for pos in 0..w.len().saturating_sub(1) {
        let (a, b) = (w[pos], w[pos + 1]);
        let replacement: Option<Vec<Tok>> = match (a, b) {
            (Tok::L(i), Tok::L(j)) if i == j => Some(vec![Tok::S(i)]),
            (Tok::S(i), Tok::T(j)) | (Tok::T(i), Tok::S(j)) if i == j => Some(vec![]),
            // x_j^2 x_i = x_i x_j^-2 for i != j; x_i^2 commutes with x_i
            (Tok::S(j), Tok::L(i)) => {
                Some(vec![Tok::L(i), if i == j { Tok::S(j) } else { Tok::T(j) }])
            }
            (Tok::T(j), Tok::L(i)) => {
                Some(vec![Tok::L(i), if i == j { Tok::T(j) } else { Tok::S(j) }])
            }
            _ => match (square_index(a), square_index(b)) {
                (Some((i, _)), Some((j, _))) if i > j => Some(vec![b, a]),
                _ => None,
            },
        };
        if let Some(r) = replacement {
            let mut out = w[..pos].to_vec();
            out.extend(r);
            out.extend_from_slice(&w[pos + 2..]);
            return Some(out);
        }
    }
    None
}

/// Normal form of a word by applying the defining rewrites until none applies.
pub fn oracle_normalize(word: &GeneratorWord, n: usize) -> GnElement {
    let mut w: Vec<Tok> = Vec::new();
    for &(i, e) in word.tokens() {
        let t = if e > 0 { Tok::L(i) } else { Tok::X(i) };
        for _ in 0..e.unsigned_abs() {
            w.push(t);
        }
    }
    while let Some(next) = rewrite_once(&w) {
        w = next;
    }
    let mut letters = Vec::new();
    let mut vector = vec![0i64; n];
    for t in w {
        match t {
            Tok::L(i) => letters.push(i),
            Tok::S(i) => vector[i - 1] += 1,
            Tok::T(i) => vector[i - 1] -= 1,
            Tok::X(_) => unreachable!("rewritten away"),
        }
    }
    GnElement::from_parts(letters, vector).expect("oracle produced a normal form")
}
