//! The generalized Hantzsche-Wendt groups
//! `G_n = <x_1, ..., x_n | x_i^-1 x_j^2 x_i x_j^2, i != j>`.
//!
//! Every element has a unique normal form `w * x_1^{2a_1} ... x_n^{2a_n}`
//! where `w = x_{i_1} ... x_{i_k}` has no two equal adjacent letters and all
//! letters at exponent +1, and `a` is an integer vector. The squares
//! `x_i^2` generate a free abelian normal subgroup `A_n`, and the words `w`
//! are coset representatives for `G_n / A_n`, the free product of `n` copies
//! of the group of order two.
//!
//! Normalization streams left to right using two rules:
//!
//! * moving the square part `a` rightwards past a letter `x_i` replaces it by
//!   `sigma_i(a)`, which negates every coordinate except the `i`-th;
//! * a collision `x_i x_i` becomes the square `x_i^2`, i.e. adds `e_i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_product::FpWord;
use crate::group::{power, GroupContext};
use crate::word::GeneratorWord;

/// Normal form of an element of `G_n`. The rank is the length of `vector`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GnElement {
    word: Vec<usize>,
    vector: Vec<i64>,
}

impl GnElement {
    pub fn identity(n: usize) -> Self {
        Self {
            word: Vec::new(),
            vector: vec![0; n],
        }
    }

    /// The generator `x_i` (1-based).
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        let mut g = Self::identity(n);
        g.check_index(i)?;
        g.push_letter(i);
        Ok(g)
    }

    /// The element `x_1^{2a_1} ... x_n^{2a_n}` of `A_n`.
    pub fn from_squares(vector: Vec<i64>) -> Self {
        Self {
            word: Vec::new(),
            vector,
        }
    }

    /// Builds an element from an explicit normal form, checking that the
    /// coset word is reduced and uses indices in `1..=n`.
    pub fn from_parts(word: Vec<usize>, vector: Vec<i64>) -> Result<Self> {
        let n = vector.len();
        for (k, &i) in word.iter().enumerate() {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, rank: n });
            }
            if k > 0 && word[k - 1] == i {
                return Err(Error::MalformedToken(format!(
                    "coset word has repeated adjacent letter x{i}"
                )));
            }
        }
        Ok(Self { word, vector })
    }

    pub fn rank(&self) -> usize {
        self.vector.len()
    }

    pub fn coset_word(&self) -> &[usize] {
        &self.word
    }

    pub fn vector(&self) -> &[i64] {
        &self.vector
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty() && self.vector.iter().all(|&a| a == 0)
    }

    /// True for elements of `A_n`.
    pub fn in_square_subgroup(&self) -> bool {
        self.word.is_empty()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank() {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            })
        } else {
            Ok(())
        }
    }

    /// Right multiplication by the letter `x_i`. Index must be in range.
    fn push_letter(&mut self, i: usize) {
        let axis = i - 1;
        for (j, a) in self.vector.iter_mut().enumerate() {
            if j != axis {
                *a = -*a;
            }
        }
        if self.word.last() == Some(&i) {
            self.word.pop();
            self.vector[axis] += 1;
        } else {
            self.word.push(i);
        }
    }

    /// Right multiplication by `x_i^e`.
    fn push_power(&mut self, i: usize, e: i64) {
        let r = e.rem_euclid(2);
        if r == 1 {
            self.push_letter(i);
        }
        self.vector[i - 1] += (e - r) / 2;
    }

    /// Right multiplication by a word, in place.
    pub fn apply_word(&mut self, word: &GeneratorWord) -> Result<()> {
        word.check_rank(self.rank())?;
        for &(i, e) in word.tokens() {
            self.push_power(i, e);
        }
        Ok(())
    }

    pub fn multiply(&self, other: &GnElement) -> Result<GnElement> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &GnElement) -> GnElement {
        let mut out = self.clone();
        for &i in &other.word {
            out.push_letter(i);
        }
        for (a, b) in out.vector.iter_mut().zip(&other.vector) {
            *a += b;
        }
        out
    }

    pub fn invert(&self) -> GnElement {
        // (w a)^-1 = a^-1 x_{ik}^-1 ... x_{i1}^-1, with x_i^-1 = x_i x_i^-2.
        let mut out = Self::from_squares(self.vector.iter().map(|a| -a).collect());
        for &i in self.word.iter().rev() {
            out.push_letter(i);
            out.vector[i - 1] -= 1;
        }
        out
    }

    /// A word in the generators that normalizes back to this element.
    pub fn to_word(&self) -> GeneratorWord {
        let mut w = GeneratorWord::from_tokens(self.word.iter().map(|&i| (i, 1)));
        for (j, &a) in self.vector.iter().enumerate() {
            w.push_merged(j + 1, 2 * a);
        }
        w
    }

    /// Stable printable key `w:<i1.i2...ik>;a:<a1,...,an>`.
    pub fn canonical_key(&self) -> String {
        let word: Vec<String> = self.word.iter().map(|i| i.to_string()).collect();
        let vector: Vec<String> = self.vector.iter().map(|a| a.to_string()).collect();
        format!("w:{};a:{}", word.join("."), vector.join(","))
    }

    pub fn parse_key(key: &str) -> Result<GnElement> {
        let bad = || Error::MalformedToken(key.to_string());
        let rest = key.strip_prefix("w:").ok_or_else(bad)?;
        let (word, vector) = rest.split_once(";a:").ok_or_else(bad)?;
        let word = if word.is_empty() {
            Vec::new()
        } else {
            word.split('.')
                .map(|s| s.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        let vector = if vector.is_empty() {
            Vec::new()
        } else {
            vector
                .split(',')
                .map(|s| s.parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        GnElement::from_parts(word, vector)
    }
}

impl fmt::Display for GnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            f.write_str("1")
        } else {
            write!(f, "{}", self.to_word())
        }
    }
}

/// Normal form of a word in `G_n`.
pub fn normalize(word: &GeneratorWord, n: usize) -> Result<GnElement> {
    let mut g = GnElement::identity(n);
    g.apply_word(word)?;
    Ok(g)
}

/// Result of checking the defining relators of `G_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatorReport {
    pub n: usize,
    pub checked: usize,
    /// Pairs `(i, j)` whose relator did not reduce to the identity.
    pub failures: Vec<(usize, usize)>,
}

impl RelatorReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The defining relator `x_i^-1 x_j^2 x_i x_j^2`.
pub fn relator(i: usize, j: usize) -> GeneratorWord {
    GeneratorWord::from_tokens([(i, -1), (j, 2), (i, 1), (j, 2)])
}

/// Normalizes every relator of `G_n`. Vacuous for `n < 2`.
pub fn relator_check(n: usize) -> RelatorReport {
    let mut report = RelatorReport {
        n,
        checked: 0,
        failures: Vec::new(),
    };
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            report.checked += 1;
            let ok = normalize(&relator(i, j), n)
                .map(|g| g.is_identity())
                .unwrap_or(false);
            if !ok {
                report.failures.push((i, j));
            }
        }
    }
    report
}

/// The natural map `G_m -> G_n`, `x_i -> x_i`, for `m <= n`.
pub fn embed(g: &GnElement, n: usize) -> Result<GnElement> {
    let m = g.rank();
    if m > n {
        return Err(Error::BadEmbedding { from: m, to: n });
    }
    let mut vector = g.vector.clone();
    vector.resize(n, 0);
    Ok(GnElement {
        word: g.word.clone(),
        vector,
    })
}

/// Image in `G_n / A_n`, the free product of `n` groups of order two.
pub fn project_to_quotient(g: &GnElement) -> FpWord {
    FpWord::from_reduced(g.word.clone(), g.rank())
}

/// Element of the infinite dihedral group `D = <a, b | a^2, b^2>` written as
/// `(ba)^z_power` or `(ba)^z_power b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct DihedralElement {
    pub z_power: i64,
    pub b_flag: bool,
}

impl DihedralElement {
    pub const IDENTITY: Self = Self {
        z_power: 0,
        b_flag: false,
    };
    /// `ba`
    pub const ROTATION: Self = Self {
        z_power: 1,
        b_flag: false,
    };
    /// `b`
    pub const REFLECTION: Self = Self {
        z_power: 0,
        b_flag: true,
    };

    pub fn multiply(&self, other: &Self) -> Self {
        // b (ba)^z = (ba)^-z b
        let z = if self.b_flag {
            self.z_power - other.z_power
        } else {
            self.z_power + other.z_power
        };
        Self {
            z_power: z,
            b_flag: self.b_flag ^ other.b_flag,
        }
    }

    pub fn invert(&self) -> Self {
        if self.b_flag {
            *self
        } else {
            Self {
                z_power: -self.z_power,
                b_flag: false,
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// Image under the homomorphism `G_n -> D` sending `x_distinguished` to `ba`
/// and every other generator to `b`.
pub fn dihedral_image(g: &GnElement, distinguished: usize) -> Result<DihedralElement> {
    g.check_index(distinguished)?;
    let letters = g.word.iter().fold(DihedralElement::IDENTITY, |acc, &i| {
        let image = if i == distinguished {
            DihedralElement::ROTATION
        } else {
            DihedralElement::REFLECTION
        };
        acc.multiply(&image)
    });
    // x_d^2 -> (ba)^2, x_i^2 -> b^2 = 1 otherwise
    let squares = DihedralElement {
        z_power: 2 * g.vector[distinguished - 1],
        b_flag: false,
    };
    Ok(letters.multiply(&squares))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpotCheck {
    /// No power `g^k`, `1 <= k <= bound`, is the identity.
    Pass { bound: u32 },
    /// `g^k` is the identity.
    Torsion { k: u32 },
}

/// Checks `g^k != 1` for `1 <= k <= bound`.
pub fn infinite_order_spotcheck(g: &GnElement, bound: u32) -> Result<SpotCheck> {
    if g.is_identity() {
        return Err(Error::IdentityElement);
    }
    let mut acc = g.clone();
    for k in 1..=bound {
        if acc.is_identity() {
            return Ok(SpotCheck::Torsion { k });
        }
        acc = acc.mul_unchecked(g);
    }
    Ok(SpotCheck::Pass { bound })
}

/// `G_n` as a [`GroupContext`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gn {
    n: usize,
}

impl Gn {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn normalize(&self, word: &GeneratorWord) -> Result<GnElement> {
        normalize(word, self.n)
    }

    pub fn parse(&self, text: &str) -> Result<GnElement> {
        self.normalize(&GeneratorWord::parse(text, self.n)?)
    }

    pub fn pow(&self, g: &GnElement, k: i64) -> GnElement {
        power(self, g, k)
    }
}

impl GroupContext for Gn {
    type Element = GnElement;

    fn name(&self) -> String {
        format!("chw:{}", self.n)
    }

    fn rank(&self) -> usize {
        self.n
    }

    fn identity(&self) -> GnElement {
        GnElement::identity(self.n)
    }

    fn multiply(&self, a: &GnElement, b: &GnElement) -> GnElement {
        assert_eq!(a.rank(), self.n, "element rank does not match context");
        assert_eq!(b.rank(), self.n, "element rank does not match context");
        a.mul_unchecked(b)
    }

    fn invert(&self, a: &GnElement) -> GnElement {
        a.invert()
    }

    fn canonical_key(&self, a: &GnElement) -> String {
        a.canonical_key()
    }

    fn generators(&self) -> Vec<GnElement> {
        (1..=self.n)
            .map(|i| GnElement::generator(self.n, i).expect("index in range"))
            .collect()
    }

    fn evaluate(&self, word: &GeneratorWord) -> Result<GnElement> {
        self.normalize(word)
    }

    fn word_for(&self, a: &GnElement) -> Option<GeneratorWord> {
        Some(a.to_word())
    }
}
