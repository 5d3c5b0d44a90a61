//! Hantzsche-Wendt Bieberbach groups as groups of affine isometries `(B, b)`
//! with `B` diagonal `+-1` and `b` a half-integer vector.
//!
//! Translations are stored doubled so all arithmetic stays in the integers:
//! `(B, b)(C, c) = (BC, Bc + b)` needs no division.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chw::GnElement;
use crate::error::{Error, Result};
use crate::group::{commutator, power, GroupContext};
use crate::word::GeneratorWord;

/// Largest supported dimension; holonomy enumeration visits `2^(n-1)` elements.
pub const MAX_DIMENSION: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineIsometry {
    /// Diagonal of the linear part, entries `+1` or `-1`.
    linear: Vec<i8>,
    /// Twice the translation part.
    translation2: Vec<i64>,
}

impl AffineIsometry {
    pub fn identity(n: usize) -> Self {
        Self {
            linear: vec![1; n],
            translation2: vec![0; n],
        }
    }

    pub fn new(linear: Vec<i8>, translation2: Vec<i64>) -> Result<Self> {
        if linear.len() != translation2.len() {
            return Err(Error::RankMismatch(linear.len(), translation2.len()));
        }
        if linear.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::MalformedHwData(
                "linear part must have diagonal entries +1 or -1".into(),
            ));
        }
        Ok(Self {
            linear,
            translation2,
        })
    }

    /// The pure translation `(1, t/2)`.
    pub fn translation(translation2: Vec<i64>) -> Self {
        Self {
            linear: vec![1; translation2.len()],
            translation2,
        }
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn linear(&self) -> &[i8] {
        &self.linear
    }

    pub fn translation2(&self) -> &[i64] {
        &self.translation2
    }

    pub fn is_identity(&self) -> bool {
        self.is_translation() && self.translation2.iter().all(|&t| t == 0)
    }

    pub fn is_translation(&self) -> bool {
        self.linear.iter().all(|&s| s == 1)
    }

    pub fn compose(&self, other: &AffineIsometry) -> Result<AffineIsometry> {
        if self.dim() != other.dim() {
            return Err(Error::RankMismatch(self.dim(), other.dim()));
        }
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &AffineIsometry) -> AffineIsometry {
        let linear = self
            .linear
            .iter()
            .zip(&other.linear)
            .map(|(a, b)| a * b)
            .collect();
        let translation2 = self
            .linear
            .iter()
            .zip(&other.translation2)
            .zip(&self.translation2)
            .map(|((&s, &c), &b)| s as i64 * c + b)
            .collect();
        AffineIsometry {
            linear,
            translation2,
        }
    }

    /// `(B, b)^-1 = (B^-1, -B^-1 b)`; here `B^-1 = B`.
    pub fn inverse(&self) -> AffineIsometry {
        AffineIsometry {
            linear: self.linear.clone(),
            translation2: self
                .linear
                .iter()
                .zip(&self.translation2)
                .map(|(&s, &t)| -(s as i64) * t)
                .collect(),
        }
    }

    /// Holonomy as a bitmask, bit `j` set where the diagonal is `-1`.
    fn sign_mask(&self) -> u32 {
        self.linear
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == -1)
            .fold(0, |m, (j, _)| m | (1 << j))
    }
}

impl fmt::Display for AffineIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let diag: Vec<String> = self.linear.iter().map(|s| s.to_string()).collect();
        let trans: Vec<String> = self.translation2.iter().map(|&t| half(t)).collect();
        write!(f, "(diag({}), ({}))", diag.join(","), trans.join(","))
    }
}

fn half(t: i64) -> String {
    if t % 2 == 0 {
        (t / 2).to_string()
    } else {
        format!("{t}/2")
    }
}

/// Data of a HW group in dimension `n`: generator `beta_i` has linear part
/// `+1` at `(i, i)` and `-1` elsewhere, and translation `b2[i] / 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HwData {
    n: usize,
    b2: Vec<Vec<u8>>,
}

impl HwData {
    /// Checks the structural shape: odd `n <= 15`, an `n x n` table of 0/1.
    pub fn new(n: usize, b2: Vec<Vec<u8>>) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::EvenDimension(n));
        }
        if n > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge(n));
        }
        if b2.len() != n || b2.iter().any(|row| row.len() != n) {
            return Err(Error::MalformedHwData(format!("b2 must be {n}x{n}")));
        }
        if b2.iter().flatten().any(|&v| v > 1) {
            return Err(Error::MalformedHwData(
                "doubled translations must be 0 or 1".into(),
            ));
        }
        Ok(Self { n, b2 })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            b2: Vec<Vec<u8>>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| Error::MalformedHwData(e.to_string()))?;
        Self::new(raw.n, raw.b2)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b2(&self) -> &[Vec<u8>] {
        &self.b2
    }

    /// `beta_i`, 1-based.
    pub fn beta(&self, i: usize) -> AffineIsometry {
        let linear = (0..self.n)
            .map(|j| if j == i - 1 { 1 } else { -1 })
            .collect();
        let translation2 = self.b2[i - 1].iter().map(|&v| v as i64).collect();
        AffineIsometry {
            linear,
            translation2,
        }
    }

    /// `e_i` as the translation `(1, epsilon_i)`.
    pub fn unit_translation(&self, i: usize) -> AffineIsometry {
        let mut t = vec![0; self.n];
        t[i - 1] = 2;
        AffineIsometry::translation(t)
    }

    pub fn group(&self) -> HwGroup {
        HwGroup { data: self.clone() }
    }
}

/// The group generated by `beta_1, ..., beta_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HwGroup {
    data: HwData,
}

impl HwGroup {
    pub fn data(&self) -> &HwData {
        &self.data
    }
}

impl GroupContext for HwGroup {
    type Element = AffineIsometry;

    fn name(&self) -> String {
        format!("hw:{}", self.data.n)
    }

    fn rank(&self) -> usize {
        self.data.n
    }

    fn identity(&self) -> AffineIsometry {
        AffineIsometry::identity(self.data.n)
    }

    fn multiply(&self, a: &AffineIsometry, b: &AffineIsometry) -> AffineIsometry {
        assert_eq!(
            a.dim(),
            self.data.n,
            "element dimension does not match context"
        );
        assert_eq!(
            b.dim(),
            self.data.n,
            "element dimension does not match context"
        );
        a.compose_unchecked(b)
    }

    fn invert(&self, a: &AffineIsometry) -> AffineIsometry {
        a.inverse()
    }

    fn canonical_key(&self, a: &AffineIsometry) -> String {
        let diag: Vec<String> = a.linear.iter().map(|s| s.to_string()).collect();
        let trans: Vec<String> = a.translation2.iter().map(|t| t.to_string()).collect();
        format!("B:{};t2:{}", diag.join(","), trans.join(","))
    }

    fn generators(&self) -> Vec<AffineIsometry> {
        (1..=self.data.n).map(|i| self.data.beta(i)).collect()
    }
}

/// Outcome of [`validate_hw`]; every check is run even after a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HwReport {
    pub n: usize,
    /// `beta_i^2 = e_i` for every `i`.
    pub squares_ok: bool,
    /// The linear parts generate all `2^(n-1)` determinant-one diagonal sign matrices.
    pub holonomy_ok: bool,
    /// `beta_i^-1 beta_j^2 beta_i beta_j^2 = 1` for all `i != j`.
    pub relators_ok: bool,
    /// The translations in the group are exactly `Z^n`: the commutators
    /// `[beta_i, beta_j]` and `beta_1 ... beta_n` lie in `Z^n`.
    pub lattice_ok: bool,
    pub torsion_witness: Option<GeneratorWord>,
    /// `|{i < n : [b_i]_n = 1/2}|`, which must be odd.
    pub parity_count: usize,
    pub failures: Vec<String>,
}

impl HwReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn parity_ok(&self) -> bool {
        self.parity_count % 2 == 1
    }
}

pub fn validate_hw(data: &HwData) -> HwReport {
    let n = data.n;
    let ctx = data.group();
    let mut failures = Vec::new();

    let bad_squares: Vec<usize> = (1..=n)
        .filter(|&i| power(&ctx, &data.beta(i), 2) != data.unit_translation(i))
        .collect();
    if !bad_squares.is_empty() {
        failures.push(format!("beta_i^2 != e_i for i in {bad_squares:?}"));
    }

    let holonomy = holonomy_closure(data);
    let full = 1usize << (n - 1);
    let det_one = holonomy.iter().all(|m| m.count_ones() % 2 == 0);
    let holonomy_ok = holonomy.len() == full && det_one;
    if !holonomy_ok {
        failures.push(format!(
            "holonomy has {} elements, expected {full}",
            holonomy.len()
        ));
    }

    let mut bad_relators = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j
                && !ctx
                    .evaluate(&crate::chw::relator(i, j))
                    .unwrap()
                    .is_identity()
            {
                bad_relators.push((i, j));
            }
        }
    }
    if !bad_relators.is_empty() {
        failures.push(format!("relators fail for {bad_relators:?}"));
    }

    let lattice_failures = lattice_failures(data);
    let lattice_ok = lattice_failures.is_empty();
    if !lattice_ok {
        failures.push(format!(
            "non-lattice translations: {}",
            lattice_failures.join(", ")
        ));
    }

    let witness = torsion_witness(data);
    if let Some(w) = &witness {
        failures.push(format!("torsion element {w}"));
    }

    let parity_count = parity_count(data);
    if parity_count.is_multiple_of(2) {
        failures.push(format!(
            "{parity_count} of beta_1..beta_{} have [b_i]_n = 1/2; must be odd",
            n - 1
        ));
    }

    HwReport {
        n,
        squares_ok: bad_squares.is_empty(),
        holonomy_ok,
        relators_ok: bad_relators.is_empty(),
        lattice_ok,
        torsion_witness: witness,
        parity_count,
        failures,
    }
}

/// Lifts of the holonomy relations that are translations off the lattice.
fn lattice_failures(data: &HwData) -> Vec<String> {
    let n = data.n;
    let ctx = data.group();
    let off_lattice =
        |g: &AffineIsometry| !g.is_translation() || g.translation2.iter().any(|t| t % 2 != 0);
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let c = commutator(&ctx, &data.beta(i), &data.beta(j));
            if off_lattice(&c) {
                out.push(format!("[beta_{i}, beta_{j}] = {c}"));
            }
        }
    }
    let all = (1..=n).fold(ctx.identity(), |acc, i| ctx.multiply(&acc, &data.beta(i)));
    if off_lattice(&all) {
        out.push(format!("beta_1 ... beta_{n} = {all}"));
    }
    out
}

fn holonomy_closure(data: &HwData) -> Vec<u32> {
    let gens: Vec<u32> = (1..=data.n).map(|i| data.beta(i).sign_mask()).collect();
    let mut seen = std::collections::BTreeSet::from([0u32]);
    let mut frontier = vec![0u32];
    while let Some(m) = frontier.pop() {
        for g in &gens {
            if seen.insert(m ^ g) {
                frontier.push(m ^ g);
            }
        }
    }
    seen.into_iter().collect()
}

fn parity_count(data: &HwData) -> usize {
    let n = data.n;
    (0..n - 1).filter(|&i| data.b2[i][n - 1] == 1).count()
}

/// Looks for an element of finite order.
///
/// The linear parts of `beta_1, ..., beta_{n-1}` form a basis of the
/// holonomy, so each nonidentity holonomy element is the linear part of
/// exactly one ascending product `beta_S`. Since `(A, a)^2 = (A^2, Aa + a)`,
/// the coset `beta_S * Z^n` contains an element of finite order iff the
/// translation of `beta_S` is integral on the `+1` eigenspace of its
/// linear part. Returns the first offending `beta_S` as a word.
pub fn torsion_witness(data: &HwData) -> Option<GeneratorWord> {
    let n = data.n;
    let betas: Vec<AffineIsometry> = (1..=n).map(|i| data.beta(i)).collect();
    for subset in 1u32..(1 << (n - 1)) {
        let mut product = AffineIsometry::identity(n);
        let mut word = GeneratorWord::new();
        for (i, beta) in betas.iter().enumerate().take(n - 1) {
            if subset & (1 << i) != 0 {
                product = product.compose_unchecked(beta);
                word.push(i + 1, 1);
            }
        }
        let fixed_integral = product
            .linear
            .iter()
            .zip(&product.translation2)
            .all(|(&s, &t)| s == -1 || t % 2 == 0);
        if fixed_integral {
            return Some(word);
        }
    }
    None
}

fn check_permutation(pi: &[usize], len: usize) -> Result<()> {
    if pi.len() != len {
        return Err(Error::InvalidPermutation(format!(
            "expected {len} entries, got {}",
            pi.len()
        )));
    }
    let mut seen = vec![false; len];
    for &v in pi {
        if v == 0 || v > len || std::mem::replace(&mut seen[v - 1], true) {
            return Err(Error::InvalidPermutation(format!(
                "{pi:?} is not a permutation of 1..={len}"
            )));
        }
    }
    Ok(())
}

/// `P = beta_{pi(1)} ... beta_{pi(n-1)}`, composed left to right.
pub fn permutation_product(data: &HwData, pi: &[usize]) -> Result<AffineIsometry> {
    check_permutation(pi, data.n - 1)?;
    Ok(pi.iter().fold(AffineIsometry::identity(data.n), |acc, &i| {
        acc.compose_unchecked(&data.beta(i))
    }))
}

/// `sum_i (-1)^(i-1) [b_{pi(i)}]_n`, doubled. Equals the last doubled
/// translation coordinate of [`permutation_product`].
pub fn alternating_last_coordinate(data: &HwData, pi: &[usize]) -> Result<i64> {
    check_permutation(pi, data.n - 1)?;
    let n = data.n;
    Ok(pi
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let v = data.b2[i - 1][n - 1] as i64;
            if k % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .sum())
}

/// Evidence that `x_i -> beta_i` maps `G_{n-1}` onto the HW group: `beta_n`
/// written as a word in `beta_1, ..., beta_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectionCertificate {
    /// Indices `i < n` with `[b_i]_n = 1/2`.
    pub odd_set: Vec<usize>,
    pub permutation: Vec<usize>,
    pub p: AffineIsometry,
    /// `P^2 = sign * e_n`.
    pub sign: i8,
    pub beta_n_word: GeneratorWord,
}

pub fn surjection_certificate(data: &HwData) -> Result<SurjectionCertificate> {
    let report = validate_hw(data);
    if !report.is_valid() {
        return Err(Error::InvalidHwData(report.failures.join("; ")));
    }
    let n = data.n;
    let ctx = data.group();

    // Odd set first, so the alternating sum of last coordinates is 1/2.
    let odd_set: Vec<usize> = (1..n).filter(|&i| data.b2[i - 1][n - 1] == 1).collect();
    let permutation: Vec<usize> = odd_set
        .iter()
        .copied()
        .chain((1..n).filter(|i| !odd_set.contains(i)))
        .collect();
    let p = permutation_product(data, &permutation)?;
    let p_squared = power(&ctx, &p, 2);
    let e_n = data.unit_translation(n);
    let sign = if p_squared == e_n {
        1
    } else if p_squared == e_n.inverse() {
        -1
    } else {
        return Err(Error::CertificateFailed(format!(
            "P^2 = {p_squared}, not +-e_n"
        )));
    };

    // beta_1 ... beta_n is a lattice translation lambda, so
    // beta_n = beta_{n-1}^-1 ... beta_1^-1 lambda.
    let all = (1..=n).fold(ctx.identity(), |acc, i| ctx.multiply(&acc, &data.beta(i)));
    if !all.is_translation() || all.translation2.iter().any(|t| t % 2 != 0) {
        return Err(Error::CertificateFailed(format!(
            "beta_1 ... beta_n = {all} is not a lattice translation"
        )));
    }
    let lambda: Vec<i64> = all.translation2.iter().map(|t| t / 2).collect();

    let mut word = GeneratorWord::new();
    for i in (1..n).rev() {
        word.push_merged(i, -1);
    }
    // e_i = beta_i^2 for i < n
    for i in 1..n {
        word.push_merged(i, 2 * lambda[i - 1]);
    }
    // e_n = P^(2 sign)
    let p_word = GeneratorWord::from_tokens(permutation.iter().map(|&i| (i, 1)));
    let reps = 2 * sign as i64 * lambda[n - 1];
    let unit = if reps > 0 {
        p_word.clone()
    } else {
        p_word.inverse()
    };
    for _ in 0..reps.unsigned_abs() {
        word.extend(&unit);
    }

    let value = ctx.evaluate(&word)?;
    if value != data.beta(n) {
        return Err(Error::CertificateFailed(format!(
            "word evaluates to {value}, not beta_n"
        )));
    }
    Ok(SurjectionCertificate {
        odd_set,
        permutation,
        p,
        sign,
        beta_n_word: word,
    })
}

/// The homomorphism `G_{n-1} -> Gamma`, `x_i -> beta_i`.
pub fn phi_evaluate(data: &HwData, g: &GnElement) -> Result<AffineIsometry> {
    let n = data.n;
    if g.rank() + 1 != n {
        return Err(Error::RankMismatch(g.rank(), n - 1));
    }
    let letters = g
        .coset_word()
        .iter()
        .fold(AffineIsometry::identity(n), |acc, &i| {
            acc.compose_unchecked(&data.beta(i))
        });
    // x_i^2 -> e_i
    let mut t = vec![0; n];
    for (j, &a) in g.vector().iter().enumerate() {
        t[j] = 2 * a;
    }
    Ok(letters.compose_unchecked(&AffineIsometry::translation(t)))
}

/// Every datum of dimension `n <= 5` with `[b_i]_i = 1/2` that passes
/// [`validate_hw`], in lexicographic order of the off-diagonal bits.
pub fn enumerate_valid(n: usize) -> Result<Vec<HwData>> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    if n > 5 {
        return Err(Error::DimensionTooLarge(n));
    }
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..(1 << off.len()) {
        let mut b2 = vec![vec![0u8; n]; n];
        for (i, row) in b2.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (k, &(i, j)) in off.iter().enumerate() {
            b2[i][j] = ((bits >> (off.len() - 1 - k)) & 1) as u8;
        }
        let data = HwData::new(n, b2)?;
        if validate_hw(&data).is_valid() {
            out.push(data);
        }
    }
    Ok(out)
}
