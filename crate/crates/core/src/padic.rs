//! Truncated p-adic integers and matrices, the congruence subgroups
//! `{A : A = 1 mod p}` (p odd) and `{A : A = 1 mod 4}` (p = 2), and unique
//! roots inside them computed through truncated `log` / `exp` series.
//!
//! # Precision contract
//!
//! A value at precision `k` is known modulo `p^k`. Write `l` for the level
//! of the congruence subgroup (`l = 1` for odd `p`, `l = 2` for `p = 2`).
//!
//! * `log(1 + p^l X) = sum_m (-1)^(m+1) p^(lm - v_p(m)) X^m / u_m` where `u_m`
//!   is the unit part of `m`. Every term has `lm - v_p(m) >= l`, so an
//!   error of `p^(k-l)` in `X` only moves the result by `p^k`: the output is
//!   exact at the input precision. Summation stops at the last `m` with
//!   `lm - v_p(m) < k`; that count is reported as `terms`.
//! * `exp(p^l Y)` works the same way with `v_p(m!)` in place of `v_p(m)`.
//! * An `m`-th root divides the logarithm by `m`, which costs `v_p(m)`
//!   digits: roots are reported at precision `k - v_p(m)`.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^k`, checked to stay below `2^62` so sums of two residues cannot overflow.
fn modulus(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .filter(|&m| m < (1 << 62))
        .ok_or(Error::ModulusTooLarge { p, k })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// p-adic valuation of a nonzero integer.
fn valuation_u64(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Inverse of a unit modulo `m`.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

fn reduce_signed(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

/// Level of the congruence subgroup: 1 for odd primes, 2 for `p = 2`.
pub fn level(p: u64) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// An element of `Z_p` known modulo `p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PadicScalar {
    p: u64,
    k: u32,
    residue: u64,
}

impl PadicScalar {
    pub fn new(p: u64, k: u32, value: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let m = modulus(p, k)?;
        Ok(Self {
            p,
            k,
            residue: reduce_signed(value, m),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }

    fn binary(&self, other: &Self, f: impl Fn(u64, u64, u64) -> u64) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        let k = self.k.min(other.k);
        let m = self.p.pow(k);
        Self {
            p: self.p,
            k,
            residue: f(self.residue % m, other.residue % m, m),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binary(other, |a, b, m| (a + b) % m)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binary(other, |a, b, m| (a + m - b) % m)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.binary(other, mul_mod)
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        Self {
            residue: (m - self.residue) % m,
            ..*self
        }
    }

    /// Inverse of a unit, exact at the same precision.
    pub fn inverse(&self) -> Result<Self> {
        inv_mod(self.residue, self.modulus())
            .map(|residue| Self { residue, ..*self })
            .ok_or(Error::NotInvertible)
    }

    /// `None` when the value is zero at this precision.
    pub fn valuation(&self) -> Option<u32> {
        (self.residue != 0).then(|| valuation_u64(self.residue, self.p))
    }

    pub fn reduce_to(&self, k: u32) -> Self {
        let k = k.min(self.k);
        Self {
            k,
            residue: self.residue % self.p.pow(k),
            ..*self
        }
    }

    /// Representative in `(-p^k/2, p^k/2]`.
    pub fn signed(&self) -> i64 {
        signed_residue(self.residue, self.modulus())
    }
}

fn signed_residue(r: u64, m: u64) -> i64 {
    if r > m / 2 {
        r as i64 - m as i64
    } else {
        r as i64
    }
}

/// An `n x n` matrix over `Z_p` known modulo `p^k`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PadicMatrix {
    p: u64,
    k: u32,
    n: usize,
    entries: Vec<u64>,
}

impl PadicMatrix {
    pub fn from_entries(p: u64, k: u32, n: usize, entries: &[i64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if entries.len() != n * n {
            return Err(Error::PadicPrecondition(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let m = modulus(p, k)?;
        Ok(Self {
            p,
            k,
            n,
            entries: entries.iter().map(|&x| reduce_signed(x, m)).collect(),
        })
    }

    pub fn from_rows(p: u64, k: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::PadicPrecondition("matrix must be square".into()));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::from_entries(p, k, n, &flat)
    }

    pub fn identity(p: u64, k: u32, n: usize) -> Result<Self> {
        let mut flat = vec![0; n * n];
        for i in 0..n {
            flat[i * n + i] = 1;
        }
        Self::from_entries(p, k, n, &flat)
    }

    pub fn zero(p: u64, k: u32, n: usize) -> Result<Self> {
        Self::from_entries(p, k, n, &vec![0; n * n])
    }

    /// `1 + c E_ij` (0-based indices).
    pub fn elementary(p: u64, k: u32, n: usize, i: usize, j: usize, c: i64) -> Result<Self> {
        let mut a = Self::identity(p, k, n)?;
        let m = a.modulus();
        let idx = i * n + j;
        a.entries[idx] = (a.entries[idx] + reduce_signed(c, m)) % m;
        Ok(a)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn residues(&self) -> &[u64] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> PadicScalar {
        PadicScalar {
            p: self.p,
            k: self.k,
            residue: self.entries[i * self.n + j],
        }
    }

    /// Rows of signed representatives.
    pub fn signed_rows(&self) -> Vec<Vec<i64>> {
        let m = self.modulus();
        self.entries
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|row| row.iter().map(|&r| signed_residue(r, m)).collect())
            .collect()
    }

    fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }

    fn with_entries(&self, k: u32, entries: Vec<u64>) -> Self {
        Self {
            p: self.p,
            k,
            n: self.n,
            entries,
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed primes");
        assert_eq!(self.n, other.n, "mixed dimensions");
    }

    /// Same matrix known to a lower precision.
    pub fn reduce_to(&self, k: u32) -> Self {
        let k = k.min(self.k);
        let m = self.p.pow(k);
        self.with_entries(k, self.entries.iter().map(|r| r % m).collect())
    }

    /// Equality modulo `p^k` (clamped to both precisions).
    pub fn eq_at(&self, other: &Self, k: u32) -> bool {
        self.check_compatible(other);
        let k = k.min(self.k).min(other.k);
        let m = self.p.pow(k);
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a % m == b % m)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let k = self.k.min(other.k);
        let m = self.p.pow(k);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a % m + b % m) % m)
            .collect();
        self.with_entries(k, entries)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        self.with_entries(self.k, self.entries.iter().map(|&a| (m - a) % m).collect())
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus();
        let c = c % m;
        self.with_entries(
            self.k,
            self.entries.iter().map(|&a| mul_mod(a, c, m)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let k = self.k.min(other.k);
        let m = self.p.pow(k);
        let n = self.n;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.entries[i * n + l] % m;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.entries[l * n + j] % m;
                    let cell = &mut entries[i * n + j];
                    *cell = (*cell + mul_mod(a, b, m)) % m;
                }
            }
        }
        self.with_entries(k, entries)
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.p, self.k, self.n).expect("parameters already validated")
    }

    /// `A^e`; negative exponents need an invertible matrix.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = self.identity_like();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Inverse by Gaussian elimination mod `p` followed by Hensel lifting
    /// `X <- X (2 - A X)`, which doubles the known precision each step.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let p = self.p;
        // Gauss-Jordan on [A mod p | I]
        let mut a: Vec<u64> = self.entries.iter().map(|x| x % p).collect();
        let mut inv = vec![0u64; n * n];
        for i in 0..n {
            inv[i * n + i] = 1;
        }
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r * n + col] != 0)
                .ok_or(Error::NotInvertible)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let scale = inv_mod(a[col * n + col], p).ok_or(Error::NotInvertible)?;
            for j in 0..n {
                a[col * n + j] = mul_mod(a[col * n + j], scale, p);
                inv[col * n + j] = mul_mod(inv[col * n + j], scale, p);
            }
            for r in 0..n {
                let f = a[r * n + col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = (a[r * n + j] + p - mul_mod(f, a[col * n + j], p)) % p;
                    inv[r * n + j] = (inv[r * n + j] + p - mul_mod(f, inv[col * n + j], p)) % p;
                }
            }
        }
        let mut x = self.with_entries(self.k, inv);
        let two = self.identity_like().scale(2);
        let mut known = 1;
        while known < self.k {
            x = x.mul(&two.sub(&self.mul(&x)));
            known *= 2;
        }
        Ok(x)
    }

    /// Minimum valuation over the entries of `A - 1`; `None` when `A = 1`
    /// at this precision.
    pub fn valuation_from_identity(&self) -> Option<u32> {
        let d = self.sub(&self.identity_like());
        d.min_valuation()
    }

    fn min_valuation(&self) -> Option<u32> {
        self.entries
            .iter()
            .filter(|&&x| x != 0)
            .map(|&x| valuation_u64(x, self.p))
            .min()
    }

    /// Entries are all divisible by `p^e`; returns `A / p^e` known mod `p^(k-e)`.
    fn divide_by_p_power(&self, e: u32) -> Self {
        let d = self.p.pow(e);
        debug_assert!(self.entries.iter().all(|x| x % d == 0));
        self.with_entries(self.k - e, self.entries.iter().map(|x| x / d).collect())
    }

    /// Lifts the residues to a higher precision, keeping the representatives.
    fn lift_to(&self, k: u32) -> Self {
        debug_assert!(k >= self.k);
        self.with_entries(k, self.entries.clone())
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other).mul(&self.inverse()?).mul(&other.inverse()?))
    }

    /// Membership in the congruence subgroup: `A = 1 mod p` for odd `p`,
    /// `A = 1 mod 4` for `p = 2`.
    pub fn in_congruence_subgroup(&self) -> Result<bool> {
        let l = level(self.p);
        if self.k < l {
            return Err(Error::InsufficientPrecision {
                needed: l,
                have: self.k,
            });
        }
        Ok(self.eq_at(&self.identity_like(), l))
    }

    /// Uniform sample `1 + p^l U` with `U` uniform modulo `p^(k-l)`.
    pub fn random_congruence_element<R: Rng + ?Sized>(
        p: u64,
        k: u32,
        n: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let l = level(p);
        Self::random_near_identity(p, k, n, l, rng)
    }

    /// Uniform sample `1 + p^a U` with `U` uniform modulo `p^(k-a)`.
    pub fn random_near_identity<R: Rng + ?Sized>(
        p: u64,
        k: u32,
        n: usize,
        a: u32,
        rng: &mut R,
    ) -> Result<Self> {
        if k < a {
            return Err(Error::InsufficientPrecision { needed: a, have: k });
        }
        let id = Self::identity(p, k, n)?;
        let span = p.pow(k - a);
        let step = p.pow(a);
        let m = id.modulus();
        let entries = id
            .entries
            .iter()
            .map(|&e| (e + rng.gen_range(0..span) * step) % m)
            .collect();
        Ok(id.with_entries(k, entries))
    }
}

impl fmt::Display for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .signed_rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}] mod {}^{}", rows.join(", "), self.p, self.k)
    }
}

/// A truncated-series result together with its precision bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesOutput {
    pub value: PadicMatrix,
    pub input_precision: u32,
    /// Precision at which `value` is exact.
    pub output_precision: u32,
    /// Number of series terms summed.
    pub terms: u32,
}

impl SeriesOutput {
    pub fn precision_loss(&self) -> u32 {
        self.input_precision - self.output_precision
    }
}

/// Largest `m` with `l*m - v_p(m) < k`: the last nonzero logarithm term.
pub fn log_term_bound(p: u64, k: u32) -> u32 {
    let l = level(p);
    let mut last = 0;
    // l*m - v_p(m) >= m - log_p(m), so m <= k + 64 covers every candidate
    for m in 1..=(k + 64) {
        if l * m < k + valuation_u64(m as u64, p) {
            last = m;
        }
    }
    last
}

/// Largest `m` with `l*m - v_p(m!) < k`: the last nonzero exponential term.
pub fn exp_term_bound(p: u64, k: u32) -> u32 {
    let l = level(p);
    let mut last = 0;
    let mut fact_val = 0;
    for m in 1..=(2 * k + 64) {
        fact_val += valuation_u64(m as u64, p);
        if l * m < k + fact_val {
            last = m;
        }
    }
    last
}

/// Truncated matrix logarithm of an element of the congruence subgroup,
/// exact at the input precision.
pub fn mat_log(a: &PadicMatrix) -> Result<SeriesOutput> {
    if !a.in_congruence_subgroup()? {
        return Err(Error::NotInCongruenceSubgroup);
    }
    let (p, k, l) = (a.p, a.k, level(a.p));
    let x = a.sub(&a.identity_like()).divide_by_p_power(l).lift_to(k);
    let terms = log_term_bound(p, k);
    let mut sum = PadicMatrix::zero(p, k, a.n)?;
    let mut x_pow = a.identity_like();
    let m_mod = a.modulus();
    for m in 1..=terms {
        x_pow = x_pow.mul(&x);
        let v = valuation_u64(m as u64, p);
        let shift = l * m - v;
        if shift >= k {
            continue;
        }
        let unit = m as u64 / p.pow(v);
        let coeff = mul_mod(
            p.pow(shift),
            inv_mod(unit % m_mod, m_mod).expect("unit"),
            m_mod,
        );
        let term = x_pow.scale(coeff);
        sum = if m % 2 == 1 {
            sum.add(&term)
        } else {
            sum.sub(&term)
        };
    }
    Ok(SeriesOutput {
        value: sum,
        input_precision: k,
        output_precision: k,
        terms,
    })
}

/// Truncated matrix exponential of `L = 0 mod p^l`, exact at the input precision.
pub fn mat_exp(lie: &PadicMatrix) -> Result<SeriesOutput> {
    let (p, k, l) = (lie.p, lie.k, level(lie.p));
    if k < l {
        return Err(Error::InsufficientPrecision { needed: l, have: k });
    }
    if !lie.eq_at(&PadicMatrix::zero(p, k, lie.n)?, l) {
        return Err(Error::PadicPrecondition(format!(
            "exp needs an argument divisible by {}",
            p.pow(l)
        )));
    }
    let y = lie.divide_by_p_power(l).lift_to(k);
    let terms = exp_term_bound(p, k);
    let m_mod = lie.modulus();
    let mut sum = lie.identity_like();
    let mut y_pow = lie.identity_like();
    let mut fact_val = 0;
    let mut fact_unit = 1u64;
    for m in 1..=terms {
        y_pow = y_pow.mul(&y);
        let v = valuation_u64(m as u64, p);
        fact_val += v;
        fact_unit = mul_mod(fact_unit, (m as u64 / p.pow(v)) % m_mod, m_mod);
        let shift = l * m - fact_val;
        if shift >= k {
            continue;
        }
        let coeff = mul_mod(
            p.pow(shift),
            inv_mod(fact_unit, m_mod).expect("unit"),
            m_mod,
        );
        sum = sum.add(&y_pow.scale(coeff));
    }
    Ok(SeriesOutput {
        value: sum,
        input_precision: k,
        output_precision: k,
        terms,
    })
}

/// The unique `m`-th root of `A` inside the congruence subgroup,
/// `exp(log(A) / m)`, known to precision `k - v_p(m)`.
pub fn nth_root(a: &PadicMatrix, m: u64) -> Result<SeriesOutput> {
    if m == 0 {
        return Err(Error::PadicPrecondition(
            "root order must be positive".into(),
        ));
    }
    if !a.in_congruence_subgroup()? {
        return Err(Error::NotInCongruenceSubgroup);
    }
    let (p, k, l) = (a.p, a.k, level(a.p));
    if m == 1 {
        return Ok(SeriesOutput {
            value: a.clone(),
            input_precision: k,
            output_precision: k,
            terms: 0,
        });
    }
    let v = valuation_u64(m, p);
    if k <= v + l {
        return Err(Error::InsufficientPrecision {
            needed: v + l + 1,
            have: k,
        });
    }
    let log = mat_log(a)?;
    let lie = log.value;
    // log(A) / p^v must still lie in p^l M for the exponential to converge
    if !lie.eq_at(&PadicMatrix::zero(p, k, a.n)?, v + l) {
        return Err(Error::NoRoot(m));
    }
    let out_k = k - v;
    let scaled = lie.divide_by_p_power(v);
    let unit = m / p.pow(v);
    let out_mod = p.pow(out_k);
    let scaled = scaled.scale(inv_mod(unit % out_mod, out_mod).expect("unit"));
    let root = mat_exp(&scaled)?;
    let check = root.value.pow(m as i64)?;
    if !check.eq_at(a, out_k) {
        return Err(Error::CertificateFailed(format!(
            "root^{m} does not reproduce the input mod {p}^{out_k}"
        )));
    }
    Ok(SeriesOutput {
        value: root.value,
        input_precision: k,
        output_precision: out_k,
        terms: log.terms.max(root.terms),
    })
}

/// Outcome of [`power_valuation_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerValuationReport {
    /// `v(A - 1)`, or `None` for the identity (degenerate pass).
    pub valuation: Option<u32>,
    /// Exponent `e` of the modulus `p^e` the congruence was tested at.
    pub checked_modulus: Option<u32>,
    pub passed: bool,
}

/// For odd `p` and `A = 1 + p^a U` with `U != 0 mod p`, checks
/// `A^p = 1 + p^(a+1) U mod p^(a+2)`.
pub fn power_valuation_check(a: &PadicMatrix) -> Result<PowerValuationReport> {
    let p = a.p;
    if p == 2 {
        return Err(Error::PadicPrecondition(
            "power valuation check needs odd p".into(),
        ));
    }
    let Some(val) = a.valuation_from_identity() else {
        return Ok(PowerValuationReport {
            valuation: None,
            checked_modulus: None,
            passed: true,
        });
    };
    if val == 0 {
        return Err(Error::NotInCongruenceSubgroup);
    }
    if a.k < val + 2 {
        return Err(Error::InsufficientPrecision {
            needed: val + 2,
            have: a.k,
        });
    }
    let target_k = val + 2;
    let u = a.sub(&a.identity_like()).divide_by_p_power(val);
    let expected = a
        .identity_like()
        .add(&u.lift_to(a.k).scale(p.pow(val + 1)))
        .reduce_to(target_k);
    let actual = a.reduce_to(target_k).pow(p as i64)?;
    Ok(PowerValuationReport {
        valuation: Some(val),
        checked_modulus: Some(target_k),
        passed: actual.eq_at(&expected, target_k),
    })
}

/// Evidence that a commutator of two congruence-subgroup elements is a
/// `p`-th power of a congruence-subgroup element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerfulCertificate {
    pub commutator: PadicMatrix,
    /// `v(C - 1)`, `None` when `C = 1` at full precision.
    pub commutator_valuation: Option<u32>,
    pub root: PadicMatrix,
    pub root_precision: u32,
}

pub fn powerful_certificate(a: &PadicMatrix, b: &PadicMatrix) -> Result<PowerfulCertificate> {
    if a.k < 4 || b.k < 4 {
        return Err(Error::InsufficientPrecision {
            needed: 4,
            have: a.k.min(b.k),
        });
    }
    if !a.in_congruence_subgroup()? || !b.in_congruence_subgroup()? {
        return Err(Error::NotInCongruenceSubgroup);
    }
    let p = a.p;
    let l = level(p);
    let c = a.commutator(b)?;
    let val = c.valuation_from_identity();
    if val.is_some_and(|v| v < 2 * l) {
        return Err(Error::CertificateFailed(format!(
            "commutator is not 1 mod {p}^{}",
            2 * l
        )));
    }
    let root = nth_root(&c, p)?;
    if !root.value.in_congruence_subgroup()? {
        return Err(Error::CertificateFailed(
            "root left the congruence subgroup".into(),
        ));
    }
    if !root.value.pow(p as i64)?.eq_at(&c, root.output_precision) {
        return Err(Error::CertificateFailed(
            "root^p differs from the commutator".into(),
        ));
    }
    Ok(PowerfulCertificate {
        commutator: c,
        commutator_valuation: val,
        root: root.value,
        root_precision: root.output_precision,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairOutcome {
    /// `X != Y` at the root precision and `X^m != Y^m`.
    Distinct,
    /// `X = Y` at the root precision; equal powers are expected.
    Indistinguishable,
    /// `X != Y` at the root precision yet `X^m = Y^m`: would contradict uniqueness.
    Failure,
}

/// Compares `X^m` and `Y^m` at the input precision against `X`, `Y` at the
/// root precision `k - v_p(m)`.
pub fn compare_pair(x: &PadicMatrix, y: &PadicMatrix, m: u64) -> Result<PairOutcome> {
    let v = valuation_u64(m, x.p);
    let root_k = x.k.min(y.k).saturating_sub(v);
    let same_root = x.eq_at(y, root_k);
    let same_power = x.pow(m as i64)?.eq_at(&y.pow(m as i64)?, x.k.min(y.k));
    Ok(match (same_root, same_power) {
        (true, _) => PairOutcome::Indistinguishable,
        (false, false) => PairOutcome::Distinct,
        (false, true) => PairOutcome::Failure,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniqueRootReport {
    pub p: u64,
    pub dim: usize,
    pub m: u64,
    pub precision: u32,
    pub root_precision: u32,
    pub trials: usize,
    /// Trials where `nth_root(X^m, m) = X` at the root precision.
    pub roots_recovered: usize,
    pub distinct: usize,
    pub indistinguishable: usize,
    pub failures: usize,
}

impl UniqueRootReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.roots_recovered == self.trials
    }
}

/// Random sweep of the unique-root property with a seeded generator.
pub fn unique_root_property_check<R: Rng + ?Sized>(
    p: u64,
    dim: usize,
    m: u64,
    k: u32,
    trials: usize,
    rng: &mut R,
) -> Result<UniqueRootReport> {
    if m == 0 {
        return Err(Error::PadicPrecondition(
            "root order must be positive".into(),
        ));
    }
    let root_precision = k - valuation_u64(m, p).min(k);
    let mut report = UniqueRootReport {
        p,
        dim,
        m,
        precision: k,
        root_precision,
        trials,
        roots_recovered: 0,
        distinct: 0,
        indistinguishable: 0,
        failures: 0,
    };
    for _ in 0..trials {
        let x = PadicMatrix::random_congruence_element(p, k, dim, rng)?;
        let y = PadicMatrix::random_congruence_element(p, k, dim, rng)?;
        let root = nth_root(&x.pow(m as i64)?, m)?;
        if root.value.eq_at(&x, root.output_precision) {
            report.roots_recovered += 1;
        }
        match compare_pair(&x, &y, m)? {
            PairOutcome::Distinct => report.distinct += 1,
            PairOutcome::Indistinguishable => report.indistinguishable += 1,
            PairOutcome::Failure => report.failures += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_matrix(p: u64, k: u32, v: i64) -> PadicMatrix {
        PadicMatrix::from_entries(p, k, 1, &[v]).unwrap()
    }

    #[test]
    fn scalar_ring_ops() {
        let a = PadicScalar::new(3, 4, 10).unwrap();
        let b = PadicScalar::new(3, 2, -1).unwrap();
        assert_eq!(a.add(&b).residue(), 0);
        assert_eq!(a.add(&b).precision(), 2);
        assert_eq!(a.mul(&a).residue(), 100 % 81);
        assert_eq!(a.sub(&a).valuation(), None);
        assert_eq!(PadicScalar::new(3, 4, 18).unwrap().valuation(), Some(2));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).residue(), 1);
        assert!(PadicScalar::new(3, 4, 6).unwrap().inverse().is_err());
        assert_eq!(b.signed(), -1);
        assert!(PadicScalar::new(4, 2, 1).is_err());
    }

    #[test]
    fn congruence_membership() {
        for p in [2, 3, 5] {
            assert!(PadicMatrix::identity(p, 6, 2)
                .unwrap()
                .in_congruence_subgroup()
                .unwrap());
        }
        let a = PadicMatrix::elementary(3, 5, 2, 0, 1, 3).unwrap();
        assert!(a.in_congruence_subgroup().unwrap());
        let b = PadicMatrix::elementary(2, 5, 2, 0, 1, 2).unwrap();
        assert!(!b.in_congruence_subgroup().unwrap());
        let c = PadicMatrix::elementary(2, 5, 2, 0, 1, 4).unwrap();
        assert!(c.in_congruence_subgroup().unwrap());
        let short = PadicMatrix::identity(2, 1, 2).unwrap();
        assert!(matches!(
            short.in_congruence_subgroup(),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn inverse_by_lifting() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = PadicMatrix::random_near_identity(5, 10, 3, 0, &mut rng).unwrap();
            match a.inverse() {
                Ok(inv) => {
                    let id = PadicMatrix::identity(5, 10, 3).unwrap();
                    assert_eq!(a.mul(&inv), id);
                    assert_eq!(inv.mul(&a), id);
                }
                Err(Error::NotInvertible) => {}
                Err(e) => panic!("{e}"),
            }
        }
        let singular = PadicMatrix::from_rows(3, 4, &[vec![1, 3], vec![3, 9]]).unwrap();
        assert_eq!(singular.inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn log_exp_trivial_cases() {
        let id = PadicMatrix::identity(3, 8, 2).unwrap();
        assert_eq!(
            mat_log(&id).unwrap().value,
            PadicMatrix::zero(3, 8, 2).unwrap()
        );
        let zero = PadicMatrix::zero(5, 8, 2).unwrap();
        assert_eq!(
            mat_exp(&zero).unwrap().value,
            PadicMatrix::identity(5, 8, 2).unwrap()
        );
        let not_sub = scalar_matrix(3, 8, 2);
        assert_eq!(mat_log(&not_sub), Err(Error::NotInCongruenceSubgroup));
        assert!(mat_exp(&scalar_matrix(3, 8, 1)).is_err());
    }

    #[test]
    fn log_exp_roundtrip_scalar() {
        let four = scalar_matrix(3, 8, 4);
        let log = mat_log(&four).unwrap();
        let back = mat_exp(&log.value).unwrap();
        assert_eq!(back.output_precision, 8);
        assert!(back.value.eq_at(&four, back.output_precision));
    }

    #[test]
    fn log_is_additive_on_scalars() {
        // log(ab) = log a + log b in the commutative case
        let a = scalar_matrix(5, 10, 6);
        let b = scalar_matrix(5, 10, 11);
        let lhs = mat_log(&a.mul(&b)).unwrap().value;
        let rhs = mat_log(&a).unwrap().value.add(&mat_log(&b).unwrap().value);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cube_root_of_ten() {
        let root = nth_root(&scalar_matrix(3, 3, 10), 3).unwrap();
        assert_eq!(root.output_precision, 2);
        assert_eq!(root.value.residues(), &[4]);
    }

    #[test]
    fn first_root_is_identity_map() {
        let a = PadicMatrix::elementary(3, 6, 2, 1, 0, 9).unwrap();
        assert_eq!(nth_root(&a, 1).unwrap().value, a);
    }

    #[test]
    fn non_power_has_no_cube_root() {
        // 4 = 1 + 3 is not a cube in 1 + 3Z_3
        assert_eq!(nth_root(&scalar_matrix(3, 8, 4), 3), Err(Error::NoRoot(3)));
        assert!(matches!(
            nth_root(&scalar_matrix(3, 2, 10), 3),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn power_valuation_examples() {
        let r = power_valuation_check(&scalar_matrix(3, 4, 4)).unwrap();
        assert_eq!(r.valuation, Some(1));
        assert!(r.passed);
        let id = PadicMatrix::identity(3, 6, 2).unwrap();
        assert!(power_valuation_check(&id).unwrap().passed);
        assert!(power_valuation_check(&scalar_matrix(2, 6, 5)).is_err());
        assert!(matches!(
            power_valuation_check(&scalar_matrix(3, 2, 4)),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn worked_commutator() {
        let a = PadicMatrix::elementary(3, 12, 2, 0, 1, 3).unwrap();
        let b = PadicMatrix::elementary(3, 12, 2, 1, 0, 3).unwrap();
        let cert = powerful_certificate(&a, &b).unwrap();
        assert_eq!(
            cert.commutator.signed_rows(),
            vec![vec![91, -27], vec![27, -8]]
        );
        assert_eq!(cert.commutator_valuation, Some(2));
        let same = powerful_certificate(&a, &a).unwrap();
        assert_eq!(same.commutator_valuation, None);
        assert!(same
            .root
            .eq_at(&PadicMatrix::identity(3, 12, 2).unwrap(), 12));
    }

    #[test]
    fn adversarial_pair_is_indistinguishable() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = PadicMatrix::random_congruence_element(3, 10, 1, &mut rng).unwrap();
        let y = x.mul(&scalar_matrix(3, 10, 1 + 3i64.pow(9)));
        assert_eq!(
            compare_pair(&x, &y, 3).unwrap(),
            PairOutcome::Indistinguishable
        );
        assert_eq!(
            compare_pair(&x, &x, 3).unwrap(),
            PairOutcome::Indistinguishable
        );
    }

    #[test]
    fn term_bounds() {
        // 3-adic log at k = 4: m - v_3(m) < 4 holds up to m = 4 (3 - 1 = 2, 4 - 0 = 4 fails)
        assert_eq!(log_term_bound(3, 4), 3);
        assert_eq!(log_term_bound(3, 1), 0);
        // p = 2 level 2: 2m - v_2(m) < 4 for m = 1, 2
        assert_eq!(log_term_bound(2, 4), 2);
        assert_eq!(exp_term_bound(5, 1), 0);
    }
}
