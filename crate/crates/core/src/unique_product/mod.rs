//! Unique-product counting over any [`GroupContext`].
//!
//! An element `g` of `X * Y` is a unique product when exactly one pair
//! `(x, y)` in `X x Y` has `xy = g`. A finite set `S` with no unique product
//! in `S * S` shows the group is not a unique product group.

mod search;
mod witness;

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupContext;

pub use search::{search_witness, SearchOutcome, SearchParams, Strategy};
pub use witness::{
    format_witness_file, load_subset, parse_witness_file, verify_witness, GroupSpec, WitnessFile,
};

/// Bundled witness that `G_2` is not a unique product group.
pub const CHW2_WITNESS: &str = include_str!("../../data/chw2_witness.txt");

/// Finite subset of a group with distinct elements, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSubset<E> {
    elements: Vec<E>,
}

impl<E: Clone + Eq + std::hash::Hash> FiniteSubset<E> {
    /// Rejects duplicates, reporting the canonical key of the first one.
    pub fn new<C>(ctx: &C, elements: Vec<E>) -> Result<Self>
    where
        C: GroupContext<Element = E> + ?Sized,
    {
        let mut seen = HashSet::with_capacity(elements.len());
        for e in &elements {
            if !seen.insert(e) {
                return Err(Error::DuplicateElement(ctx.canonical_key(e)));
            }
        }
        Ok(Self { elements })
    }

    /// Keeps the first occurrence of each element.
    pub fn dedup(elements: Vec<E>) -> Self {
        let mut seen = HashSet::with_capacity(elements.len());
        let elements = elements
            .into_iter()
            .filter(|e| seen.insert(e.clone()))
            .collect();
        Self { elements }
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.elements.contains(e)
    }

    /// Image under a map that must be injective, such as a translation.
    pub fn map(&self, f: impl Fn(&E) -> E) -> Self {
        Self {
            elements: self.elements.iter().map(f).collect(),
        }
    }

    /// `{x^-1 : x in self}`.
    pub fn inverses<C>(&self, ctx: &C) -> Self
    where
        C: GroupContext<Element = E> + ?Sized,
    {
        self.map(|x| ctx.invert(x))
    }

    /// True when the set is closed under inversion.
    pub fn is_symmetric<C>(&self, ctx: &C) -> bool
    where
        C: GroupContext<Element = E> + ?Sized,
    {
        let set: HashSet<&E> = self.elements.iter().collect();
        self.elements.iter().all(|x| set.contains(&ctx.invert(x)))
    }

    pub fn keys<C>(&self, ctx: &C) -> Vec<String>
    where
        C: GroupContext<Element = E> + ?Sized,
    {
        self.elements.iter().map(|e| ctx.canonical_key(e)).collect()
    }
}

/// One product with a single representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniqueProduct {
    pub product: String,
    pub x: String,
    pub y: String,
}

/// Multiplicity of every product `xy`, `x in X`, `y in Y`, keyed by
/// canonical key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpReport {
    pub unique_count: usize,
    pub witnesses: Vec<UniqueProduct>,
    pub multiplicity: BTreeMap<String, usize>,
    /// `|X| * |Y|`, equal to the sum of all multiplicities.
    pub total: usize,
}

/// count and lexicographically first (i, j) producing each element
type Tally<E> = HashMap<E, (usize, (usize, usize))>;

fn tally_rows<C: GroupContext + ?Sized>(
    ctx: &C,
    xs: &[C::Element],
    row_offset: usize,
    ys: &[C::Element],
) -> Tally<C::Element> {
    let mut tally: Tally<C::Element> = HashMap::new();
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let entry = tally
                .entry(ctx.multiply(x, y))
                .or_insert((0, (row_offset + i, j)));
            entry.0 += 1;
        }
    }
    tally
}

fn merge<E: Eq + std::hash::Hash>(mut a: Tally<E>, b: Tally<E>) -> Tally<E> {
    for (g, (count, first)) in b {
        let entry = a.entry(g).or_insert((0, first));
        entry.0 += count;
        entry.1 = entry.1.min(first);
    }
    a
}

fn build_report<C: GroupContext + ?Sized>(
    ctx: &C,
    x: &FiniteSubset<C::Element>,
    y: &FiniteSubset<C::Element>,
    tally: Tally<C::Element>,
) -> UpReport {
    let mut multiplicity = BTreeMap::new();
    let mut witnesses = Vec::new();
    for (g, (count, (i, j))) in tally {
        let key = ctx.canonical_key(&g);
        if count == 1 {
            witnesses.push(UniqueProduct {
                product: key.clone(),
                x: ctx.canonical_key(&x.elements[i]),
                y: ctx.canonical_key(&y.elements[j]),
            });
        }
        multiplicity.insert(key, count);
    }
    witnesses.sort_by(|a, b| a.product.cmp(&b.product));
    UpReport {
        unique_count: witnesses.len(),
        witnesses,
        multiplicity,
        total: x.len() * y.len(),
    }
}

fn require_nonempty<E>(x: &FiniteSubset<E>, y: &FiniteSubset<E>) -> Result<()> {
    if x.elements.is_empty() || y.elements.is_empty() {
        return Err(Error::SizePrecondition("X and Y must be nonempty".into()));
    }
    Ok(())
}

/// Exact multiplicity table of `X * Y`.
pub fn product_report<C: GroupContext + ?Sized>(
    ctx: &C,
    x: &FiniteSubset<C::Element>,
    y: &FiniteSubset<C::Element>,
) -> Result<UpReport> {
    require_nonempty(x, y)?;
    let tally = tally_rows(ctx, &x.elements, 0, &y.elements);
    Ok(build_report(ctx, x, y, tally))
}

/// [`product_report`] with rows of `X` split across `workers` threads. The
/// report does not depend on the number of workers.
pub fn product_report_parallel<C: GroupContext + ?Sized>(
    ctx: &C,
    x: &FiniteSubset<C::Element>,
    y: &FiniteSubset<C::Element>,
    workers: usize,
) -> Result<UpReport> {
    require_nonempty(x, y)?;
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::SizePrecondition(e.to_string()))?;
    let chunk = x.len().div_ceil(workers).max(1);
    let tally = pool.install(|| {
        x.elements
            .par_chunks(chunk)
            .enumerate()
            .map(|(c, rows)| tally_rows(ctx, rows, c * chunk, &y.elements))
            .reduce(HashMap::new, merge)
    });
    Ok(build_report(ctx, x, y, tally))
}

/// `product_report(S, S)`; `unique_count == 0` certifies a nonunique-product set.
pub fn check_square<C: GroupContext + ?Sized>(
    ctx: &C,
    s: &FiniteSubset<C::Element>,
) -> Result<UpReport> {
    product_report(ctx, s, s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoUpReport {
    pub unique_count: usize,
    pub at_least_two: bool,
}

/// Whether `X * Y` has at least two unique products, for `|X| + |Y| >= 3`.
pub fn two_up_report<C: GroupContext + ?Sized>(
    ctx: &C,
    x: &FiniteSubset<C::Element>,
    y: &FiniteSubset<C::Element>,
) -> Result<TwoUpReport> {
    if x.len() + y.len() < 3 {
        return Err(Error::SizePrecondition("need |X| + |Y| >= 3".into()));
    }
    let report = product_report(ctx, x, y)?;
    Ok(TwoUpReport {
        unique_count: report.unique_count,
        at_least_two: report.unique_count >= 2,
    })
}

/// All products of at most `radius` generators and inverses, in
/// breadth-first order with generators taken as `x1, x1^-1, x2, ...`.
pub fn ball<C: GroupContext + ?Sized>(ctx: &C, radius: usize) -> FiniteSubset<C::Element> {
    let mut steps = Vec::new();
    for g in ctx.generators() {
        let inv = ctx.invert(&g);
        let distinct = inv != g;
        steps.push(g);
        if distinct {
            steps.push(inv);
        }
    }
    let identity = ctx.identity();
    let mut seen: HashSet<C::Element> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity];
    let mut frontier_start = 0;
    for _ in 0..radius {
        let frontier_end = elements.len();
        for idx in frontier_start..frontier_end {
            for s in &steps {
                let h = ctx.multiply(&elements[idx], s);
                if seen.insert(h.clone()) {
                    elements.push(h);
                }
            }
        }
        frontier_start = frontier_end;
    }
    FiniteSubset { elements }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chw::Gn;
    use crate::free_product::{C2FreeProduct, FpWord};
    use crate::group::Integers;

    fn ints(v: &[i64]) -> FiniteSubset<i64> {
        FiniteSubset::new(&Integers, v.to_vec()).unwrap()
    }

    #[test]
    fn integers_endpoints_are_unique() {
        let s = ints(&[0, 1]);
        let r = check_square(&Integers, &s).unwrap();
        assert_eq!(r.unique_count, 2);
        let keys: Vec<&str> = r.witnesses.iter().map(|w| w.product.as_str()).collect();
        assert_eq!(keys, ["0", "2"]);
        assert_eq!(r.multiplicity["1"], 2);
        assert_eq!(r.total, 4);
    }

    #[test]
    fn free_product_pair() {
        let ctx = C2FreeProduct::new(2);
        let x = FiniteSubset::new(&ctx, ctx.generators()).unwrap();
        let r = check_square(&ctx, &x).unwrap();
        assert_eq!(r.unique_count, 2);
        assert_eq!(r.multiplicity["fp:"], 2);
        let one_two = ctx.canonical_key(&FpWord::new(vec![1, 2], 2).unwrap());
        assert_eq!(r.multiplicity[&one_two], 1);
    }

    #[test]
    fn gn_small_sets() {
        let ctx = Gn::new(2);
        let x = FiniteSubset::new(&ctx, vec![ctx.identity(), ctx.parse("x1").unwrap()]).unwrap();
        let y = FiniteSubset::new(&ctx, vec![ctx.identity(), ctx.parse("x1^2").unwrap()]).unwrap();
        assert_eq!(product_report(&ctx, &x, &y).unwrap().unique_count, 4);
        let single = FiniteSubset::new(&ctx, vec![ctx.identity()]).unwrap();
        assert_eq!(check_square(&ctx, &single).unwrap().unique_count, 1);
    }

    #[test]
    fn subset_rejects_duplicates() {
        let ctx = Gn::new(2);
        let a = ctx.parse("x1 x2^2").unwrap();
        let b = ctx.parse("x2^-2 x1").unwrap();
        assert!(matches!(
            FiniteSubset::new(&ctx, vec![a, b]),
            Err(Error::DuplicateElement(_))
        ));
    }

    #[test]
    fn empty_sets_are_rejected() {
        let empty = FiniteSubset::<i64>::dedup(vec![]);
        assert!(product_report(&Integers, &empty, &ints(&[1])).is_err());
    }

    #[test]
    fn two_up_precondition() {
        let one = ints(&[5]);
        assert!(two_up_report(&Integers, &one, &one).is_err());
        let r = two_up_report(&Integers, &one, &ints(&[1, 2])).unwrap();
        assert!(r.at_least_two);
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball(&Gn::new(2), 0).len(), 1);
        assert_eq!(ball(&Integers, 3).len(), 7);
        let g1 = ball(&Gn::new(1), 2);
        assert_eq!(
            g1.keys(&Gn::new(1)),
            ["w:;a:0", "w:1;a:0", "w:1;a:-1", "w:;a:1", "w:;a:-1"]
        );
        let ctx = Gn::new(2);
        let sizes: Vec<usize> = (0..=4).map(|r| ball(&ctx, r).len()).collect();
        assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
    }

    #[test]
    fn parallel_matches_serial() {
        let ctx = Gn::new(2);
        let b = ball(&ctx, 2);
        let serial = check_square(&ctx, &b).unwrap();
        for workers in [1, 3, 8] {
            assert_eq!(
                product_report_parallel(&ctx, &b, &b, workers).unwrap(),
                serial
            );
        }
    }
}
