//! Heuristic search for sets `S` with no unique product in `S * S`.
//!
//! Candidates come from a Cayley ball. All products of candidates are
//! interned once into a table of ids, so the objective (number of products
//! hit exactly once) is maintained incrementally in `O(|S|)` per move.

use std::collections::HashMap;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{ball, check_square, FiniteSubset};
use crate::error::{Error, Result};
use crate::group::GroupContext;

/// Restarts are run in fixed-size batches so the reported witness depends
/// only on the seed, never on the worker count.
const RESTART_BATCH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Lexicographic enumeration of all candidate subsets, up to `max_moves` evaluations.
    ExhaustiveSmall,
    /// Steepest-descent swaps from random starts.
    Greedy,
    /// Simulated annealing with single swap moves.
    Anneal,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ExhaustiveSmall => "exhaustive-small",
            Self::Greedy => "greedy",
            Self::Anneal => "anneal",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive-small" | "exhaustive" => Ok(Self::ExhaustiveSmall),
            "greedy" => Ok(Self::Greedy),
            "anneal" => Ok(Self::Anneal),
            other => Err(Error::SizePrecondition(format!(
                "unknown strategy `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchParams {
    pub size: usize,
    pub radius: usize,
    pub seed: u64,
    pub strategy: Strategy,
    /// Restrict to sets with `S = S^-1`; candidates are then inverse pairs.
    pub symmetric: bool,
    pub include_identity: bool,
    pub restarts: usize,
    /// Moves per restart (anneal, greedy) or total evaluations (exhaustive).
    pub max_moves: usize,
    pub initial_temperature: f64,
    /// Geometric cooling factor applied after every move.
    pub cooling: f64,
    pub budget: Option<Duration>,
    /// Not serialized: results do not depend on it.
    #[serde(skip)]
    pub workers: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            size: 14,
            radius: 3,
            seed: 0,
            strategy: Strategy::Anneal,
            symmetric: false,
            include_identity: false,
            restarts: 256,
            max_moves: 20_000,
            initial_temperature: 2.0,
            cooling: 0.9997,
            budget: None,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome<E> {
    /// Verified by `check_square` before being returned.
    pub witness: Option<FiniteSubset<E>>,
    /// Lowest unique-product count seen; `None` if no set was evaluated.
    pub best_unique_count: Option<usize>,
    /// Restart index that produced the witness.
    pub restart: Option<usize>,
    pub restarts_run: usize,
    pub evaluations: u64,
    pub candidates: usize,
    /// The exhaustive strategy visited every candidate set, so a missing
    /// witness means none exists in the ball.
    pub complete: bool,
}

/// Product table over the candidate set plus the unit structure of moves.
struct Problem {
    table: Vec<u32>,
    n: usize,
    ids: usize,
    /// Each unit is added or removed as a whole: single candidates, or
    /// inverse pairs in symmetric mode.
    units: Vec<Vec<usize>>,
    units_needed: usize,
}

impl Problem {
    fn product(&self, a: usize, b: usize) -> u32 {
        self.table[a * self.n + b]
    }
}

/// Current set with incremental unique-product count.
struct State<'a> {
    problem: &'a Problem,
    counts: Vec<u32>,
    members: Vec<usize>,
    unique: usize,
}

impl<'a> State<'a> {
    fn new(problem: &'a Problem) -> Self {
        Self {
            problem,
            counts: vec![0; problem.ids],
            members: Vec::new(),
            unique: 0,
        }
    }

    fn bump(&mut self, id: u32, up: bool) {
        let c = &mut self.counts[id as usize];
        if up {
            *c += 1;
            match *c {
                1 => self.unique += 1,
                2 => self.unique -= 1,
                _ => {}
            }
        } else {
            *c -= 1;
            match *c {
                1 => self.unique += 1,
                0 => self.unique -= 1,
                _ => {}
            }
        }
    }

    fn add(&mut self, a: usize) {
        for k in 0..self.members.len() {
            let s = self.members[k];
            self.bump(self.problem.product(a, s), true);
            self.bump(self.problem.product(s, a), true);
        }
        self.bump(self.problem.product(a, a), true);
        self.members.push(a);
    }

    fn remove(&mut self, a: usize) {
        let pos = self.members.iter().position(|&m| m == a).expect("member");
        self.members.swap_remove(pos);
        for k in 0..self.members.len() {
            let s = self.members[k];
            self.bump(self.problem.product(a, s), false);
            self.bump(self.problem.product(s, a), false);
        }
        self.bump(self.problem.product(a, a), false);
    }

    fn add_unit(&mut self, u: usize) {
        for &a in &self.problem.units[u] {
            self.add(a);
        }
    }

    fn remove_unit(&mut self, u: usize) {
        for &a in &self.problem.units[u] {
            self.remove(a);
        }
    }
}

struct RestartResult {
    units: Option<Vec<usize>>,
    best: usize,
    evaluations: u64,
    /// Stopped by the evaluation budget.
    cut: bool,
}

fn build_problem<C: GroupContext + ?Sized>(
    ctx: &C,
    params: &SearchParams,
) -> Result<(Vec<C::Element>, Problem)> {
    let identity = ctx.identity();
    let candidates: Vec<C::Element> = ball(ctx, params.radius)
        .elements
        .into_iter()
        .filter(|g| params.include_identity || *g != identity)
        .collect();
    let index: HashMap<&C::Element, usize> =
        candidates.iter().enumerate().map(|(i, g)| (g, i)).collect();

    let mut units = Vec::new();
    if params.symmetric {
        if !params.size.is_multiple_of(2) {
            return Err(Error::SizePrecondition(
                "symmetric search needs an even size".into(),
            ));
        }
        let mut used = vec![false; candidates.len()];
        for (i, g) in candidates.iter().enumerate() {
            if used[i] {
                continue;
            }
            used[i] = true;
            // self-inverse elements cannot be paired and are skipped
            if let Some(&j) = index.get(&ctx.invert(g)) {
                if j != i {
                    used[j] = true;
                    units.push(vec![i, j]);
                }
            }
        }
    } else {
        units = (0..candidates.len()).map(|i| vec![i]).collect();
    }
    let unit_size = if params.symmetric { 2 } else { 1 };
    let units_needed = params.size / unit_size;

    let n = candidates.len();
    let mut ids: HashMap<C::Element, u32> = HashMap::new();
    let mut table = Vec::with_capacity(n * n);
    for a in &candidates {
        for b in &candidates {
            let next = ids.len() as u32;
            table.push(*ids.entry(ctx.multiply(a, b)).or_insert(next));
        }
    }
    let problem = Problem {
        table,
        n,
        ids: ids.len(),
        units,
        units_needed,
    };
    Ok((candidates, problem))
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn random_start(problem: &Problem, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..problem.units.len()).collect();
    order.shuffle(rng);
    let outside = order.split_off(problem.units_needed);
    (order, outside)
}

fn anneal(problem: &Problem, params: &SearchParams, restart: usize) -> RestartResult {
    let mut rng = restart_rng(params.seed, restart);
    let (mut inside, mut outside) = random_start(problem, &mut rng);
    let mut state = State::new(problem);
    for &u in &inside {
        state.add_unit(u);
    }
    let mut best = state.unique;
    let mut temperature = params.initial_temperature;
    let mut evaluations = 1;
    if best == 0 {
        return RestartResult {
            units: Some(inside),
            best,
            evaluations,
            cut: false,
        };
    }
    for _ in 0..params.max_moves {
        if outside.is_empty() {
            break;
        }
        let i = rng.gen_range(0..inside.len());
        let o = rng.gen_range(0..outside.len());
        let before = state.unique;
        state.remove_unit(inside[i]);
        state.add_unit(outside[o]);
        evaluations += 1;
        let after = state.unique;
        // equal moves are always accepted to drift across plateaus
        let accept =
            after <= before || rng.gen::<f64>() < (-((after - before) as f64) / temperature).exp();
        if accept {
            std::mem::swap(&mut inside[i], &mut outside[o]);
        } else {
            state.remove_unit(outside[o]);
            state.add_unit(inside[i]);
        }
        best = best.min(state.unique);
        if state.unique == 0 {
            return RestartResult {
                units: Some(inside),
                best: 0,
                evaluations,
                cut: false,
            };
        }
        temperature *= params.cooling;
    }
    RestartResult {
        units: None,
        best,
        evaluations,
        cut: false,
    }
}

fn greedy(problem: &Problem, params: &SearchParams, restart: usize) -> RestartResult {
    let mut rng = restart_rng(params.seed, restart);
    let (mut inside, mut outside) = random_start(problem, &mut rng);
    let mut state = State::new(problem);
    for &u in &inside {
        state.add_unit(u);
    }
    let mut evaluations = 1u64;
    let mut moves = 0;
    while state.unique > 0 && moves < params.max_moves {
        let current = state.unique;
        let mut best_move = None;
        let mut best_value = current;
        for (i, &unit_in) in inside.iter().enumerate() {
            state.remove_unit(unit_in);
            for (o, &unit_out) in outside.iter().enumerate() {
                state.add_unit(unit_out);
                evaluations += 1;
                if state.unique < best_value {
                    best_value = state.unique;
                    best_move = Some((i, o));
                }
                state.remove_unit(unit_out);
            }
            state.add_unit(unit_in);
        }
        let Some((i, o)) = best_move else { break };
        state.remove_unit(inside[i]);
        state.add_unit(outside[o]);
        std::mem::swap(&mut inside[i], &mut outside[o]);
        moves += 1;
    }
    RestartResult {
        units: (state.unique == 0).then_some(inside),
        best: state.unique,
        evaluations,
        cut: false,
    }
}

fn exhaustive(problem: &Problem, params: &SearchParams) -> RestartResult {
    struct Walk<'a> {
        state: State<'a>,
        chosen: Vec<usize>,
        needed: usize,
        budget: usize,
        best: usize,
        evaluations: u64,
        cut: bool,
    }

    impl Walk<'_> {
        fn recurse(&mut self, start: usize) -> bool {
            if self.chosen.len() == self.needed {
                self.evaluations += 1;
                self.best = self.best.min(self.state.unique);
                return self.state.unique == 0;
            }
            let total = self.state.problem.units.len();
            for u in start..total {
                if total - u < self.needed - self.chosen.len() {
                    break;
                }
                if self.budget == 0 {
                    self.cut = true;
                    break;
                }
                if self.chosen.len() + 1 == self.needed {
                    self.budget -= 1;
                }
                self.state.add_unit(u);
                self.chosen.push(u);
                if self.recurse(u + 1) {
                    return true;
                }
                self.chosen.pop();
                self.state.remove_unit(u);
            }
            false
        }
    }

    let mut walk = Walk {
        state: State::new(problem),
        chosen: Vec::new(),
        needed: problem.units_needed,
        budget: params.max_moves,
        best: usize::MAX,
        evaluations: 0,
        cut: false,
    };
    let found = walk.recurse(0);
    RestartResult {
        units: found.then_some(walk.chosen),
        best: walk.best,
        evaluations: walk.evaluations,
        cut: walk.cut,
    }
}

/// Searches the radius ball for a set of `size` elements with no unique
/// product. Returns `Ok` with no witness when the budget runs out.
pub fn search_witness<C: GroupContext + ?Sized>(
    ctx: &C,
    params: &SearchParams,
) -> Result<SearchOutcome<C::Element>> {
    if params.size < 2 {
        return Err(Error::SizePrecondition(
            "witness size must be at least 2".into(),
        ));
    }
    let (candidates, problem) = build_problem(ctx, params)?;
    let mut outcome = SearchOutcome {
        witness: None,
        best_unique_count: None,
        restart: None,
        restarts_run: 0,
        evaluations: 0,
        candidates: candidates.len(),
        complete: false,
    };
    if problem.units.len() < problem.units_needed {
        outcome.complete = true;
        return Ok(outcome);
    }

    let started = Instant::now();
    let mut found: Option<(usize, Vec<usize>)> = None;
    if params.strategy == Strategy::ExhaustiveSmall {
        let r = exhaustive(&problem, params);
        outcome.restarts_run = 1;
        outcome.evaluations = r.evaluations;
        outcome.best_unique_count = (r.evaluations > 0).then_some(r.best);
        outcome.complete = r.units.is_none() && !r.cut;
        found = r.units.map(|u| (0, u));
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(params.workers.max(1))
            .build()
            .map_err(|e| Error::SizePrecondition(e.to_string()))?;
        let mut next = 0;
        while next < params.restarts && found.is_none() {
            if params.budget.is_some_and(|b| started.elapsed() >= b) {
                break;
            }
            let end = (next + RESTART_BATCH).min(params.restarts);
            let results: Vec<RestartResult> = pool.install(|| {
                (next..end)
                    .into_par_iter()
                    .map(|r| match params.strategy {
                        Strategy::Greedy => greedy(&problem, params, r),
                        _ => anneal(&problem, params, r),
                    })
                    .collect()
            });
            for (offset, r) in results.into_iter().enumerate() {
                outcome.evaluations += r.evaluations;
                outcome.best_unique_count =
                    Some(outcome.best_unique_count.map_or(r.best, |b| b.min(r.best)));
                if found.is_none() {
                    if let Some(units) = r.units {
                        found = Some((next + offset, units));
                    }
                }
            }
            outcome.restarts_run = end;
            next = end;
        }
    }

    if let Some((restart, mut units)) = found {
        units.sort_unstable();
        let elements = units
            .iter()
            .flat_map(|&u| problem.units[u].iter().map(|&i| candidates[i].clone()))
            .collect();
        let set = FiniteSubset::new(ctx, elements)?;
        let report = check_square(ctx, &set)?;
        if report.unique_count != 0 {
            return Err(Error::CertificateFailed(format!(
                "search produced a set with {} unique products",
                report.unique_count
            )));
        }
        outcome.witness = Some(set);
        outcome.restart = Some(restart);
        outcome.best_unique_count = Some(0);
    }
    Ok(outcome)
}
