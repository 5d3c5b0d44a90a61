//! `upg up ...`: unique-product counting and witness search.

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::Subcommand;
use serde_json::json;
use upg_core::{
    ball, check_square, format_witness_file, load_subset, product_report_parallel, search_witness,
    two_up_report, verify_witness, C2FreeProduct, FiniteSubset, Gn, GroupContext, GroupSpec,
    Integers, SearchParams, Strategy, UpReport,
};

use crate::reply::{CliError, CliResult, Reply};
use crate::Globals;

#[derive(Subcommand)]
pub enum UpCmd {
    /// Multiplicity table of X * Y.
    Check {
        /// Group: chw:N, fp:N or z.
        #[arg(long)]
        group: String,
        /// Set file for X.
        #[arg(long)]
        x: PathBuf,
        /// Set file for Y.
        #[arg(long)]
        y: PathBuf,
    },
    /// Unique products of S * S for a set file; zero certifies a witness.
    Square {
        /// Group: chw:N, fp:N or z.
        #[arg(long)]
        group: String,
        /// Set file for S.
        #[arg(long)]
        set: PathBuf,
    },
    /// Whether X * Y has at least two unique products.
    TwoUp {
        /// Group: chw:N, fp:N or z.
        #[arg(long)]
        group: String,
        /// Set file for X.
        #[arg(long)]
        x: PathBuf,
        /// Set file for Y.
        #[arg(long)]
        y: PathBuf,
    },
    /// All elements within a word-length radius of the identity.
    Ball {
        /// Group: chw:N, fp:N or z.
        #[arg(long)]
        group: String,
        /// Word-length radius.
        #[arg(long)]
        radius: usize,
        /// Writes the ball as a set file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Searches a ball for a set with no unique product.
    Search {
        /// Group: chw:N, fp:N or z.
        #[arg(long)]
        group: String,
        /// Size of the sought set.
        #[arg(long, default_value_t = 14)]
        size: usize,
        /// Candidates are drawn from this ball.
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// anneal, greedy or exhaustive-small.
        #[arg(long, default_value = "anneal")]
        strategy: String,
        /// Independent restarts for anneal and greedy.
        #[arg(long, default_value_t = 256)]
        restarts: usize,
        /// Moves per restart, or total evaluations for exhaustive-small.
        #[arg(long, default_value_t = 20_000)]
        max_moves: usize,
        /// Initial annealing temperature.
        #[arg(long, default_value_t = 2.0)]
        temperature: f64,
        /// Geometric cooling factor per move.
        #[arg(long, default_value_t = 0.9997)]
        cooling: f64,
        /// Only sets with S = S^-1.
        #[arg(long)]
        symmetric: bool,
        /// Allows the identity as a candidate.
        #[arg(long)]
        include_identity: bool,
        /// Writes a found witness as a set file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn report_reply(report: &UpReport) -> CliResult {
    let mut text = format!(
        "unique_count: {}\nproducts: {}",
        report.unique_count, report.total
    );
    for w in &report.witnesses {
        text.push_str(&format!("\n  {} = {} * {}", w.product, w.x, w.y));
    }
    Ok(Reply::ok(serde_json::to_value(report)?, text))
}

pub fn run(cmd: UpCmd, globals: &Globals) -> CliResult {
    let group = match &cmd {
        UpCmd::Check { group, .. }
        | UpCmd::Square { group, .. }
        | UpCmd::TwoUp { group, .. }
        | UpCmd::Ball { group, .. }
        | UpCmd::Search { group, .. } => group.parse::<GroupSpec>()?,
    };
    match group {
        GroupSpec::Chw(n) => run_in(&Gn::new(n), cmd, globals),
        GroupSpec::FreeProduct(n) => run_in(&C2FreeProduct::new(n), cmd, globals),
        GroupSpec::Integers => run_in(&Integers, cmd, globals),
    }
}

fn run_in<C: GroupContext>(ctx: &C, cmd: UpCmd, globals: &Globals) -> CliResult {
    match cmd {
        UpCmd::Check { x, y, .. } => {
            let (x, y) = (load_subset(ctx, &read(&x)?)?, load_subset(ctx, &read(&y)?)?);
            report_reply(&product_report_parallel(ctx, &x, &y, globals.workers)?)
        }
        UpCmd::Square { set, .. } => report_reply(&verify_witness(ctx, &read(&set)?)?),
        UpCmd::TwoUp { x, y, .. } => {
            let (x, y) = (load_subset(ctx, &read(&x)?)?, load_subset(ctx, &read(&y)?)?);
            let report = two_up_report(ctx, &x, &y)?;
            Ok(Reply::ok(
                serde_json::to_value(&report)?,
                format!(
                    "unique_count: {}\nat_least_two: {}",
                    report.unique_count, report.at_least_two
                ),
            ))
        }
        UpCmd::Ball { radius, out, .. } => {
            let b = ball(ctx, radius);
            let keys = b.keys(ctx);
            if let Some(path) = &out {
                let comment = format!("ball of radius {radius}");
                std::fs::write(path, format_witness_file(ctx, &b, &[comment])?)?;
            }
            Ok(Reply::ok(
                json!({ "radius": radius, "size": b.len(), "keys": keys }),
                format!("{} elements", b.len()),
            ))
        }
        UpCmd::Search {
            size,
            radius,
            strategy,
            restarts,
            max_moves,
            temperature,
            cooling,
            symmetric,
            include_identity,
            out,
            ..
        } => {
            let params = SearchParams {
                size,
                radius,
                seed: globals.seed,
                strategy: strategy.parse::<Strategy>()?,
                symmetric,
                include_identity,
                restarts,
                max_moves,
                initial_temperature: temperature,
                cooling,
                budget: globals.budget_ms.map(Duration::from_millis),
                workers: globals.workers,
            };
            search(ctx, &params, out.as_deref())
        }
    }
}

fn search<C: GroupContext>(ctx: &C, params: &SearchParams, out: Option<&Path>) -> CliResult {
    let outcome = search_witness(ctx, params)?;
    let mut payload = json!({
        "group": ctx.name(),
        "seed": params.seed,
        "params": params,
        "candidates": outcome.candidates,
        "restarts_run": outcome.restarts_run,
        "evaluations": outcome.evaluations,
        "best_unique_count": outcome.best_unique_count,
        "complete": outcome.complete,
    });
    let Some(set) = outcome.witness else {
        payload["witness"] = json!(null);
        return Ok(Reply::fail(
            payload,
            match outcome.best_unique_count {
                Some(best) if outcome.complete => format!(
                    "exhaustive search covered {} sets without a witness; best unique_count {best}",
                    outcome.evaluations
                ),
                Some(best) => format!(
                    "no witness after {} restarts (seed {}); best unique_count {best}",
                    outcome.restarts_run, params.seed
                ),
                None => format!(
                    "the radius-{} ball offers {} candidates, fewer than needed",
                    params.radius, outcome.candidates
                ),
            },
            if outcome.complete {
                "no witness exists among the candidate sets"
            } else {
                "search budget exhausted without a witness"
            },
        ));
    };
    let restart = outcome.restart.unwrap_or(0);
    let comment = format!(
        "{} search, size {}, radius {}, seed {}, restart {}",
        params.strategy, params.size, params.radius, params.seed, restart
    );
    let file = format_witness_file(ctx, &set, &[comment])?;
    // re-read the rendered file so the reported certificate covers what is written
    let verified = verify_witness(ctx, &file)?;
    let reparsed: FiniteSubset<C::Element> = load_subset(ctx, &file)?;
    if verified.unique_count != 0 || reparsed != set || check_square(ctx, &set)?.unique_count != 0 {
        return Err(CliError("witness failed verification".into()));
    }
    if let Some(path) = out {
        std::fs::write(path, &file)?;
    }
    payload["restart"] = json!(restart);
    payload["unique_count"] = json!(verified.unique_count);
    payload["witness"] = json!(set.keys(ctx));
    payload["witness_file"] = json!(file);
    Ok(Reply::ok(payload, file.trim_end().to_string()))
}
