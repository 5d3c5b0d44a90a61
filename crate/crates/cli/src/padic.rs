//! `upg padic ...`: truncated p-adic congruence subgroups.

use clap::{Args, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use upg_core::padic::{
    mat_exp, mat_log, nth_root, power_valuation_check, powerful_certificate,
    unique_root_property_check, SeriesOutput,
};
use upg_core::PadicMatrix;

use crate::reply::{CliError, CliResult, Reply};

/// A matrix over Z/p^k, given inline, from a file, or as a scalar.
#[derive(Args)]
pub struct MatrixArg {
    #[arg(long)]
    p: u64,
    /// Precision k: entries are known modulo p^k.
    #[arg(long)]
    prec: u32,
    /// JSON array of integer rows, or a path to a file holding one.
    #[arg(long, conflicts_with = "value")]
    matrix: Option<String>,
    /// A 1x1 matrix.
    #[arg(long, allow_hyphen_values = true)]
    value: Option<i64>,
}

impl MatrixArg {
    fn load(&self) -> Result<PadicMatrix, CliError> {
        if let Some(v) = self.value {
            return Ok(PadicMatrix::from_entries(self.p, self.prec, 1, &[v])?);
        }
        let spec = self
            .matrix
            .as_deref()
            .ok_or_else(|| CliError("one of --matrix or --value is required".into()))?;
        parse_matrix(self.p, self.prec, spec)
    }
}

fn parse_matrix(p: u64, prec: u32, spec: &str) -> Result<PadicMatrix, CliError> {
    let text = if spec.trim_start().starts_with('[') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| CliError(format!("{spec}: {e}")))?
    };
    let rows: Vec<Vec<i64>> = serde_json::from_str(&text)?;
    Ok(PadicMatrix::from_rows(p, prec, &rows)?)
}

#[derive(Subcommand)]
pub enum PadicCmd {
    /// Whether A = 1 mod p (mod 4 for p = 2).
    Congruence {
        #[command(flatten)]
        a: MatrixArg,
    },
    /// Truncated logarithm of a congruence-subgroup element.
    Log {
        #[command(flatten)]
        a: MatrixArg,
    },
    /// Truncated exponential of a matrix divisible by p (by 4 for p = 2).
    Exp {
        #[command(flatten)]
        a: MatrixArg,
    },
    /// The unique m-th root inside the congruence subgroup.
    Root {
        #[command(flatten)]
        a: MatrixArg,
        #[arg(long)]
        m: u64,
    },
    /// Checks A^p = 1 + p^(v+1) U mod p^(v+2) for A = 1 + p^v U.
    Valuation {
        #[command(flatten)]
        a: MatrixArg,
    },
    /// Certifies [A, B] as a p-th power, for a given pair or random pairs.
    Powerful {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        prec: u32,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, requires = "b")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
    },
    /// Random sweep: roots of m-th powers are recovered and m-th powers separate.
    UniqueRoots {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        prec: u32,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn matrix_json(a: &PadicMatrix) -> Value {
    json!({ "p": a.p(), "precision": a.precision(), "rows": a.signed_rows() })
}

fn series_reply(s: &SeriesOutput) -> Reply {
    let reply = Reply::ok(
        json!({
            "value": matrix_json(&s.value),
            "input_precision": s.input_precision,
            "output_precision": s.output_precision,
            "terms": s.terms,
        }),
        format!(
            "{}\nexact mod {}^{} ({} terms)",
            s.value.reduce_to(s.output_precision),
            s.value.p(),
            s.output_precision,
            s.terms
        ),
    );
    if s.precision_loss() > 0 {
        reply.note(format!(
            "precision lowered from {} to {}",
            s.input_precision, s.output_precision
        ))
    } else {
        reply
    }
}

pub fn run(cmd: PadicCmd, seed: u64) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match cmd {
        PadicCmd::Congruence { a } => {
            let inside = a.load()?.in_congruence_subgroup()?;
            Reply::ok(
                json!({ "in_congruence_subgroup": inside }),
                inside.to_string(),
            )
        }
        PadicCmd::Log { a } => series_reply(&mat_log(&a.load()?)?),
        PadicCmd::Exp { a } => series_reply(&mat_exp(&a.load()?)?),
        PadicCmd::Root { a, m } => series_reply(&nth_root(&a.load()?, m)?),
        PadicCmd::Valuation { a } => {
            let report = power_valuation_check(&a.load()?)?;
            let text = match (report.valuation, report.checked_modulus) {
                (Some(v), Some(e)) => {
                    format!("v(A - 1) = {v}; A^p checked mod p^{e}: {}", report.passed)
                }
                _ => "A = 1 at this precision".into(),
            };
            let payload = serde_json::to_value(&report)?;
            if report.passed {
                Reply::ok(payload, text)
            } else {
                Reply::fail(payload, text, "power valuation congruence fails")
            }
        }
        PadicCmd::Powerful {
            p,
            prec,
            dim,
            trials,
            a,
            b,
        } => {
            let pairs = match (a, b) {
                (Some(a), Some(b)) => {
                    vec![(parse_matrix(p, prec, &a)?, parse_matrix(p, prec, &b)?)]
                }
                _ => (0..trials)
                    .map(|_| {
                        Ok((
                            PadicMatrix::random_congruence_element(p, prec, dim, &mut rng)?,
                            PadicMatrix::random_congruence_element(p, prec, dim, &mut rng)?,
                        ))
                    })
                    .collect::<Result<Vec<_>, upg_core::Error>>()?,
            };
            let mut certs = Vec::new();
            for (a, b) in &pairs {
                let c = powerful_certificate(a, b)?;
                certs.push(json!({
                    "commutator": matrix_json(&c.commutator),
                    "commutator_valuation": c.commutator_valuation,
                    "root": matrix_json(&c.root.reduce_to(c.root_precision)),
                    "root_precision": c.root_precision,
                }));
            }
            let text = if pairs.len() == 1 {
                format!(
                    "[A, B] = {}\nroot = {}",
                    certs[0]["commutator"]["rows"], certs[0]["root"]["rows"]
                )
            } else {
                format!("{} pairs certified", pairs.len())
            };
            Reply::ok(
                json!({ "seed": seed, "certified": certs.len(), "certificates": certs }),
                text,
            )
        }
        PadicCmd::UniqueRoots {
            p,
            prec,
            dim,
            m,
            trials,
        } => {
            let report = unique_root_property_check(p, dim, m, prec, trials, &mut rng)?;
            let text = format!(
                "{}/{} roots recovered mod {p}^{}; {} distinct, {} indistinguishable, {} failures",
                report.roots_recovered,
                report.trials,
                report.root_precision,
                report.distinct,
                report.indistinguishable,
                report.failures
            );
            let mut payload = serde_json::to_value(&report)?;
            payload["seed"] = json!(seed);
            if report.passed() {
                Reply::ok(payload, text)
            } else {
                Reply::fail(payload, text, "unique-root property violated")
            }
        }
    })
}
