//! `upg hw ...`: Hantzsche-Wendt Bieberbach groups.

use std::path::PathBuf;

use clap::Subcommand;
use serde::Deserialize;
use serde_json::json;
use upg_core::affine::{
    alternating_last_coordinate, permutation_product, phi_evaluate, surjection_certificate,
    torsion_witness, validate_hw,
};
use upg_core::{AffineIsometry, Gn, HwData};

use crate::reply::{CliError, CliResult, Reply};

#[derive(Subcommand)]
pub enum HwCmd {
    /// Runs every defining check on a datum.
    Validate {
        #[arg(long)]
        file: PathBuf,
    },
    /// Looks for an element of finite order.
    Torsion {
        #[arg(long)]
        file: PathBuf,
    },
    /// P = beta_pi(1) ... beta_pi(n-1) and the alternating sum of last coordinates.
    Perm {
        #[arg(long)]
        file: PathBuf,
        /// Comma-separated permutation of 1..n-1.
        #[arg(long, value_delimiter = ',')]
        pi: Vec<usize>,
    },
    /// Writes beta_n as a word in beta_1..beta_{n-1} and verifies it.
    Surject {
        #[arg(long)]
        file: PathBuf,
    },
    /// Image of a word of G_{n-1} under x_i -> beta_i.
    Phi {
        #[arg(long)]
        file: PathBuf,
        word: String,
    },
    /// Composition of two isometries given as JSON.
    Compose {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Inverse of an isometry given as JSON.
    Inverse {
        #[arg(long)]
        a: String,
    },
}

/// `{"linear": [1,-1,-1], "translation2": [1,1,0]}`
#[derive(Deserialize)]
struct RawIsometry {
    linear: Vec<i8>,
    translation2: Vec<i64>,
}

fn parse_isometry(text: &str) -> Result<AffineIsometry, CliError> {
    let raw: RawIsometry = serde_json::from_str(text)?;
    Ok(AffineIsometry::new(raw.linear, raw.translation2)?)
}

fn load(file: &PathBuf) -> Result<HwData, CliError> {
    let text =
        std::fs::read_to_string(file).map_err(|e| CliError(format!("{}: {e}", file.display())))?;
    Ok(HwData::from_json(&text)?)
}

fn iso_reply(g: &AffineIsometry) -> CliResult {
    let mut payload = serde_json::to_value(g)?;
    payload["text"] = json!(g.to_string());
    Ok(Reply::ok(payload, g.to_string()))
}

pub fn run(cmd: HwCmd) -> CliResult {
    match cmd {
        HwCmd::Validate { file } => {
            let report = validate_hw(&load(&file)?);
            let payload = serde_json::to_value(&report)?;
            Ok(if report.is_valid() {
                Reply::ok(payload, format!("valid HW datum in dimension {}", report.n))
            } else {
                Reply::fail(
                    payload,
                    report.failures.join("\n"),
                    "datum is not a HW group",
                )
            })
        }
        HwCmd::Torsion { file } => {
            let w = torsion_witness(&load(&file)?);
            let text = match &w {
                Some(w) => format!("finite-order coset of {w}"),
                None => "torsion-free".into(),
            };
            Ok(Reply::ok(
                json!({ "torsion": w.is_some(), "word": w.map(|w| w.to_string()) }),
                text,
            ))
        }
        HwCmd::Perm { file, pi } => {
            let data = load(&file)?;
            let p = permutation_product(&data, &pi)?;
            let p2 = p.compose(&p)?;
            let alt = alternating_last_coordinate(&data, &pi)?;
            Ok(Reply::ok(
                json!({
                    "p": p.to_string(),
                    "p_squared": p2.to_string(),
                    "alternating_last_coordinate2": alt,
                }),
                format!("P = {p}\nP^2 = {p2}"),
            ))
        }
        HwCmd::Surject { file } => {
            let cert = surjection_certificate(&load(&file)?)?;
            let mut payload = serde_json::to_value(&cert)?;
            payload["p"] = json!(cert.p.to_string());
            Ok(Reply::ok(
                payload,
                format!(
                    "beta_n = {}\nP = {} with P^2 = {}e_n",
                    cert.beta_n_word,
                    cert.p,
                    if cert.sign > 0 { "" } else { "-" }
                ),
            ))
        }
        HwCmd::Phi { file, word } => {
            let data = load(&file)?;
            let g = Gn::new(data.n() - 1).parse(&word)?;
            iso_reply(&phi_evaluate(&data, &g)?)
        }
        HwCmd::Compose { a, b } => iso_reply(&parse_isometry(&a)?.compose(&parse_isometry(&b)?)?),
        HwCmd::Inverse { a } => iso_reply(&parse_isometry(&a)?.inverse()),
    }
}
