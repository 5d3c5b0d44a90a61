//! `upg chw ...`: arithmetic in G_n.

use clap::Subcommand;
use serde_json::json;
use upg_core::chw::{
    dihedral_image, embed, infinite_order_spotcheck, project_to_quotient, relator_check,
    DihedralElement, SpotCheck,
};
use upg_core::{commutator, Gn, GnElement, GroupContext};

use crate::reply::{CliResult, Reply};

#[derive(Subcommand)]
pub enum ChwCmd {
    /// Normal form and canonical key of a word.
    Normalize {
        #[arg(long)]
        n: usize,
        word: String,
    },
    /// Product of two words.
    Mul {
        #[arg(long)]
        n: usize,
        a: String,
        b: String,
    },
    /// Inverse of a word.
    Invert {
        #[arg(long)]
        n: usize,
        word: String,
    },
    /// Power g^k.
    Pow {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        word: String,
    },
    /// Commutator a b a^-1 b^-1.
    Commutator {
        #[arg(long)]
        n: usize,
        a: String,
        b: String,
    },
    /// Checks that every defining relator reduces to the identity.
    Relators {
        #[arg(long)]
        n: usize,
    },
    /// Image of a word of G_m in G_n, m <= n.
    Embed {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        word: String,
    },
    /// Image in the free product of order-two groups.
    Project {
        #[arg(long)]
        n: usize,
        word: String,
    },
    /// Image in the infinite dihedral group, x_d -> ba and x_i -> b otherwise.
    Dihedral {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        word: String,
    },
    /// Checks g^k != 1 for 1 <= k <= bound.
    Spotcheck {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        bound: u32,
        word: String,
    },
}

fn element(g: &GnElement) -> serde_json::Value {
    json!({
        "key": g.canonical_key(),
        "word": g.to_string(),
        "coset_word": g.coset_word(),
        "vector": g.vector(),
    })
}

fn reply(g: &GnElement) -> Reply {
    Reply::ok(element(g), g.canonical_key())
}

fn dihedral_text(d: &DihedralElement) -> String {
    match (d.z_power, d.b_flag) {
        (0, false) => "1".into(),
        (0, true) => "b".into(),
        (z, false) => format!("(ba)^{z}"),
        (z, true) => format!("(ba)^{z} b"),
    }
}

pub fn run(cmd: ChwCmd) -> CliResult {
    Ok(match cmd {
        ChwCmd::Normalize { n, word } => reply(&Gn::new(n).parse(&word)?),
        ChwCmd::Mul { n, a, b } => {
            let ctx = Gn::new(n);
            reply(&ctx.multiply(&ctx.parse(&a)?, &ctx.parse(&b)?))
        }
        ChwCmd::Invert { n, word } => reply(&Gn::new(n).parse(&word)?.invert()),
        ChwCmd::Pow { n, k, word } => {
            let ctx = Gn::new(n);
            reply(&ctx.pow(&ctx.parse(&word)?, k))
        }
        ChwCmd::Commutator { n, a, b } => {
            let ctx = Gn::new(n);
            reply(&commutator(&ctx, &ctx.parse(&a)?, &ctx.parse(&b)?))
        }
        ChwCmd::Relators { n } => {
            let report = relator_check(n);
            let text = format!(
                "{} relators checked, {} failures",
                report.checked,
                report.failures.len()
            );
            let payload = serde_json::to_value(&report)?;
            if report.passed() {
                Reply::ok(payload, text)
            } else {
                Reply::fail(payload, text, "some relators do not reduce to the identity")
            }
        }
        ChwCmd::Embed { m, n, word } => reply(&embed(&Gn::new(m).parse(&word)?, n)?),
        ChwCmd::Project { n, word } => {
            let w = project_to_quotient(&Gn::new(n).parse(&word)?);
            Reply::ok(
                json!({ "word": w.to_string(), "letters": w.letters() }),
                w.to_string(),
            )
        }
        ChwCmd::Dihedral { n, d, word } => {
            let img = dihedral_image(&Gn::new(n).parse(&word)?, d)?;
            Reply::ok(serde_json::to_value(img)?, dihedral_text(&img))
        }
        ChwCmd::Spotcheck { n, bound, word } => {
            let g = Gn::new(n).parse(&word)?;
            match infinite_order_spotcheck(&g, bound)? {
                SpotCheck::Pass { bound } => Reply::ok(
                    json!({ "passed": true, "bound": bound }),
                    format!("g^k != 1 for 1 <= k <= {bound}"),
                ),
                SpotCheck::Torsion { k } => Reply::fail(
                    json!({ "passed": false, "order": k }),
                    format!("g^{k} = 1"),
                    "element of finite order",
                ),
            }
        }
    })
}
