//! `upg fp ...`: the free product of order-two groups.

use clap::Subcommand;
use serde_json::json;
use upg_core::free_product::from_free_generators;
use upg_core::{FpWord, FreeWord};

use crate::reply::{CliResult, Reply};

#[derive(Subcommand)]
pub enum FpCmd {
    /// Reduced form, cyclic core and conjugator.
    Reduce {
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
    /// Word length mod 2.
    Parity {
        #[arg(long)]
        n: usize,
        word: String,
    },
    /// Whether the element has finite order, with the conjugated letter.
    Torsion {
        #[arg(long)]
        n: usize,
        word: String,
    },
    /// An even word in the free basis y_j = x_j x_{j+1}.
    ToFree {
        #[arg(long)]
        n: usize,
        word: String,
    },
    /// A word in y_1..y_{n-1} back in the letters x_i.
    FromFree {
        #[arg(long)]
        n: usize,
        word: String,
    },
}

fn word_reply(w: &FpWord) -> Reply {
    Reply::ok(
        json!({ "word": w.to_string(), "letters": w.letters() }),
        w.to_string(),
    )
}

pub fn run(cmd: FpCmd) -> CliResult {
    Ok(match cmd {
        FpCmd::Reduce { n, word } => {
            let w = FpWord::parse(&word, n)?;
            let (core, conj) = w.cyclically_reduce();
            Reply::ok(
                json!({
                    "word": w.to_string(),
                    "letters": w.letters(),
                    "core": core.to_string(),
                    "conjugator": conj.to_string(),
                }),
                format!("{w}\ncore: {core}\nconjugator: {conj}"),
            )
        }
        FpCmd::Mul { n, a, b } => {
            word_reply(&FpWord::parse(&a, n)?.multiply(&FpWord::parse(&b, n)?)?)
        }
        FpCmd::Parity { n, word } => {
            let parity = FpWord::parse(&word, n)?.parity();
            Reply::ok(json!({ "parity": parity }), parity.to_string())
        }
        FpCmd::Torsion { n, word } => {
            let w = FpWord::parse(&word, n)?;
            let letter = w.torsion_witness();
            let text = match letter {
                Some(i) => format!("torsion: conjugate of x{i}"),
                None => "torsion-free".into(),
            };
            Reply::ok(
                json!({ "torsion": letter.is_some(), "letter": letter }),
                text,
            )
        }
        FpCmd::ToFree { n, word } => {
            let f = FpWord::parse(&word, n)?.to_free_generators()?;
            Reply::ok(
                json!({ "word": f.to_string(), "syllables": f.syllables() }),
                f.to_string(),
            )
        }
        FpCmd::FromFree { n, word } => {
            word_reply(&from_free_generators(&FreeWord::parse(&word, n)?))
        }
    })
}
