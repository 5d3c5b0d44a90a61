//! Searches G_n for a set with no unique product and prints it as a witness file.
//!
//! `cargo run --release -p upg-core --example find_witness -- [n] [seed]`

use upg_core::{format_witness_file, search_witness, Gn, SearchParams};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(2, |a| a.parse().expect("n"));
    let seed: u64 = args.next().map_or(0, |a| a.parse().expect("seed"));
    let ctx = Gn::new(n);
    let params = SearchParams {
        seed,
        ..SearchParams::default()
    };
    let outcome = search_witness(&ctx, &params).expect("search");
    match outcome.witness {
        Some(set) => {
            let comments = vec![format!(
                "anneal, size {}, radius {}, seed {}, restart {}",
                params.size,
                params.radius,
                seed,
                outcome.restart.unwrap_or(0)
            )];
            print!(
                "{}",
                format_witness_file(&ctx, &set, &comments).expect("format")
            );
        }
        None => {
            eprintln!(
                "no witness: best unique count {:?} after {} restarts",
                outcome.best_unique_count, outcome.restarts_run
            );
            std::process::exit(1);
        }
    }
}
