//! Recover the hidden mask of a 2-to-1 function, and compare with a
//! classical collision search.
//!
//! ```text
//! cargo run --example simon_hidden_shift -- 8 173
//! ```

use qreg::simon::{classical_baseline, make_oracle, simon_solve};
use qreg::SimRng;

fn main() -> qreg::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(6, |s| s.parse().expect("n"));
    let a: u64 = args.next().map_or(0b101101 & ((1 << n) - 1), |s| s.parse().expect("a"));

    let oracle = make_oracle(n, a)?;
    let mut rng = SimRng::seed_from(qreg::rng::DEFAULT_SEED);
    let quantum = simon_solve(&oracle, 10 * n + 20, &mut rng)?;

    println!("hidden a      {a:0n$b}");
    for (k, rank) in quantum.samples.iter().zip(&quantum.rank_trace) {
        println!("  sample {k:0n$b}  rank {rank}");
    }
    println!(
        "recovered a   {:0n$b} after {} quantum queries (+{} checks)",
        quantum.a, quantum.quantum_queries, quantum.verification_queries
    );

    let classical = classical_baseline(&oracle, &mut rng);
    println!(
        "classical     {:0n$b} after {} queries",
        classical.a, classical.queries
    );
    Ok(())
}
