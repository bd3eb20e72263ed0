//! Grover search: the iteration schedule, the predicted amplitudes, and a
//! sampled run.
//!
//! ```text
//! cargo run --example grover_search -- 6 5,40
//! ```

use qreg::grover::{grover_run, predicted_trajectory, schedule, MarkedOracle};
use qreg::SimRng;

fn main() -> qreg::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(5, |s| s.parse().expect("n"));
    let marked: Vec<u64> = args.next().map_or(vec![7], |s| {
        s.split(',').map(|x| x.parse().expect("marked index")).collect()
    });
    let oracle = MarkedOracle::new(n, marked)?;
    let m = oracle.marked().len() as u64;

    let plan = schedule(n, m)?;
    println!(
        "N = {}, M = {m}, theta = {:.5}, k_opt = {}, P = {:.6}",
        1u64 << n,
        plan.theta,
        plan.k_opt,
        plan.predicted_success
    );
    println!("  k   marked amp   unmarked amp   P(success)");
    for (k, (d, u)) in predicted_trajectory(n, m, 2 * plan.k_opt)?.into_iter().enumerate() {
        println!("{k:>3}   {d:>+10.6}   {u:>+12.6}   {:.6}", d * d);
    }

    let mut rng = SimRng::seed_from(qreg::rng::DEFAULT_SEED);
    let run = grover_run(&oracle, plan.k_opt, 1000, &mut rng)?;
    let mut top: Vec<_> = run.histogram.into_iter().collect();
    top.sort_by_key(|&(_, count)| std::cmp::Reverse(count));
    println!("most frequent after {} iterations:", plan.k_opt);
    for (bits, count) in top.into_iter().take(4) {
        println!("  {bits}  {count}");
    }
    Ok(())
}
