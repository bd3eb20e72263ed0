//! Prepare a Bell pair, sample it, and collapse it one qubit at a time.
//!
//! ```text
//! cargo run --example bell_measurement
//! ```

use qreg::circuit::{format, run};
use qreg::measure::{measure_qubit, sample_counts};
use qreg::{SimRng, StateVector};

fn main() -> qreg::Result<()> {
    let circuit = format::parse(include_str!("data/bell.qc"))?;
    let state = run(&circuit, StateVector::zero(2)?)?;

    let entangled = state.try_factor_two_qubit(1e-10)?.is_none();
    println!("entangled: {entangled}");

    let mut rng = SimRng::seed_from(qreg::rng::DEFAULT_SEED);
    for (bits, count) in sample_counts(&state, 1000, &mut rng)? {
        println!("{bits}  {count}");
    }

    // measuring consumes the state; the partner qubit is then fixed
    let (first, state) = measure_qubit(state, 1, &mut rng)?;
    println!(
        "qubit 1 -> {} (p = {:.3})",
        first.bit, first.probability
    );
    let (second, _) = measure_qubit(state, 0, &mut rng)?;
    println!(
        "qubit 0 -> {} (p = {:.3})",
        second.bit, second.probability
    );
    Ok(())
}
