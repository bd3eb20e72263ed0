//! Exactly-1 3-SAT: compile a formula to a reversible oracle, check it
//! against classical evaluation, and run Grover search with it.
//!
//! ```text
//! cargo run --example exactly_one_sat
//! cargo run --example exactly_one_sat -- crates/core/examples/data/four_vars.cnf
//! ```

use qreg::circuit::run;
use qreg::sat::{
    assignment_string, build_oracle, classical_eval, grover_sat_solve, parse_formula,
    satisfying_assignments,
};
use qreg::{SimRng, StateVector};

fn main() -> qreg::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => include_str!("data/three_clauses.sat").to_string(),
    };
    let formula = parse_formula(&text)?;
    println!("formula {formula}");

    let (oracle, layout) = build_oracle(&formula)?;
    println!(
        "oracle: {} gates on {} qubits (f at {}, inputs from {})",
        oracle.len(),
        layout.total_qubits(),
        layout.f_out(),
        layout.input_lowest()
    );
    for x in 0..1u64 << formula.num_vars() {
        let input = (x as usize) << layout.input_lowest();
        let out = run(&oracle, StateVector::basis(layout.total_qubits(), input)?)?;
        let f = out.probabilities()[input | 1 << layout.f_out()] > 0.5;
        assert_eq!(f, classical_eval(&formula, x));
    }
    println!("oracle agrees with classical evaluation on every input");

    let solutions = satisfying_assignments(&formula)?;
    let names: Vec<String> = solutions
        .iter()
        .map(|&s| assignment_string(s, formula.num_vars()))
        .collect();
    println!("solutions (x1 first): {}", names.join(" "));

    let mut rng = SimRng::seed_from(qreg::rng::DEFAULT_SEED);
    let s = grover_sat_solve(&formula, None, None, 2048, &mut rng)?;
    println!(
        "{} iterations, most likely x1..xn = {} with p = {:.6}",
        s.iterations,
        s.assignment_x1_first(),
        s.success_probability
    );
    Ok(())
}
