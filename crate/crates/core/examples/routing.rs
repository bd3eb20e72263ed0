//! Route a circuit onto a line of qubits, then undo the final permutation.
//!
//! ```text
//! cargo run --example routing
//! ```

use qreg::circuit::route::{permute_qubits, route};
use qreg::circuit::{format, run};
use qreg::{CouplingGraph, StateVector};

fn main() -> qreg::Result<()> {
    let circuit = format::parse(include_str!("data/ghz5.qc"))?;
    let graph = CouplingGraph::parse(include_str!("data/line5.edges"))?;

    let mut routed = route(&circuit, &graph)?;
    println!("{} swaps, final layout {:?}", routed.swaps_inserted, routed.final_layout);
    print!("{}", format::render(&routed.circuit));

    // the routed circuit computes the same state with qubits relabelled
    let logical = run(&circuit, StateVector::zero(5)?)?;
    let physical = run(&routed.circuit, StateVector::zero(5)?)?;
    let expected = permute_qubits(&logical, &routed.final_layout)?;
    let diff = expected.to_vector().max_abs_diff(&physical.to_vector());
    println!("max |diff| after relabelling: {diff:.1e}");

    routed.restore_layout(&graph)?;
    let restored = run(&routed.circuit, StateVector::zero(5)?)?;
    let diff = logical.to_vector().max_abs_diff(&restored.to_vector());
    println!("{} swaps with layout restored, max |diff| {diff:.1e}", routed.swaps_inserted);
    Ok(())
}
