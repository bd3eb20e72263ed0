//! Standard decompositions checked against their target matrices.
//!
//! ```text
//! cargo run --example gate_decompositions
//! ```

use qreg::circuit::decompose::{
    decompose, decompose_ccnot, decompose_cnz, decompose_cz, decompose_swap, lower_to_cnot,
};
use qreg::circuit::{format, unitary_of, Circuit};
use qreg::{GateApplication, GateKind};

fn report(name: &str, reference: &Circuit, circuit: &Circuit) -> qreg::Result<()> {
    let diff = unitary_of(reference)?.max_abs_diff(&unitary_of(circuit)?);
    println!("{name:<10} {:>4} gates  max |diff| = {diff:.1e}", circuit.len());
    Ok(())
}

fn native(q: usize, g: GateApplication) -> qreg::Result<Circuit> {
    let mut c = Circuit::new(q);
    c.push(g)?;
    Ok(c)
}

fn main() -> qreg::Result<()> {
    report("swap", &native(2, GateApplication::swap(1, 0))?, &decompose_swap())?;
    report("ccnot", &native(3, GateApplication::ccx(2, 1, 0))?, &decompose_ccnot())?;
    report("cz", &native(2, GateApplication::cz(1, 0))?, &decompose_cz())?;
    for k in 2..=6 {
        let controls: Vec<usize> = (1..=k).rev().collect();
        let reference = native(k + 1, GateApplication::cnz(&controls, 0))?;
        let lowered = lower_to_cnot(&decompose_cnz(k)?);
        report(&format!("c^{k}z"), &reference, &lowered)?;
    }

    let mut c = Circuit::new(3);
    c.push(GateApplication::with_controls(GateKind::H, 0, &[1, 2]))?;
    println!("\ncontrolled-controlled-H as two-qubit gates:");
    print!("{}", format::render(&decompose(&c)));
    Ok(())
}
