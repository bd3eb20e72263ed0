//! Rewriting wide gates into narrow ones.
//!
//! Two levels are offered:
//!
//! * [`decompose`] rewrites every step into gates touching at most two
//!   qubits: single-qubit gates and singly-controlled single-qubit gates
//!   (`cx`, `cz`, controlled `sx`, controlled phases, ...).
//! * [`lower_to_cnot`] goes one step further, to single-qubit gates and
//!   `cx` only.
//!
//! Multi-controlled phases use the square-root recursion: `C^m P(l)` is a
//! controlled `P(l/2)` from the last control, a `C^(m-1) X` onto that
//! control, the controlled inverse, the `C^(m-1) X` again, and finally
//! `C^(m-1) P(l/2)` from the remaining controls. The `C^(m-1) X` blocks
//! borrow the phase target as a dirty ancilla, which keeps them linear in
//! `m` and the whole construction quadratic. With `l = pi` this is the
//! `C^n Z` ladder of `sqrt(Z)` / `sqrt(Z)*` gates.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gates::{phase_kind, single_matrix, u_params_of, GateKind};
use crate::linalg::{C64, ZERO};

use super::{Circuit, GateApplication};

type Steps = Vec<GateApplication>;

fn single(kind: GateKind, q: usize) -> GateApplication {
    GateApplication::single(kind, q)
}

fn ctrl1(kind: GateKind, control: usize, target: usize) -> GateApplication {
    GateApplication::with_controls(kind, target, &[control])
}

/// SWAP of `a` and `b` as three CNOTs.
pub fn swap_as_cnots(a: usize, b: usize) -> Steps {
    vec![
        GateApplication::cx(a, b),
        GateApplication::cx(b, a),
        GateApplication::cx(a, b),
    ]
}

/// Two-qubit SWAP circuit built from three CNOTs.
pub fn decompose_swap() -> Circuit {
    Circuit::from_steps(2, swap_as_cnots(1, 0)).expect("valid")
}

/// Toffoli from controlled `sqrt(X)` gates and CNOTs:
/// `C(mid)-sX`, `CX(top, mid)`, `C(mid)-sX*`, `CX(top, mid)`, `C(top)-sX`.
pub fn ccnot_as_controlled_roots(top: usize, mid: usize, target: usize) -> Steps {
    vec![
        ctrl1(GateKind::SqrtX, mid, target),
        GateApplication::cx(top, mid),
        ctrl1(GateKind::SqrtXDag, mid, target),
        GateApplication::cx(top, mid),
        ctrl1(GateKind::SqrtX, top, target),
    ]
}

/// Three-qubit Toffoli circuit, controls on qubits 2 and 1, target 0.
pub fn decompose_ccnot() -> Circuit {
    Circuit::from_steps(3, ccnot_as_controlled_roots(2, 1, 0)).expect("valid")
}

/// Controlled-Z as `H`-conjugated CNOT.
pub fn cz_as_cnot(control: usize, target: usize) -> Steps {
    vec![
        single(GateKind::H, target),
        GateApplication::cx(control, target),
        single(GateKind::H, target),
    ]
}

pub fn decompose_cz() -> Circuit {
    Circuit::from_steps(2, cz_as_cnot(1, 0)).expect("valid")
}

/// `C^n Z` on `n_controls + 1` qubits (controls `n..=1`, target 0), built
/// from controlled phase roots and Toffolis.
pub fn decompose_cnz(n_controls: usize) -> Result<Circuit> {
    if n_controls == 0 {
        return Err(Error::InvalidArgument("C^nZ needs at least one control".into()));
    }
    let controls: Vec<usize> = (1..=n_controls).rev().collect();
    Circuit::from_steps(n_controls + 1, controlled_phase(&controls, 0, PI))
}

/// `diag(1, e^{i lambda})` on `target`, controlled by all of `controls`.
/// Output gates touch at most three qubits (Toffolis inside the CX blocks).
pub fn controlled_phase(controls: &[usize], target: usize, lambda: f64) -> Steps {
    let mut out = Vec::new();
    controlled_phase_into(controls, target, lambda, &mut out);
    out
}

fn controlled_phase_into(controls: &[usize], target: usize, lambda: f64, out: &mut Steps) {
    if lambda == 0.0 {
        return;
    }
    match controls {
        [] => out.push(single(phase_kind(lambda), target)),
        [c] if phase_kind(lambda) == GateKind::Z => out.push(GateApplication::cz(*c, target)),
        [c] => out.push(ctrl1(phase_kind(lambda), *c, target)),
        [rest @ .., last] => {
            let half = lambda / 2.0;
            out.push(ctrl1(phase_kind(half), *last, target));
            mcx_dirty(rest, *last, &[target], out).expect("target is a valid dirty ancilla");
            out.push(ctrl1(phase_kind(-half), *last, target));
            mcx_dirty(rest, *last, &[target], out).expect("target is a valid dirty ancilla");
            controlled_phase_into(rest, target, half, out);
        }
    }
}

/// Multi-controlled X using `borrowed` qubits in an arbitrary state as
/// scratch; every borrowed qubit is returned to its input state. Needs at
/// least one borrowed qubit for three or more controls.
pub fn mcx_borrowed(controls: &[usize], target: usize, borrowed: &[usize]) -> Result<Steps> {
    let mut out = Vec::new();
    mcx_dirty(controls, target, borrowed, &mut out)?;
    Ok(out)
}

fn mcx_dirty(controls: &[usize], target: usize, borrowed: &[usize], out: &mut Steps) -> Result<()> {
    let k = controls.len();
    match k {
        0 => out.push(single(GateKind::X, target)),
        1 => out.push(GateApplication::cx(controls[0], target)),
        2 => out.push(GateApplication::ccx(controls[0], controls[1], target)),
        _ if borrowed.len() >= k - 2 => toffoli_ladder(controls, target, &borrowed[..k - 2], out),
        _ if !borrowed.is_empty() => {
            // split the controls in two halves around one borrowed qubit
            let a = borrowed[0];
            let (first, second) = controls.split_at(k.div_ceil(2));
            let mut spare: Vec<usize> = second.to_vec();
            spare.push(target);
            let mut upper: Vec<usize> = second.to_vec();
            upper.push(a);
            for _ in 0..2 {
                mcx_dirty(first, a, &spare, out)?;
                mcx_dirty(&upper, target, first, out)?;
            }
        }
        _ => {
            return Err(Error::InsufficientAncillas {
                needed: 1,
                available: 0,
            })
        }
    }
    Ok(())
}

/// `4(k-2)` Toffolis for `k >= 3` controls with `k-2` dirty ancillas.
fn toffoli_ladder(c: &[usize], target: usize, a: &[usize], out: &mut Steps) {
    let m = c.len();
    let down = |out: &mut Steps| {
        for i in (2..=m - 2).rev() {
            out.push(GateApplication::ccx(c[i], a[i - 2], a[i - 1]));
        }
    };
    let up = |out: &mut Steps| {
        for i in 2..=m - 2 {
            out.push(GateApplication::ccx(c[i], a[i - 2], a[i - 1]));
        }
    };
    out.push(GateApplication::ccx(c[m - 1], a[m - 3], target));
    down(out);
    out.push(GateApplication::ccx(c[0], c[1], a[0]));
    up(out);
    out.push(GateApplication::ccx(c[m - 1], a[m - 3], target));
    down(out);
    out.push(GateApplication::ccx(c[0], c[1], a[0]));
    up(out);
}

/// Multi-controlled X with clean ancillas: a Toffoli chain computes the AND
/// of the controls into the ancillas, flips the target, and uncomputes.
/// `k >= 3` controls need `k - 2` ancillas, all in `|0>` on entry; they are
/// `|0>` again on exit.
pub fn mcx_with_ancilla(controls: &[usize], target: usize, ancillas: &[usize]) -> Result<Steps> {
    let k = controls.len();
    if k <= 2 {
        let mut out = Vec::new();
        mcx_dirty(controls, target, &[], &mut out)?;
        return Ok(out);
    }
    if ancillas.len() < k - 2 {
        return Err(Error::InsufficientAncillas {
            needed: k - 2,
            available: ancillas.len(),
        });
    }
    let mut compute = vec![GateApplication::ccx(controls[0], controls[1], ancillas[0])];
    for i in 2..k - 1 {
        compute.push(GateApplication::ccx(controls[i], ancillas[i - 2], ancillas[i - 1]));
    }
    let mut out = compute.clone();
    out.push(GateApplication::ccx(controls[k - 1], ancillas[k - 3], target));
    out.extend(compute.into_iter().rev());
    Ok(out)
}

/// Eigen-decomposition of a 2x2 unitary as `W diag(e^{i a}, e^{i b}) W*`
/// with `W` in SU(2).
fn diagonalize(u: [[C64; 2]; 2]) -> ([[C64; 2]; 2], f64, f64) {
    let [[a, b], [c, d]] = u;
    if b.norm() < 1e-14 && c.norm() < 1e-14 {
        let one = C64::new(1.0, 0.0);
        return ([[one, ZERO], [ZERO, one]], a.arg(), d.arg());
    }
    let half_tr = (a + d) / 2.0;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    // (b, l1 - a) solves (U - l1) v = 0 when b != 0; for a unitary |b| = |c|
    let (p, q) = (b, l1 - a);
    let n = (p.norm_sqr() + q.norm_sqr()).sqrt();
    let (p, q) = (p / n, q / n);
    let w = [[p, -q.conj()], [q, p.conj()]];
    (w, l1.arg(), l2.arg())
}

fn u_kind(w: [[C64; 2]; 2]) -> GateKind {
    let (theta, phi, lambda, _) = u_params_of(w);
    GateKind::U { theta, phi, lambda }
}

/// Any single-qubit unitary `u` on `target` controlled by `controls`,
/// written with `u` gates and controlled phases.
pub fn controlled_unitary(u: [[C64; 2]; 2], controls: &[usize], target: usize) -> Steps {
    let (w, alpha, beta) = diagonalize(u);
    let w_kind = u_kind(w);
    let mut out = vec![single(w_kind.adjoint(), target)];
    if let [rest @ .., last] = controls {
        controlled_phase_into(rest, *last, alpha, &mut out);
        controlled_phase_into(controls, target, beta - alpha, &mut out);
    } else {
        // no controls: the leading phase is global
        controlled_phase_into(&[], target, beta - alpha, &mut out);
    }
    out.push(single(w_kind, target));
    out
}

fn is_x(m: &[[C64; 2]; 2]) -> bool {
    *m == single_matrix(GateKind::X)
}

/// `Some(lambda)` when `m = diag(1, e^{i lambda})`.
fn phase_of(m: &[[C64; 2]; 2]) -> Option<f64> {
    let one = C64::new(1.0, 0.0);
    (m[0][1] == ZERO && m[1][0] == ZERO && m[0][0] == one).then(|| m[1][1].arg())
}

/// Rewrites one step into gates touching at most two qubits.
pub fn expand(g: &GateApplication) -> Steps {
    let mut out = Vec::new();
    expand_into(g, &mut out);
    out
}

fn expand_into(g: &GateApplication, out: &mut Steps) {
    if g.kind == GateKind::Swap {
        let (a, b) = (g.targets[0], g.targets[1]);
        if g.controls.is_empty() {
            out.extend(swap_as_cnots(a, b));
        } else {
            let mut inner = g.controls.clone();
            inner.push(a);
            out.push(GateApplication::cx(b, a));
            expand_into(&GateApplication::mcx(&inner, b), out);
            out.push(GateApplication::cx(b, a));
        }
        return;
    }
    if g.num_qubits_touched() <= 2 {
        out.push(g.clone());
        return;
    }
    let (base, n) = g.kind.controlled_base().expect("swap handled above");
    let mut controls: Vec<usize> = g.targets[..n].to_vec();
    controls.extend_from_slice(&g.controls);
    let target = g.targets[n];

    let wide: Steps = if is_x(&base) {
        if controls.len() == 2 {
            ccnot_as_controlled_roots(controls[0], controls[1], target)
        } else {
            let mut s = vec![single(GateKind::H, target)];
            s.extend(controlled_phase(&controls, target, PI));
            s.push(single(GateKind::H, target));
            s
        }
    } else if let Some(lambda) = phase_of(&base) {
        controlled_phase(&controls, target, lambda)
    } else {
        controlled_unitary(base, &controls, target)
    };
    for step in &wide {
        expand_into(step, out);
    }
}

/// Every step rewritten into single-qubit and singly-controlled gates.
pub fn decompose(c: &Circuit) -> Circuit {
    let mut out = Vec::new();
    for g in c.steps() {
        expand_into(g, &mut out);
    }
    Circuit::from_steps(c.num_qubits(), out).expect("same qubit range")
}

/// Rewrites a gate touching at most two qubits into single-qubit gates
/// and CNOTs.
fn lower_two_qubit(g: &GateApplication, out: &mut Steps) {
    if g.kind == GateKind::Swap {
        out.extend(swap_as_cnots(g.targets[0], g.targets[1]));
        return;
    }
    let (base, n) = g.kind.controlled_base().expect("swap handled above");
    let mut controls: Vec<usize> = g.targets[..n].to_vec();
    controls.extend_from_slice(&g.controls);
    let target = g.targets[n];
    match controls.as_slice() {
        [] => out.push(g.clone()),
        [c] => {
            let c = *c;
            if is_x(&base) {
                out.push(GateApplication::cx(c, target));
            } else if let Some(lambda) = phase_of(&base) {
                let half = lambda / 2.0;
                out.push(single(phase_kind(half), c));
                out.push(GateApplication::cx(c, target));
                out.push(single(phase_kind(-half), target));
                out.push(GateApplication::cx(c, target));
                out.push(single(phase_kind(half), target));
            } else {
                for step in controlled_unitary(base, &[c], target) {
                    lower_two_qubit(&step, out);
                }
            }
        }
        _ => unreachable!("gate touches more than two qubits"),
    }
}

/// Every step rewritten into single-qubit gates and CNOTs.
pub fn lower_to_cnot(c: &Circuit) -> Circuit {
    let mut out = Vec::new();
    for g in decompose(c).steps() {
        lower_two_qubit(g, &mut out);
    }
    Circuit::from_steps(c.num_qubits(), out).expect("same qubit range")
}
