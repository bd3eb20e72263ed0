//! Circuit IR and execution.
//!
//! A [`Circuit`] is an ordered list of [`GateApplication`]s over a fixed
//! number of qubits. Steps run left to right in time, so the circuit's
//! unitary is the right-to-left product of its step unitaries. Circuits are
//! purely unitary: measurement is performed on the resulting state with the
//! functions in [`crate::measure`].

pub mod decompose;
pub mod format;
pub(crate) mod kernel;
pub mod route;

use std::fmt;

use crate::error::{Error, Result};
use crate::gates::{single_matrix, GateKind};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::state::StateVector;

/// Largest register for which [`unitary_of`] will build a full matrix.
pub const MAX_UNITARY_QUBITS: usize = 12;

/// One gate placed on specific qubits.
///
/// `targets` lists the qubits of the gate's own matrix in significance
/// order (for `cx` that is `[control, target]`). `controls` adds further
/// controls on top of whatever the kind already has.
#[derive(Clone, Debug, PartialEq)]
pub struct GateApplication {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
}

impl GateApplication {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Result<Self> {
        Self::controlled(kind, targets, Vec::new())
    }

    pub fn controlled(kind: GateKind, targets: Vec<usize>, controls: Vec<usize>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::Arity {
                gate: kind.name().to_string(),
                expected: kind.arity().to_string(),
                found: targets.len(),
            });
        }
        let app = Self {
            kind,
            targets,
            controls,
        };
        app.check_distinct()?;
        Ok(app)
    }

    pub fn single(kind: GateKind, qubit: usize) -> Self {
        assert!(kind.is_single_qubit(), "`{}` is not single-qubit", kind.name());
        Self {
            kind,
            targets: vec![qubit],
            controls: Vec::new(),
        }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cnot, vec![control, target]).expect("distinct qubits")
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::new(GateKind::Cz, vec![a, b]).expect("distinct qubits")
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::new(GateKind::Swap, vec![a, b]).expect("distinct qubits")
    }

    pub fn ccx(c1: usize, c2: usize, target: usize) -> Self {
        Self::new(GateKind::Ccnot, vec![c1, c2, target]).expect("distinct qubits")
    }

    /// Multi-controlled X; plain `X` when `controls` is empty.
    pub fn mcx(controls: &[usize], target: usize) -> Self {
        if controls.is_empty() {
            return Self::single(GateKind::X, target);
        }
        let mut t = controls.to_vec();
        t.push(target);
        Self::new(GateKind::Mcx(controls.len()), t).expect("distinct qubits")
    }

    /// Multi-controlled Z; plain `Z` when `controls` is empty.
    pub fn cnz(controls: &[usize], target: usize) -> Self {
        if controls.is_empty() {
            return Self::single(GateKind::Z, target);
        }
        let mut t = controls.to_vec();
        t.push(target);
        Self::new(GateKind::CnZ(controls.len()), t).expect("distinct qubits")
    }

    /// Single-qubit `kind` on `target` with the given controls.
    pub fn with_controls(kind: GateKind, target: usize, controls: &[usize]) -> Self {
        Self::controlled(kind, vec![target], controls.to_vec()).expect("distinct qubits")
    }

    fn check_distinct(&self) -> Result<()> {
        let mut seen = 0u128;
        for &q in self.targets.iter().chain(&self.controls) {
            if q >= 128 {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits: 128,
                });
            }
            if seen & (1 << q) != 0 {
                return Err(Error::DuplicateQubit(q));
            }
            seen |= 1 << q;
        }
        Ok(())
    }

    /// Every qubit the gate touches.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().chain(&self.controls).copied()
    }

    pub fn num_qubits_touched(&self) -> usize {
        self.targets.len() + self.controls.len()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            kind: self.kind.adjoint(),
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    fn check_range(&self, num_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        Ok(())
    }

    /// Applies the gate to `state` in place.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        self.check_range(state.num_qubits())?;
        let extra: usize = self.controls.iter().map(|&c| 1usize << c).sum();
        let amps = state.amplitudes_mut();
        match self.kind.controlled_base() {
            None => kernel::apply_swap(amps, self.targets[0], self.targets[1], extra),
            Some((base, n)) => {
                let builtin: usize = self.targets[..n].iter().map(|&c| 1usize << c).sum();
                kernel::apply_2x2(amps, &base, self.targets[n], extra | builtin);
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format::render_step(self))
    }
}

/// Applies `g` to `state` in place.
pub fn apply(state: &mut StateVector, g: &GateApplication) -> Result<()> {
    g.apply(state)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    steps: Vec<GateApplication>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(num_qubits: usize, steps: Vec<GateApplication>) -> Result<Self> {
        let mut c = Self::new(num_qubits);
        c.extend(steps)?;
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn steps(&self) -> &[GateApplication] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, g: GateApplication) -> Result<&mut Self> {
        g.check_range(self.num_qubits)?;
        self.steps.push(g);
        Ok(self)
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = GateApplication>) -> Result<&mut Self> {
        for g in gates {
            self.push(g)?;
        }
        Ok(self)
    }

    /// Appends every step of `other`, which must not be wider than `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        self.extend(other.steps.iter().cloned())
    }

    /// Adds a single-qubit gate. Panics if `q` is out of range.
    pub fn gate(&mut self, kind: GateKind, q: usize) -> &mut Self {
        self.push(GateApplication::single(kind, q)).expect("qubit in range");
        self
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::H, q)
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::X, q)
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::Z, q)
    }

    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.push(GateApplication::cx(control, target)).expect("qubits in range");
        self
    }

    pub fn ccx(&mut self, c1: usize, c2: usize, target: usize) -> &mut Self {
        self.push(GateApplication::ccx(c1, c2, target)).expect("qubits in range");
        self
    }

    /// Runs the circuit on `state` in place.
    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::Dimension(format!(
                "{}-qubit circuit run on a {}-qubit state",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        let is_plain_single =
            |g: &GateApplication| g.controls.is_empty() && g.kind.is_single_qubit();
        let mut rest = self.steps.as_slice();
        while let Some(first) = rest.first() {
            let run = rest.iter().take_while(|g| is_plain_single(g)).count();
            if run >= 2 {
                let (singles, tail) = rest.split_at(run);
                kernel::apply_single_run(
                    state.amplitudes_mut(),
                    singles.iter().map(|g| (g.targets[0], single_matrix(g.kind))),
                );
                rest = tail;
            } else {
                first.apply(state)?;
                rest = &rest[1..];
            }
        }
        Ok(())
    }

    /// Steps reversed, each replaced by its adjoint.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            steps: self.steps.iter().rev().map(GateApplication::adjoint).collect(),
        }
    }

    /// The same circuit with every step gaining `controls`.
    pub fn controlled_by(&self, controls: &[usize]) -> Result<Circuit> {
        let steps = self
            .steps
            .iter()
            .map(|g| {
                let mut c = g.controls.clone();
                c.extend_from_slice(controls);
                GateApplication::controlled(g.kind, g.targets.clone(), c)
            })
            .collect::<Result<Vec<_>>>()?;
        Circuit::from_steps(self.num_qubits, steps)
    }

    /// The same steps on a `total`-qubit register with every index moved up
    /// by `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> Result<Circuit> {
        let shift = |qs: &[usize]| qs.iter().map(|q| q + offset).collect::<Vec<_>>();
        let steps = self.steps.iter().map(|g| GateApplication {
            kind: g.kind,
            targets: shift(&g.targets),
            controls: shift(&g.controls),
        });
        Circuit::from_steps(total, steps.collect())
    }

    /// Total number of two-or-more-qubit steps.
    pub fn multi_qubit_count(&self) -> usize {
        self.steps.iter().filter(|g| g.num_qubits_touched() > 1).count()
    }
}

/// Runs `c` on `initial` and returns the result.
pub fn run(c: &Circuit, mut initial: StateVector) -> Result<StateVector> {
    c.apply_to(&mut initial)?;
    Ok(initial)
}

/// Full `2^q x 2^q` unitary; column `j` is the circuit applied to `|j>`.
/// Verification only; refuses more than [`MAX_UNITARY_QUBITS`] qubits.
pub fn unitary_of(c: &Circuit) -> Result<ComplexMatrix> {
    let q = c.num_qubits();
    if q == 0 || q > MAX_UNITARY_QUBITS {
        return Err(Error::Capacity {
            requested: q,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << q;
    let mut u = ComplexMatrix::zeros(dim, dim);
    for j in 0..dim {
        let out = run(c, StateVector::basis(q, j)?)?;
        for (i, &z) in out.amplitudes().iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    Ok(u)
}

/// `unitary_of(c) * v` computed through the dense matrix.
pub fn dense_apply(c: &Circuit, v: &ComplexVector) -> Result<ComplexVector> {
    unitary_of(c)?.matvec(v)
}
