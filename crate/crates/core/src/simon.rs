//! Simon's hidden-shift problem.
//!
//! Given `f` on `n`-bit strings with `f(x) = f(z)` exactly when
//! `z = x ^ a`, recover `a`. The quantum routine samples strings `k` with
//! `k . a = 0 (mod 2)`; about `n` independent samples pin `a` down. The
//! classical baseline has to wait for a collision, which takes on the order
//! of `2^(n/2)` queries.
//!
//! The 2n-qubit register holds the input `x` on the high `n` qubits and the
//! output `y` on the low `n` qubits.

use rand::seq::SliceRandom;

use crate::basis::dot_parity;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::GateKind;
use crate::gf2::Gf2System;
use crate::measure::sample_distribution;
use crate::rng::SimRng;
use crate::state::StateVector;

/// Black-box `f(x) = min(x, x ^ a)` stored as a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimonOracle {
    n: usize,
    hidden_a: u64,
    table: Vec<u64>,
}

impl SimonOracle {
    pub fn new(n: usize, hidden_a: u64) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::InvalidArgument(format!("Simon width n = {n}")));
        }
        if hidden_a >> n != 0 {
            return Err(Error::InvalidArgument(format!(
                "hidden string {hidden_a} does not fit in {n} bits"
            )));
        }
        let table = (0..1u64 << n).map(|x| x.min(x ^ hidden_a)).collect();
        Ok(Self { n, hidden_a, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hidden_a(&self) -> u64 {
        self.hidden_a
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.table[x as usize]
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    /// `|x>|y> -> |x>|y ^ f(x)>` on a 2n-qubit state.
    pub fn apply_uf(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != 2 * self.n {
            return Err(Error::Dimension(format!(
                "Simon oracle for n = {} needs {} qubits, state has {}",
                self.n,
                2 * self.n,
                state.num_qubits()
            )));
        }
        let n = self.n;
        state.apply_involution(|j| j ^ self.table[j >> n] as usize);
        Ok(())
    }
}

pub fn make_oracle(n: usize, hidden_a: u64) -> Result<SimonOracle> {
    SimonOracle::new(n, hidden_a)
}

pub fn apply_uf(state: &mut StateVector, oracle: &SimonOracle) -> Result<()> {
    oracle.apply_uf(state)
}

fn hadamard_top(n: usize) -> Circuit {
    let mut c = Circuit::new(2 * n);
    for q in n..2 * n {
        c.gate(GateKind::H, q);
    }
    c
}

/// `(H^n (x) I) U_f (H^n (x) I) |0>_{2n}`, just before measurement.
pub fn simon_final_state(oracle: &SimonOracle) -> Result<StateVector> {
    let n = oracle.n;
    let mut state = StateVector::zero(2 * n)?;
    let h = hadamard_top(n);
    h.apply_to(&mut state)?;
    oracle.apply_uf(&mut state)?;
    h.apply_to(&mut state)?;
    Ok(state)
}

/// One run of the quantum circuit followed by a measurement of the input
/// register. Costs one oracle query.
pub fn simon_sample(oracle: &SimonOracle, rng: &mut SimRng) -> Result<u64> {
    let state = simon_final_state(oracle)?;
    let probs = state.register_distribution(oracle.n, oracle.n)?;
    let counts = sample_distribution(&probs, 1, rng)?;
    let k = counts.iter().position(|&c| c == 1).expect("one shot drawn") as u64;
    debug_assert_eq!(dot_parity(k, oracle.hidden_a), 0);
    Ok(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimonResult {
    pub a: u64,
    /// Oracle calls made by the quantum circuit.
    pub quantum_queries: usize,
    /// Classical evaluations of `f` spent checking candidates.
    pub verification_queries: usize,
    /// Every measured `k`, in order.
    pub samples: Vec<u64>,
    /// Rank of the system after each sample.
    pub rank_trace: Vec<usize>,
}

/// Samples until the constraints force a candidate, then checks it with
/// classical queries. Fails once `max_samples` runs have not produced a
/// verified answer.
pub fn simon_solve(oracle: &SimonOracle, max_samples: usize, rng: &mut SimRng) -> Result<SimonResult> {
    let n = oracle.n;
    if max_samples < n {
        return Err(Error::InvalidArgument(format!(
            "max_samples = {max_samples} is below n = {n}"
        )));
    }
    // the pre-measurement state does not depend on the sample, but each
    // sample still stands for a separate run of the circuit
    let probs = simon_final_state(oracle)?.register_distribution(n, n)?;
    let mut sys = Gf2System::new(n)?;
    let mut samples = Vec::new();
    let mut rank_trace = Vec::new();
    let mut verification_queries = 0;
    let mut rejected = None;
    while samples.len() < max_samples {
        let counts = sample_distribution(&probs, 1, rng)?;
        let k = counts.iter().position(|&c| c == 1).expect("one shot drawn") as u64;
        debug_assert_eq!(dot_parity(k, oracle.hidden_a), 0);
        samples.push(k);
        sys.insert(k)?;
        rank_trace.push(sys.rank());
        match sys.nullspace_candidate() {
            Some(0) => {
                return Ok(SimonResult {
                    a: 0,
                    quantum_queries: samples.len(),
                    verification_queries,
                    samples,
                    rank_trace,
                })
            }
            Some(c) if rejected != Some(c) => {
                verification_queries += 2;
                if oracle.eval(0) == oracle.eval(c) {
                    return Ok(SimonResult {
                        a: c,
                        quantum_queries: samples.len(),
                        verification_queries,
                        samples,
                        rank_trace,
                    });
                }
                rejected = Some(c);
            }
            _ => {}
        }
    }
    Err(Error::SolveFailed(format!(
        "no verified hidden string after {max_samples} samples (rank {})",
        sys.rank()
    )))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalResult {
    pub a: u64,
    pub queries: usize,
}

/// Queries distinct random inputs until two share an output. After
/// `2^(n-1) + 1` distinct inputs without a collision, `f` is one-to-one and
/// `a = 0`.
pub fn classical_baseline(oracle: &SimonOracle, rng: &mut SimRng) -> ClassicalResult {
    let n = oracle.n;
    let mut inputs: Vec<u64> = (0..1u64 << n).collect();
    inputs.shuffle(rng);
    let mut seen = vec![u64::MAX; 1 << n];
    let limit = (1usize << (n - 1)) + 1;
    for (i, &x) in inputs.iter().take(limit).enumerate() {
        let y = oracle.eval(x) as usize;
        if seen[y] != u64::MAX {
            return ClassicalResult {
                a: x ^ seen[y],
                queries: i + 1,
            };
        }
        seen[y] = x;
    }
    ClassicalResult {
        a: 0,
        queries: limit.min(inputs.len()),
    }
}
