//! Grover search.
//!
//! The search register is the high `n` qubits; qubit 0 is an ancilla held
//! in `(|0> - |1>)/sqrt2`, so the bit-flip oracle `|j>|y> -> |j>|y ^ f(j)>`
//! acts as a sign flip on marked `j`. Each iteration is a sign flip followed
//! by inversion about the average `a_j -> 2 mean(a) - a_j`.
//!
//! With `M` marked strings out of `N = 2^n`, write `sin(t0) = sqrt(M/N)`
//! and `t = 2 t0`. After `k` iterations the total weight on marked strings
//! is `d_k^2` with `d_k = sin(t0 + k t)`, and on unmarked strings `u_k^2`
//! with `u_k = cos(t0 + k t)`.
//!
//! Two execution modes share this layout. Fast mode applies the oracle as a
//! permutation and the inversion as an in-place mean update. Circuit mode
//! builds the same steps from gates; its inversion is `H^n D H^n = -T`, so
//! the two modes agree up to a global sign `(-1)^k`.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Circuit, GateApplication};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::measure::{sample_register, Histogram};
use crate::rng::SimRng;
use crate::state::StateVector;

/// Predicate `f` on `n`-bit strings given by the set where it is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedOracle {
    n: usize,
    marked: BTreeSet<u64>,
}

impl MarkedOracle {
    pub fn new(n: usize, marked: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n == 0 || n > 62 {
            return Err(Error::InvalidArgument(format!("search width n = {n}")));
        }
        let marked: BTreeSet<u64> = marked.into_iter().collect();
        if let Some(&bad) = marked.iter().find(|&&l| l >> n != 0) {
            return Err(Error::InvalidArgument(format!(
                "marked index {bad} does not fit in {n} bits"
            )));
        }
        Ok(Self { n, marked })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn marked(&self) -> &BTreeSet<u64> {
        &self.marked
    }

    pub fn is_marked(&self, j: u64) -> bool {
        self.marked.contains(&j)
    }

    fn check_state(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.n + 1 {
            return Err(Error::Dimension(format!(
                "search over {} bits needs {} qubits, state has {}",
                self.n,
                self.n + 1,
                state.num_qubits()
            )));
        }
        Ok(())
    }
}

/// `H^(n+1) (I^n (x) X) |0>`: uniform search register, ancilla in
/// `(|0> - |1>)/sqrt2`.
pub fn grover_init(n: usize) -> Result<StateVector> {
    let mut state = StateVector::zero(n + 1)?;
    init_circuit(n).apply_to(&mut state)?;
    Ok(state)
}

fn init_circuit(n: usize) -> Circuit {
    let mut c = Circuit::new(n + 1);
    c.x(0);
    for q in 0..=n {
        c.h(q);
    }
    c
}

/// Applies the bit-flip oracle as a permutation of amplitudes.
pub fn sign_flip(state: &mut StateVector, oracle: &MarkedOracle) -> Result<()> {
    oracle.check_state(state)?;
    let amps = state.amplitudes_mut();
    for &l in &oracle.marked {
        let j = (l as usize) << 1;
        amps.swap(j, j | 1);
    }
    Ok(())
}

/// Inversion about the average on the top `n` qubits: for every setting of
/// the remaining low qubits, `a_j -> 2 mean(a) - a_j` over the `2^n` values
/// of the top register.
pub fn invert_about_average(state: &mut StateVector, n: usize) -> Result<()> {
    let q = state.num_qubits();
    if n == 0 || n > q {
        return Err(Error::InvalidArgument(format!(
            "cannot invert a {n}-qubit register of a {q}-qubit state"
        )));
    }
    let slice = 1usize << (q - n);
    let amps = state.amplitudes_mut();
    let mut mean = vec![C64::new(0.0, 0.0); slice];
    for row in amps.chunks_exact(slice) {
        for (m, a) in mean.iter_mut().zip(row) {
            *m += a;
        }
    }
    let scale = 2.0 / (1u64 << n) as f64;
    for m in &mut mean {
        *m *= scale;
    }
    for row in amps.chunks_exact_mut(slice) {
        for (a, m) in row.iter_mut().zip(&mean) {
            *a = m - *a;
        }
    }
    Ok(())
}

/// One sign flip plus one inversion about the average.
pub fn grover_iteration(state: &mut StateVector, oracle: &MarkedOracle) -> Result<()> {
    sign_flip(state, oracle)?;
    invert_about_average(state, oracle.n)
}

/// `X^n C^(n-1)Z X^n` on `n` qubits: negates `|0...0>` only.
pub fn build_d_circuit(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("D needs at least one qubit".into()));
    }
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.x(q);
    }
    let controls: Vec<usize> = (1..n).rev().collect();
    c.push(GateApplication::cnz(&controls, 0))?;
    for q in 0..n {
        c.x(q);
    }
    Ok(c)
}

/// `H^n D H^n` on the `n` qubits starting at `lowest` of a `total`-qubit
/// register. Equals minus the inversion about the average.
pub fn diffusion_circuit(total: usize, lowest: usize, n: usize) -> Result<Circuit> {
    let mut h = Circuit::new(total);
    for q in lowest..lowest + n {
        h.h(q);
    }
    let mut c = h.clone();
    c.append(&build_d_circuit(n)?.embed(total, lowest)?)?;
    c.append(&h)?;
    Ok(c)
}

/// Gate-level bit-flip oracle: one multi-controlled X per marked string,
/// sandwiched in X gates on its zero bits.
pub fn marked_oracle_circuit(oracle: &MarkedOracle) -> Result<Circuit> {
    let n = oracle.n;
    let mut c = Circuit::new(n + 1);
    let controls: Vec<usize> = (1..=n).rev().collect();
    for &l in &oracle.marked {
        let zeros: Vec<usize> = (0..n).filter(|b| (l >> b) & 1 == 0).map(|b| b + 1).collect();
        for &q in &zeros {
            c.x(q);
        }
        c.push(GateApplication::mcx(&controls, 0))?;
        for &q in &zeros {
            c.x(q);
        }
    }
    Ok(c)
}

/// The whole algorithm as one circuit: initialization then `iterations`
/// rounds of oracle and diffusion.
pub fn grover_circuit(oracle: &MarkedOracle, iterations: usize) -> Result<Circuit> {
    let n = oracle.n;
    let mut c = init_circuit(n);
    let round = {
        let mut r = marked_oracle_circuit(oracle)?;
        r.append(&diffusion_circuit(n + 1, 1, n)?)?;
        r
    };
    for _ in 0..iterations {
        c.append(&round)?;
    }
    Ok(c)
}

/// Rotation angle and optimal iteration count for `M` marked of `2^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroverSchedule {
    pub n: usize,
    pub num_marked: u64,
    /// Rotation per iteration.
    pub theta: f64,
    /// Initial angle above the unmarked axis; `sin(theta0) = sqrt(M/N)`.
    pub theta0: f64,
    pub k_opt: usize,
    pub predicted_success: f64,
}

impl GroverSchedule {
    /// `(d_k, u_k)` after `k` iterations.
    pub fn amplitudes_after(&self, k: usize) -> (f64, f64) {
        let phi = self.theta0 + k as f64 * self.theta;
        (phi.sin(), phi.cos())
    }

    pub fn success_after(&self, k: usize) -> f64 {
        self.amplitudes_after(k).0.powi(2)
    }
}

pub fn schedule(n: usize, num_marked: u64) -> Result<GroverSchedule> {
    if n == 0 || n > 62 {
        return Err(Error::InvalidArgument(format!("search width n = {n}")));
    }
    let size = 1u64 << n;
    if num_marked == 0 || num_marked >= size {
        return Err(Error::InvalidArgument(format!(
            "number of marked strings must be in 1..{size}, got {num_marked}"
        )));
    }
    let theta0 = (num_marked as f64 / size as f64).sqrt().asin();
    let mut s = GroverSchedule {
        n,
        num_marked,
        theta: 2.0 * theta0,
        theta0,
        k_opt: 0,
        predicted_success: 0.0,
    };
    let z = (FRAC_PI_2 - theta0) / s.theta;
    let (lo, hi) = (z.floor() as usize, z.ceil() as usize);
    // ties keep the smaller count
    s.k_opt = if s.success_after(hi) > s.success_after(lo) { hi } else { lo };
    s.predicted_success = s.success_after(s.k_opt);
    Ok(s)
}

/// Closed-form `(d_k, u_k)` for `k = 0..=k_max`.
pub fn predicted_trajectory(n: usize, num_marked: u64, k_max: usize) -> Result<Vec<(f64, f64)>> {
    let s = schedule(n, num_marked)?;
    Ok((0..=k_max).map(|k| s.amplitudes_after(k)).collect())
}

#[derive(Debug)]
pub struct GroverRun {
    /// Samples of the search register.
    pub histogram: Histogram,
    pub state: StateVector,
}

/// Initializes, iterates in fast mode, and samples the search register.
pub fn grover_run(
    oracle: &MarkedOracle,
    iterations: usize,
    shots: u64,
    rng: &mut SimRng,
) -> Result<GroverRun> {
    let mut state = grover_init(oracle.n)?;
    for _ in 0..iterations {
        grover_iteration(&mut state, oracle)?;
    }
    let histogram = sample_register(&state, 1, oracle.n, shots, rng)?;
    Ok(GroverRun { histogram, state })
}

/// Probability that the search register reads `j`.
pub fn search_probability(state: &StateVector, j: u64) -> f64 {
    let base = (j as usize) << 1;
    state.amplitude(base).norm_sqr() + state.amplitude(base | 1).norm_sqr()
}
