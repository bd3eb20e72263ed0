//! Measurement and sampling.
//!
//! Measuring consumes the [`StateVector`]: the collapsed state is returned
//! and the pre-measurement state is gone. Sampling many shots from one
//! state is equivalent to re-running the circuit and measuring each time,
//! because circuit execution is deterministic.

use std::collections::BTreeMap;

use crate::basis::render_bits;
use crate::error::{Error, Result};
use crate::rng::SimRng;
use crate::state::StateVector;

/// Below this, an outcome probability counts as zero.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Bit string (most significant qubit first) to count.
pub type Histogram = BTreeMap<String, u64>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub qubit: usize,
    pub bit: u8,
    pub probability: f64,
}

/// Measures qubit `k`, collapsing and renormalizing the state.
pub fn measure_qubit(
    mut state: StateVector,
    k: usize,
    rng: &mut SimRng,
) -> Result<(MeasurementOutcome, StateVector)> {
    state.check_qubit(k)?;
    let p1 = state.probability_of(&[k], &[1])?;
    let p0 = state.probability_of(&[k], &[0])?;
    if p0 < DEGENERATE_TOL && p1 < DEGENERATE_TOL {
        return Err(Error::InvalidState(format!(
            "both outcomes on qubit {k} have negligible probability"
        )));
    }
    let bit = u8::from(rng.uniform() * (p0 + p1) >= p0);
    let p = if bit == 1 { p1 } else { p0 };
    let mask = 1usize << k;
    let want = (bit as usize) << k;
    state.project(|j| j & mask == want, 1.0 / p.sqrt());
    let outcome = MeasurementOutcome {
        qubit: k,
        bit,
        probability: p / (p0 + p1),
    };
    Ok((outcome, state))
}

fn check_permutation(order: &[usize], q: usize) -> Result<()> {
    let mut seen = vec![false; q];
    for &k in order {
        if k >= q {
            return Err(Error::QubitOutOfRange {
                qubit: k,
                num_qubits: q,
            });
        }
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::DuplicateQubit(k));
        }
    }
    if order.len() != q {
        return Err(Error::InvalidArgument(format!(
            "measurement order lists {} of {q} qubits",
            order.len()
        )));
    }
    Ok(())
}

/// Measures every qubit in `order`; returns the bit string.
pub fn measure_all(state: StateVector, order: &[usize], rng: &mut SimRng) -> Result<String> {
    let q = state.num_qubits();
    check_permutation(order, q)?;
    let mut value = 0u64;
    let mut state = state;
    for &k in order {
        let (outcome, next) = measure_qubit(state, k, rng)?;
        value |= (outcome.bit as u64) << k;
        state = next;
    }
    Ok(render_bits(value, q))
}

/// Exact joint outcome distribution of measuring in `order`, computed by
/// following every collapse branch. Indexed by basis integer.
pub fn branch_distribution(state: &StateVector, order: &[usize]) -> Result<Vec<f64>> {
    check_permutation(order, state.num_qubits())?;
    let mut out = vec![0.0; state.dim()];
    walk_branches(state.duplicate_for_analysis(), order, 1.0, 0, &mut out);
    Ok(out)
}

fn walk_branches(state: StateVector, order: &[usize], weight: f64, value: usize, out: &mut [f64]) {
    let Some((&k, rest)) = order.split_first() else {
        out[value] += weight;
        return;
    };
    for bit in 0..2u8 {
        let p = state.probability_of(&[k], &[bit]).expect("valid qubit");
        if p < DEGENERATE_TOL {
            continue;
        }
        let mut branch = state.duplicate_for_analysis();
        let mask = 1usize << k;
        let want = (bit as usize) << k;
        branch.project(|j| j & mask == want, 1.0 / p.sqrt());
        walk_branches(branch, rest, weight * p, value | want, out);
    }
}

/// Draws `shots` indices from `probs` (which need not be normalized).
pub fn sample_distribution(probs: &[f64], shots: u64, rng: &mut SimRng) -> Result<Vec<u64>> {
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut total = 0.0;
    for &p in probs {
        if p.is_nan() || p < 0.0 {
            return Err(Error::InvalidArgument(format!("probability {p}")));
        }
        total += p;
        cumulative.push(total);
    }
    if total <= 0.0 {
        return Err(Error::InvalidState("distribution has zero mass".into()));
    }
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let r = rng.uniform() * total;
        let i = cumulative.partition_point(|&c| c <= r).min(probs.len() - 1);
        // skip zero-probability slots that share a cumulative value
        let i = (i..probs.len()).find(|&j| probs[j] > 0.0).unwrap_or(i);
        counts[i] += 1;
    }
    Ok(counts)
}

fn to_histogram(counts: &[u64], width: usize) -> Histogram {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(j, &c)| (render_bits(j as u64, width), c))
        .collect()
}

/// Multinomial sample of full-register measurements.
pub fn sample_counts(state: &StateVector, shots: u64, rng: &mut SimRng) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let counts = sample_distribution(&state.probabilities(), shots, rng)?;
    Ok(to_histogram(&counts, state.num_qubits()))
}

/// Samples only the `width` qubits starting at `lowest`.
pub fn sample_register(
    state: &StateVector,
    lowest: usize,
    width: usize,
    shots: u64,
    rng: &mut SimRng,
) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let probs = state.register_distribution(lowest, width)?;
    let counts = sample_distribution(&probs, shots, rng)?;
    Ok(to_histogram(&counts, width))
}

/// Exact probabilities keyed like a [`Histogram`], omitting zeros.
pub fn exact_probabilities(probs: &[f64], width: usize) -> BTreeMap<String, f64> {
    probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > DEGENERATE_TOL)
        .map(|(j, &p)| (render_bits(j as u64, width), p))
        .collect()
}
