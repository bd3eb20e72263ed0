//! Strided amplitude kernels.
//!
//! A single-target gate touches amplitude pairs `(i, i | 1 << t)` with bit
//! `t` of `i` clear. The state is walked in blocks of `2 << t` amplitudes;
//! within a block the low half holds the `bit t = 0` partners and the high
//! half the `bit t = 1` partners, so each pair update is a zip over two
//! contiguous slices. Controls restrict the update to indices whose control
//! bits are all set. No kernel allocates.

use crate::linalg::{C64, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Identity,
    Diagonal,
    AntiDiagonal,
    Dense,
}

fn shape_of(m: &[[C64; 2]; 2]) -> Shape {
    let off_zero = m[0][1] == ZERO && m[1][0] == ZERO;
    let diag_zero = m[0][0] == ZERO && m[1][1] == ZERO;
    if off_zero {
        if m[0][0] == C64::new(1.0, 0.0) && m[1][1] == C64::new(1.0, 0.0) {
            Shape::Identity
        } else {
            Shape::Diagonal
        }
    } else if diag_zero {
        Shape::AntiDiagonal
    } else {
        Shape::Dense
    }
}

/// Applies `m` to qubit `target` on every amplitude pair whose control bits
/// (`ctrl_mask`) are all set. `ctrl_mask` must not include `target`.
pub(crate) fn apply_2x2(amps: &mut [C64], m: &[[C64; 2]; 2], target: usize, ctrl_mask: usize) {
    debug_assert_eq!(ctrl_mask & (1 << target), 0);
    let stride = 1usize << target;
    let block = stride << 1;
    let shape = shape_of(m);
    if shape == Shape::Identity {
        return;
    }
    // control bits above the target are constant over a block; those below
    // vary with the offset inside the half-block
    let high_mask = ctrl_mask & !(block - 1);
    let low_mask = ctrl_mask & (stride - 1);

    let update = |lo: &mut [C64], hi: &mut [C64]| pair_update(shape, m, lo, hi);

    for (n, chunk) in amps.chunks_exact_mut(block).enumerate() {
        let base = n * block;
        if base & high_mask != high_mask {
            continue;
        }
        let (lo, hi) = chunk.split_at_mut(stride);
        if low_mask == 0 {
            update(lo, hi);
        } else {
            for off in 0..stride {
                if off & low_mask == low_mask {
                    update(&mut lo[off..off + 1], &mut hi[off..off + 1]);
                }
            }
        }
    }
}

/// `(lo, hi) <- m (lo, hi)` elementwise.
fn pair_update(shape: Shape, m: &[[C64; 2]; 2], lo: &mut [C64], hi: &mut [C64]) {
    let [[a, b], [c, d]] = *m;
    match shape {
        Shape::Identity => {}
        Shape::Diagonal => {
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                *x *= a;
                *y *= d;
            }
        }
        Shape::AntiDiagonal => {
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = b * v;
                *y = c * u;
            }
        }
        Shape::Dense => {
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = a * u + b * v;
                *y = c * u + d * v;
            }
        }
    }
}

/// Targets below this bit are swept in contiguous chunks of `2^LOW_BITS`
/// amplitudes (256 KiB).
const LOW_BITS: usize = 14;
/// High-target tiles are built from contiguous runs of `2^RUN_BITS`
/// amplitudes.
const RUN_BITS: usize = 8;
/// At most this many high targets share a tile, so a tile spans
/// `2^(TILE_TARGETS + RUN_BITS)` amplitudes (1 MiB).
const TILE_TARGETS: u32 = 8;

/// Applies a run of uncontrolled single-qubit gates, `(target, matrix)` in
/// circuit order, in a few sweeps over the state instead of one per gate.
///
/// Gates on different qubits commute and each sweep keeps the order of
/// gates on the same qubit, so the result equals applying them one by one.
/// The low sweep applies every gate with a target below `LOW_BITS` to one
/// chunk at a time. Each high sweep takes up to `TILE_TARGETS` high target
/// qubits and applies their gates to one tile at a time; a tile is the set
/// of runs reachable from a base run by flipping those target bits.
pub(crate) fn apply_single_run<I>(amps: &mut [C64], gates: I)
where
    I: Iterator<Item = (usize, [[C64; 2]; 2])> + Clone,
{
    let dim = amps.len();
    let mut high_mask = 0usize;
    let mut any_low = false;
    for (t, _) in gates.clone() {
        if t < LOW_BITS {
            any_low = true;
        } else {
            high_mask |= 1 << t;
        }
    }

    if any_low {
        let chunk = dim.min(1 << LOW_BITS);
        for block in amps.chunks_exact_mut(chunk) {
            for (t, m) in gates.clone().filter(|&(t, _)| t < LOW_BITS) {
                apply_2x2(block, &m, t, 0);
            }
        }
    }

    let run = 1usize << RUN_BITS;
    let mut remaining = high_mask;
    while remaining != 0 {
        // next group: the lowest TILE_TARGETS remaining target bits
        let mut group = 0usize;
        for _ in 0..TILE_TARGETS.min(remaining.count_ones()) {
            let bit = remaining & remaining.wrapping_neg();
            group |= bit;
            remaining &= !bit;
        }
        for base in (0..dim).step_by(run).filter(|b| b & group == 0) {
            for (t, m) in gates.clone().filter(|&(t, _)| group >> t & 1 == 1) {
                let shape = shape_of(&m);
                if shape == Shape::Identity {
                    continue;
                }
                let bit = 1usize << t;
                let others = group & !bit;
                // every subset of the other group bits, including the empty one
                let mut sub = 0usize;
                loop {
                    let i = base | sub;
                    let (head, tail) = amps.split_at_mut(i | bit);
                    pair_update(shape, &m, &mut head[i..i + run], &mut tail[..run]);
                    sub = sub.wrapping_sub(others) & others;
                    if sub == 0 {
                        break;
                    }
                }
            }
        }
    }
}

/// Exchanges qubits `a` and `b` on indices whose control bits are set.
pub(crate) fn apply_swap(amps: &mut [C64], a: usize, b: usize, ctrl_mask: usize) {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let bit_lo = 1usize << lo;
    let bit_hi = 1usize << hi;
    for i in 0..amps.len() {
        // visit each pair once: from the index with the high bit set and
        // the low bit clear
        if i & bit_hi != 0 && i & bit_lo == 0 && i & ctrl_mask == ctrl_mask {
            let j = (i & !bit_hi) | bit_lo;
            amps.swap(i, j);
        }
    }
}
