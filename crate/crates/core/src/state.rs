//! The quantum register: `2^q` complex amplitudes of unit total norm.
//!
//! Amplitude `j` belongs to the basis state whose binary expansion is `j`,
//! with qubit 0 as the least significant bit. There is deliberately no
//! `Clone` on [`StateVector`]: measurement consumes the register, so the
//! pre-measurement state cannot be recovered from the result. Tests that
//! need a copy go through [`StateVector::amplitudes`] explicitly.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{ComplexVector, C64, ONE, ZERO};

pub const DEFAULT_MAX_QUBITS: usize = 24;
const HARD_MAX_QUBITS: usize = 40;

/// Tolerance on `sum |a_j|^2 = 1`.
pub const NORM_TOL: f64 = 1e-10;

/// Register capacity, read once from `QREG_QMAX` (default 24).
pub fn max_qubits() -> usize {
    static QMAX: OnceLock<usize> = OnceLock::new();
    *QMAX.get_or_init(|| {
        std::env::var("QREG_QMAX")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|v| v.clamp(1, HARD_MAX_QUBITS))
            .unwrap_or(DEFAULT_MAX_QUBITS)
    })
}

pub(crate) fn check_capacity(q: usize, limit: usize) -> Result<()> {
    if q == 0 || q > limit {
        return Err(Error::Capacity {
            requested: q,
            limit,
        });
    }
    Ok(())
}

#[derive(Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

/// A single-qubit state `(a_0, a_1)`.
pub type QubitAmplitudes = [C64; 2];

impl StateVector {
    /// `|0...0>` on `q` qubits.
    pub fn zero(q: usize) -> Result<Self> {
        Self::zero_with_limit(q, max_qubits())
    }

    pub fn zero_with_limit(q: usize, limit: usize) -> Result<Self> {
        Self::basis_with_limit(q, 0, limit)
    }

    /// Computational basis state `|index>` on `q` qubits.
    pub fn basis(q: usize, index: usize) -> Result<Self> {
        Self::basis_with_limit(q, index, max_qubits())
    }

    fn basis_with_limit(q: usize, index: usize, limit: usize) -> Result<Self> {
        check_capacity(q, limit)?;
        if index >> q != 0 {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {q} qubits"
            )));
        }
        let mut amps = zeroed_amplitudes(1 << q);
        amps[index] = ONE;
        Ok(Self { num_qubits: q, amps })
    }

    /// Uniform superposition over all `2^q` basis states.
    pub fn uniform(q: usize) -> Result<Self> {
        check_capacity(q, max_qubits())?;
        let a = C64::new(1.0 / ((1u64 << q) as f64).sqrt(), 0.0);
        let mut amps = zeroed_amplitudes(1 << q);
        amps.fill(a);
        Ok(Self { num_qubits: q, amps })
    }

    /// Wraps amplitudes, checking the length is a power of two and the norm
    /// is one within [`NORM_TOL`].
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let s = Self::from_raw(amps)?;
        let n = s.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm squared is {n}, expected 1")));
        }
        Ok(s)
    }

    /// Like [`StateVector::from_amplitudes`] without the norm check. Gate
    /// application is linear, so unnormalized vectors are valid kernel input.
    pub fn from_raw(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let q = len.trailing_zeros() as usize;
        check_capacity(q, max_qubits())?;
        Ok(Self { num_qubits: q, amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        amps.iter_mut().for_each(|z| *z /= n);
        Self::from_raw(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, j: usize) -> C64 {
        self.amps[j]
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::new(self.amps.clone())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    /// `|a_j|^2` for every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    pub(crate) fn check_qubit(&self, k: usize) -> Result<()> {
        if k >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: k,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Probability that measuring `qubits` yields `bits` (paired entrywise).
    pub fn probability_of(&self, qubits: &[usize], bits: &[u8]) -> Result<f64> {
        if qubits.len() != bits.len() {
            return Err(Error::Dimension(format!(
                "{} qubits but {} bits",
                qubits.len(),
                bits.len()
            )));
        }
        let mut mask = 0usize;
        let mut want = 0usize;
        for (&k, &b) in qubits.iter().zip(bits) {
            self.check_qubit(k)?;
            if mask & (1 << k) != 0 {
                return Err(Error::DuplicateQubit(k));
            }
            if b > 1 {
                return Err(Error::InvalidArgument(format!("bit value {b}")));
            }
            mask |= 1 << k;
            want |= (b as usize) << k;
        }
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(j, _)| j & mask == want)
            .map(|(_, z)| z.norm_sqr())
            .sum())
    }

    /// Distribution over the `width`-qubit register starting at qubit
    /// `lowest`. Entry `r` is the probability of reading `r` from it.
    pub fn register_distribution(&self, lowest: usize, width: usize) -> Result<Vec<f64>> {
        if width == 0 || lowest + width > self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: lowest + width.max(1) - 1,
                num_qubits: self.num_qubits,
            });
        }
        let mask = (1usize << width) - 1;
        let mut out = vec![0.0; 1 << width];
        for (j, z) in self.amps.iter().enumerate() {
            out[(j >> lowest) & mask] += z.norm_sqr();
        }
        Ok(out)
    }

    /// Applies a basis permutation that is its own inverse, in place.
    pub(crate) fn apply_involution(&mut self, map: impl Fn(usize) -> usize) {
        for j in 0..self.amps.len() {
            let k = map(j);
            debug_assert_eq!(map(k), j, "map is not an involution");
            if k > j {
                self.amps.swap(j, k);
            }
        }
    }

    /// Two-qubit product test. Returns the factors `(left, right)` with
    /// `left` on the more significant qubit when
    /// `|g00 g11 - g01 g10| < tol`, otherwise `None` (entangled).
    pub fn try_factor_two_qubit(
        &self,
        tol: f64,
    ) -> Result<Option<(QubitAmplitudes, QubitAmplitudes)>> {
        if self.num_qubits != 2 {
            return Err(Error::Dimension(format!(
                "two-qubit factorization on a {}-qubit state",
                self.num_qubits
            )));
        }
        let [g00, g01, g10, g11] = [self.amps[0], self.amps[1], self.amps[2], self.amps[3]];
        if (g00 * g11 - g01 * g10).norm() >= tol {
            return Ok(None);
        }
        let a0 = (g00.norm_sqr() + g01.norm_sqr()).sqrt();
        let a1 = (g10.norm_sqr() + g11.norm_sqr()).sqrt();
        let b0 = (g00.norm_sqr() + g10.norm_sqr()).sqrt();
        let b1 = (g01.norm_sqr() + g11.norm_sqr()).sqrt();
        let phase = |z: C64| if z.norm() > 0.0 { z.arg() } else { 0.0 };
        // Phases are pinned to the first nonzero amplitude of each factor;
        // with g00 = 0 the reference moves to the row or column that is
        // populated.
        let (alpha, beta) = if g00.norm() > tol {
            let t00 = phase(g00);
            (
                [C64::from_polar(a0, t00), C64::from_polar(a1, phase(g10))],
                [C64::new(b0, 0.0), C64::from_polar(b1, phase(g01) - t00)],
            )
        } else {
            // Pick the largest entry as the anchor and read phases from its
            // row and column.
            let entries = [(0usize, 0usize, g00), (0, 1, g01), (1, 0, g10), (1, 1, g11)];
            let &(r, c, anchor) = entries
                .iter()
                .max_by(|x, y| x.2.norm().total_cmp(&y.2.norm()))
                .expect("four entries");
            let get = |i: usize, k: usize| entries[i * 2 + k].2;
            let mods_a = [a0, a1];
            let mods_b = [b0, b1];
            let mut alpha = [ZERO; 2];
            let mut beta = [ZERO; 2];
            // beta[c] real, alpha[r] carries the anchor phase.
            beta[c] = C64::new(mods_b[c], 0.0);
            alpha[r] = C64::from_polar(mods_a[r], phase(anchor));
            let other_c = 1 - c;
            let other_r = 1 - r;
            beta[other_c] =
                C64::from_polar(mods_b[other_c], phase(get(r, other_c)) - phase(anchor));
            alpha[other_r] = C64::from_polar(mods_a[other_r], phase(get(other_r, c)));
            (alpha, beta)
        };
        Ok(Some((alpha, beta)))
    }

    /// Kronecker product with `self` on the more significant side.
    pub fn tensor(&self, rhs: &StateVector) -> Result<StateVector> {
        let q = self.num_qubits + rhs.num_qubits;
        check_capacity(q, max_qubits())?;
        let mut amps = Vec::with_capacity(1 << q);
        for &a in &self.amps {
            amps.extend(rhs.amps.iter().map(|&b| a * b));
        }
        Ok(StateVector { num_qubits: q, amps })
    }

    /// Sets every amplitude to zero except those selected by `keep`, then
    /// rescales by `scale`.
    pub(crate) fn project(&mut self, keep: impl Fn(usize) -> bool, scale: f64) {
        for (j, z) in self.amps.iter_mut().enumerate() {
            if keep(j) {
                *z *= scale;
            } else {
                *z = ZERO;
            }
        }
    }

    /// Copy of the state. Not `Clone` so that measurement APIs cannot be
    /// fed a state and then have it replayed implicitly.
    pub fn duplicate_for_analysis(&self) -> StateVector {
        StateVector {
            num_qubits: self.num_qubits,
            amps: self.amps.clone(),
        }
    }
}

/// Zeroed buffer of `len` amplitudes. Large buffers are fresh mappings that
/// have not been touched yet, so on Linux they can be marked for huge pages
/// before the first write; strided passes over many megabytes otherwise
/// spend much of their time on TLB misses.
fn zeroed_amplitudes(len: usize) -> Vec<C64> {
    let amps = vec![ZERO; len];
    #[cfg(target_os = "linux")]
    advise_huge_pages(&amps);
    amps
}

#[cfg(target_os = "linux")]
fn advise_huge_pages(amps: &[C64]) {
    const HUGE: usize = 2 << 20;
    let bytes = std::mem::size_of_val(amps);
    if bytes < 2 * HUGE {
        return;
    }
    let start = amps.as_ptr() as usize;
    let aligned = (start + HUGE - 1) & !(HUGE - 1);
    let end = (start + bytes) & !(HUGE - 1);
    if end > aligned {
        // advisory only; failure leaves ordinary pages
        unsafe {
            libc::madvise(aligned as *mut libc::c_void, end - aligned, libc::MADV_HUGEPAGE);
        }
    }
}

/// `a (x) b`, with `a` on the more significant side.
pub fn tensor_states(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    a.tensor(b)
}

pub fn zero_state(q: usize) -> Result<StateVector> {
    StateVector::zero(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell() -> StateVector {
        let s = 1.0 / 2f64.sqrt();
        StateVector::from_amplitudes(vec![c(s), ZERO, ZERO, c(s)]).unwrap()
    }

    #[test]
    fn zero_states() {
        assert_eq!(StateVector::zero(1).unwrap().amplitudes(), &[ONE, ZERO]);
        assert_eq!(
            StateVector::zero(2).unwrap().amplitudes(),
            &[ONE, ZERO, ZERO, ZERO]
        );
        assert_eq!(StateVector::zero(3).unwrap().amplitude(0), ONE);
    }

    #[test]
    fn capacity_errors() {
        assert!(matches!(StateVector::zero(0), Err(Error::Capacity { .. })));
        assert!(matches!(
            StateVector::zero_with_limit(5, 4),
            Err(Error::Capacity { requested: 5, limit: 4 })
        ));
        assert!(matches!(
            StateVector::zero(max_qubits() + 1),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn probability_examples() {
        assert!((bell().probability_of(&[1], &[0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((bell().probability_of(&[], &[]).unwrap() - 1.0).abs() < 1e-15);
        let u = StateVector::uniform(2).unwrap();
        assert!((u.probability_of(&[0], &[1]).unwrap() - 0.5).abs() < 1e-15);
        assert!(u.probability_of(&[2], &[1]).is_err());
        assert!(matches!(
            u.probability_of(&[0, 0], &[1, 1]),
            Err(Error::DuplicateQubit(0))
        ));
    }

    #[test]
    fn factor_product_state() {
        let u = StateVector::uniform(2).unwrap();
        let (a, b) = u.try_factor_two_qubit(1e-10).unwrap().unwrap();
        let s = 1.0 / 2f64.sqrt();
        for z in a.iter().chain(b.iter()) {
            assert!((z - c(s)).norm() < 1e-12);
        }
    }

    #[test]
    fn bell_state_is_entangled() {
        assert!(bell().try_factor_two_qubit(1e-10).unwrap().is_none());
    }

    #[test]
    fn factor_basis_state() {
        let s = StateVector::basis(2, 0b10).unwrap();
        let (a, b) = s.try_factor_two_qubit(1e-10).unwrap().unwrap();
        assert_eq!(a, [ZERO, ONE]);
        assert_eq!(b, [ONE, ZERO]);
    }

    #[test]
    fn factor_rejects_wrong_width() {
        assert!(StateVector::zero(3).unwrap().try_factor_two_qubit(1e-10).is_err());
    }

    #[test]
    fn tensor_examples() {
        let one = StateVector::basis(1, 1).unwrap();
        let zero = StateVector::zero(1).unwrap();
        assert_eq!(tensor_states(&one, &zero).unwrap(), StateVector::basis(2, 2).unwrap());
        let u1 = StateVector::uniform(1).unwrap();
        let u2 = tensor_states(&u1, &u1).unwrap();
        for z in u2.amplitudes() {
            assert!((z - c(0.5)).norm() < 1e-15);
        }
        let psi = StateVector::normalized(vec![c(1.0), C64::new(0.0, 2.0)]).unwrap();
        let t = tensor_states(&zero, &psi).unwrap();
        assert_eq!(&t.amplitudes()[2..], &[ZERO, ZERO]);
    }

    #[test]
    fn from_amplitudes_validates() {
        assert!(StateVector::from_amplitudes(vec![ONE, ONE]).is_err());
        assert!(StateVector::from_amplitudes(vec![ONE, ZERO, ZERO]).is_err());
    }

    #[test]
    fn register_distribution_sums_marginals() {
        let s = StateVector::uniform(3).unwrap();
        let d = s.register_distribution(1, 2).unwrap();
        assert_eq!(d.len(), 4);
        for p in d {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }
}
