//! Linear systems over GF(2) with rows packed into `u64`.

use crate::basis::dot_parity;
use crate::error::{Error, Result};

/// Echelon-form system of parity constraints `row . a = 0 (mod 2)`.
///
/// Each stored row has a distinct pivot (its highest set bit); rows are
/// kept sorted by decreasing pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2System {
    n: usize,
    rows: Vec<u64>,
    processed: usize,
}

fn pivot(row: u64) -> usize {
    63 - row.leading_zeros() as usize
}

impl Gf2System {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::InvalidArgument(format!("GF(2) width {n}")));
        }
        Ok(Self {
            n,
            rows: Vec::with_capacity(n),
            processed: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors offered to [`Gf2System::insert`] so far.
    pub fn processed(&self) -> usize {
        self.processed
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    fn reduce(&self, mut k: u64) -> u64 {
        for &row in &self.rows {
            if k >> pivot(row) & 1 == 1 {
                k ^= row;
            }
        }
        k
    }

    /// Adds `k` if it is independent of the stored rows. Returns whether
    /// the rank grew.
    pub fn insert(&mut self, k: u64) -> Result<bool> {
        if k >> self.n != 0 {
            return Err(Error::InvalidArgument(format!(
                "{k} does not fit in {} bits",
                self.n
            )));
        }
        self.processed += 1;
        let r = self.reduce(k);
        if r == 0 {
            return Ok(false);
        }
        let p = pivot(r);
        let at = self.rows.partition_point(|&row| pivot(row) > p);
        self.rows.insert(at, r);
        Ok(true)
    }

    /// The solution forced by the current rows: the unique nonzero `a` when
    /// the rank is `n - 1`, zero when the rank is `n`, otherwise `None`.
    pub fn nullspace_candidate(&self) -> Option<u64> {
        let rank = self.rank();
        if rank == self.n {
            return Some(0);
        }
        if rank + 1 != self.n {
            return None;
        }
        let pivots: u64 = self.rows.iter().map(|&r| 1u64 << pivot(r)).sum();
        let all = (1u64 << self.n) - 1;
        let free = all & !pivots;
        let mut a = free;
        // every non-pivot bit of a row lies below its pivot, so ascending
        // pivot order only reads bits that are already fixed
        for &row in self.rows.iter().rev() {
            let p = pivot(row);
            a |= u64::from(dot_parity(row & !(1u64 << p), a)) << p;
        }
        Some(a)
    }
}

/// Free-function form of [`Gf2System::insert`].
pub fn gf2_insert(sys: &mut Gf2System, k: u64) -> Result<bool> {
    sys.insert(k)
}

/// Free-function form of [`Gf2System::nullspace_candidate`].
pub fn gf2_nullspace_candidate(sys: &Gf2System) -> Option<u64> {
    sys.nullspace_candidate()
}
