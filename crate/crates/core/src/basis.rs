//! Basis-state labels and the bitwise helpers used throughout the crate.
//!
//! Qubits are numbered from 0. Qubit 0 is the least significant bit of a
//! basis index and is drawn as the bottom line of a circuit; the highest
//! qubit is drawn on top and printed first.

use std::fmt;

use crate::error::{Error, Result};

/// An integer `value < 2^width` viewed as a `width`-bit string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    value: u64,
    width: usize,
}

impl BasisLabel {
    pub fn new(value: u64, width: usize) -> Result<Self> {
        if width > 64 || (width < 64 && value >> width != 0) {
            return Err(Error::InvalidArgument(format!(
                "{value} does not fit in {width} bits"
            )));
        }
        Ok(Self { value, width })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn width(self) -> usize {
        self.width
    }

    /// Bit of qubit `k` (0 = least significant).
    pub fn bit(self, k: usize) -> u8 {
        ((self.value >> k) & 1) as u8
    }

    /// Parses a most-significant-first bit string.
    pub fn parse(s: &str) -> Result<Self> {
        let mut value = 0u64;
        for (col, ch) in s.chars().enumerate() {
            value = match ch {
                '0' => value << 1,
                '1' => (value << 1) | 1,
                _ => return Err(Error::parse(1, col + 1, format!("unexpected `{ch}` in bit string"))),
            };
        }
        Self::new(value, s.len())
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_bits(self.value, self.width))
    }
}

fn check_widths(j: BasisLabel, k: BasisLabel) -> Result<()> {
    if j.width != k.width {
        return Err(Error::Dimension(format!(
            "bit widths differ: {} vs {}",
            j.width, k.width
        )));
    }
    Ok(())
}

/// Bitwise XOR of two labels of equal width.
pub fn xor_q(j: BasisLabel, k: BasisLabel) -> Result<BasisLabel> {
    check_widths(j, k)?;
    Ok(BasisLabel {
        value: j.value ^ k.value,
        width: j.width,
    })
}

/// Bitwise dot product: number of positions where both labels have a 1.
/// Callers reduce it mod 2.
pub fn dot_q(j: BasisLabel, k: BasisLabel) -> Result<u32> {
    check_widths(j, k)?;
    Ok((j.value & k.value).count_ones())
}

/// Parity of `popcount(a & b)`.
#[inline]
pub fn dot_parity(a: u64, b: u64) -> u8 {
    ((a & b).count_ones() & 1) as u8
}

/// Renders `value` as `width` characters, most significant bit first.
pub fn render_bits(value: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|k| if (value >> k) & 1 == 1 { '1' } else { '0' })
        .collect()
}
