//! Test-only oracles: matrices and states built directly from their
//! definitions, independent of the library's constructors.

#![allow(dead_code)]

use qreg::linalg::{C64, ComplexMatrix, ComplexVector};
use qreg::{SimRng, StateVector};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_c64(rng: &mut SimRng) -> C64 {
    c(rng.uniform() * 2.0 - 1.0, rng.uniform() * 2.0 - 1.0)
}

pub fn random_matrix(dim: usize, rng: &mut SimRng) -> ComplexMatrix {
    let data = (0..dim * dim).map(|_| random_c64(rng)).collect();
    ComplexMatrix::from_rows(dim, dim, data).unwrap()
}

pub fn random_vector(dim: usize, rng: &mut SimRng) -> ComplexVector {
    ComplexVector::new((0..dim).map(|_| random_c64(rng)).collect())
}

pub fn random_state(q: usize, rng: &mut SimRng) -> StateVector {
    StateVector::normalized((0..1usize << q).map(|_| random_c64(rng)).collect()).unwrap()
}

pub fn add(u: &ComplexVector, v: &ComplexVector) -> ComplexVector {
    ComplexVector::new(u.as_slice().iter().zip(v.as_slice()).map(|(a, b)| a + b).collect())
}

pub fn scale(a: C64, u: &ComplexVector) -> ComplexVector {
    ComplexVector::new(u.as_slice().iter().map(|x| a * x).collect())
}

/// Matrix of the basis permutation `j -> map(j)`.
pub fn permutation_matrix(dim: usize, map: impl Fn(usize) -> usize) -> ComplexMatrix {
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for j in 0..dim {
        data[map(j) * dim + j] = c(1.0, 0.0);
    }
    ComplexMatrix::from_rows(dim, dim, data).unwrap()
}

/// Diagonal matrix with `sign(j)` on the diagonal.
pub fn diagonal_matrix(dim: usize, entry: impl Fn(usize) -> C64) -> ComplexMatrix {
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for j in 0..dim {
        data[j * dim + j] = entry(j);
    }
    ComplexMatrix::from_rows(dim, dim, data).unwrap()
}

/// Inversion about the average: `2/N` everywhere, minus 1 on the diagonal.
pub fn averaging_matrix(n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    let v = 2.0 / dim as f64;
    let data = (0..dim * dim)
        .map(|i| if i / dim == i % dim { c(v - 1.0, 0.0) } else { c(v, 0.0) })
        .collect();
    ComplexMatrix::from_rows(dim, dim, data).unwrap()
}

/// Entry `(j, k)` of `H^n` written out as `(-1)^{popcount(j & k)} / sqrt(2^n)`.
pub fn hadamard_power(n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    let norm = 1.0 / (dim as f64).sqrt();
    let data = (0..dim * dim)
        .map(|i| {
            let (j, k) = (i / dim, i % dim);
            let sign = if (j & k).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            c(sign * norm, 0.0)
        })
        .collect();
    ComplexMatrix::from_rows(dim, dim, data).unwrap()
}
