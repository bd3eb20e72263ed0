//! Named gates and their reference matrices.
//!
//! Matrices are stored exactly as conventionally printed; no global phase is
//! normalized away. For a gate acting on several qubits the first listed
//! qubit is the most significant index of its matrix, so `Cnot` on
//! `[control, target]` is the familiar
//!
//! ```text
//! 1 0 0 0
//! 0 1 0 0
//! 0 0 0 1
//! 0 0 1 0
//! ```
//!
//! `H`, `RPi4` and `Cnot` together form a universal set; any single-qubit
//! unitary can be approximated to arbitrary precision with a sequence of
//! them. This crate does not synthesize such sequences; arbitrary
//! single-qubit gates are available directly through [`GateKind::U`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    /// `[[(1+i)/2, (1-i)/2], [(1-i)/2, (1+i)/2]]`, squares to `X`.
    SqrtX,
    SqrtXDag,
    /// `diag(1, i)`, also known as `S`.
    SqrtZ,
    SqrtZDag,
    /// `diag(1, e^{i pi/4})`, also known as `T`.
    RPi4,
    RPi4Dag,
    /// `diag(1, e^{i lambda})`.
    Phase(f64),
    U {
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    Cnot,
    Cz,
    Swap,
    Ccnot,
    /// `Z` on the last qubit controlled by the preceding `n`.
    CnZ(usize),
    /// `X` on the last qubit controlled by the preceding `n`.
    Mcx(usize),
}

/// Gate names accepted in circuit files.
pub const GATE_NAMES: &[&str] = &[
    "i", "x", "y", "z", "h", "sx", "sxdg", "s", "sdg", "t", "tdg", "p", "u", "cx", "cz", "swap",
    "ccx", "cnz", "mcx",
];

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::I => "i",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::SqrtX => "sx",
            GateKind::SqrtXDag => "sxdg",
            GateKind::SqrtZ => "s",
            GateKind::SqrtZDag => "sdg",
            GateKind::RPi4 => "t",
            GateKind::RPi4Dag => "tdg",
            GateKind::Phase(_) => "p",
            GateKind::U { .. } => "u",
            GateKind::Cnot => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
            GateKind::Ccnot => "ccx",
            GateKind::CnZ(_) => "cnz",
            GateKind::Mcx(_) => "mcx",
        }
    }

    /// Number of qubits the gate's own matrix acts on.
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Swap => 2,
            GateKind::Ccnot => 3,
            GateKind::CnZ(n) | GateKind::Mcx(n) => n + 1,
            _ => 1,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::Phase(l) => vec![l],
            GateKind::U { theta, phi, lambda } => vec![theta, phi, lambda],
            _ => Vec::new(),
        }
    }

    /// Builds a kind from its file-format name, the number of listed target
    /// qubits, and its parameters.
    pub fn from_name(name: &str, num_targets: usize, params: &[f64]) -> Result<Self> {
        let arity_err = |expected: &str| Error::Arity {
            gate: name.to_string(),
            expected: expected.to_string(),
            found: num_targets,
        };
        let want_params = match name {
            "p" => 1,
            "u" => 3,
            _ => 0,
        };
        if params.len() != want_params {
            return Err(Error::InvalidArgument(format!(
                "gate `{name}` takes {want_params} parameter(s), got {}",
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite parameter for `{name}`"
            )));
        }
        let kind = match name {
            "i" => GateKind::I,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "h" => GateKind::H,
            "sx" => GateKind::SqrtX,
            "sxdg" => GateKind::SqrtXDag,
            "s" => GateKind::SqrtZ,
            "sdg" => GateKind::SqrtZDag,
            "t" => GateKind::RPi4,
            "tdg" => GateKind::RPi4Dag,
            "p" => GateKind::Phase(params[0]),
            "u" => GateKind::U {
                theta: params[0],
                phi: params[1],
                lambda: params[2],
            },
            "cx" => GateKind::Cnot,
            "cz" => GateKind::Cz,
            "swap" => GateKind::Swap,
            "ccx" => GateKind::Ccnot,
            "cnz" | "mcx" => {
                if num_targets < 2 {
                    return Err(arity_err("at least 2"));
                }
                if name == "cnz" {
                    GateKind::CnZ(num_targets - 1)
                } else {
                    GateKind::Mcx(num_targets - 1)
                }
            }
            other => {
                return Err(Error::InvalidArgument(format!("unknown gate `{other}`")));
            }
        };
        if kind.arity() != num_targets {
            return Err(arity_err(&kind.arity().to_string()));
        }
        Ok(kind)
    }

    pub fn adjoint(&self) -> GateKind {
        match *self {
            GateKind::SqrtX => GateKind::SqrtXDag,
            GateKind::SqrtXDag => GateKind::SqrtX,
            GateKind::SqrtZ => GateKind::SqrtZDag,
            GateKind::SqrtZDag => GateKind::SqrtZ,
            GateKind::RPi4 => GateKind::RPi4Dag,
            GateKind::RPi4Dag => GateKind::RPi4,
            GateKind::Phase(l) => GateKind::Phase(-l),
            GateKind::U { theta, phi, lambda } => GateKind::U {
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
            other => other,
        }
    }

    /// For every kind except `Swap`: the 2x2 matrix applied to the last
    /// listed qubit and the number of leading qubits acting as controls.
    pub fn controlled_base(&self) -> Option<([[C64; 2]; 2], usize)> {
        let x = single_matrix(GateKind::X);
        let z = single_matrix(GateKind::Z);
        match *self {
            GateKind::Swap => None,
            GateKind::Cnot => Some((x, 1)),
            GateKind::Cz => Some((z, 1)),
            GateKind::Ccnot => Some((x, 2)),
            GateKind::CnZ(n) => Some((z, n)),
            GateKind::Mcx(n) => Some((x, n)),
            single => Some((single_matrix(single), 0)),
        }
    }

    /// Full matrix of the gate on its `arity()` qubits.
    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            GateKind::Swap => {
                let mut m = ComplexMatrix::zeros(4, 4);
                m[(0, 0)] = ONE;
                m[(1, 2)] = ONE;
                m[(2, 1)] = ONE;
                m[(3, 3)] = ONE;
                m
            }
            kind => {
                let (base, n) = kind.controlled_base().expect("non-swap kind");
                controlled_unchecked(&base, n)
            }
        }
    }

    pub fn is_single_qubit(&self) -> bool {
        self.arity() == 1
    }

    /// `(theta, phi, lambda, gamma)` with `matrix = e^{i gamma} U(theta, phi, lambda)`.
    /// Only defined for single-qubit kinds.
    pub fn u_equivalent(&self) -> Option<(f64, f64, f64, f64)> {
        self.is_single_qubit()
            .then(|| u_params_of(single_matrix(*self)))
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        let p = self.params();
        if !p.is_empty() {
            let parts: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// 2x2 matrix of a single-qubit kind. Panics on multi-qubit kinds.
pub(crate) fn single_matrix(kind: GateKind) -> [[C64; 2]; 2] {
    let s = FRAC_1_SQRT_2;
    match kind {
        GateKind::I => [[ONE, ZERO], [ZERO, ONE]],
        GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
        GateKind::Y => [[ZERO, -I], [I, ZERO]],
        GateKind::Z => [[ONE, ZERO], [ZERO, -ONE]],
        GateKind::H => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        GateKind::SqrtX => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        GateKind::SqrtXDag => [[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]],
        GateKind::SqrtZ => [[ONE, ZERO], [ZERO, I]],
        GateKind::SqrtZDag => [[ONE, ZERO], [ZERO, -I]],
        GateKind::RPi4 => [[ONE, ZERO], [ZERO, C64::from_polar(1.0, FRAC_PI_4)]],
        GateKind::RPi4Dag => [[ONE, ZERO], [ZERO, C64::from_polar(1.0, -FRAC_PI_4)]],
        GateKind::Phase(l) => [[ONE, ZERO], [ZERO, C64::from_polar(1.0, l)]],
        GateKind::U { theta, phi, lambda } => u_matrix(theta, phi, lambda),
        other => panic!("`{}` is not a single-qubit gate", other.name()),
    }
}

fn u_matrix(theta: f64, phi: f64, lambda: f64) -> [[C64; 2]; 2] {
    let (sin, cos) = (theta / 2.0).sin_cos();
    [
        [
            C64::from_polar(cos, -(phi + lambda) / 2.0),
            -C64::from_polar(sin, -(phi - lambda) / 2.0),
        ],
        [
            C64::from_polar(sin, (phi - lambda) / 2.0),
            C64::from_polar(cos, (phi + lambda) / 2.0),
        ],
    ]
}

/// The general single-qubit unitary `U(theta, phi, lambda)`.
pub fn u_gate(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    ComplexMatrix::from_2x2(u_matrix(theta, phi, lambda))
}

/// `Z^(1/2^k)` = `diag(1, e^{i pi / 2^k})`. `k = 0` is `Z`, `k = 1` is `sqrt(Z)`.
pub fn z_root(k: u32) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[ONE, C64::from_polar(1.0, PI / f64::from(1u32 << k))])
}

/// `GateKind` for `Z^(1/2^k)`, using the named kinds where one exists.
pub fn z_root_kind(k: u32) -> GateKind {
    match k {
        0 => GateKind::Z,
        1 => GateKind::SqrtZ,
        2 => GateKind::RPi4,
        _ => GateKind::Phase(PI / f64::from(1u32 << k)),
    }
}

/// Phase gate `diag(1, e^{i lambda})` as the most specific named kind.
pub fn phase_kind(lambda: f64) -> GateKind {
    const EPS: f64 = 1e-15;
    let named = [
        (PI, GateKind::Z),
        (-PI, GateKind::Z),
        (FRAC_PI_2, GateKind::SqrtZ),
        (-FRAC_PI_2, GateKind::SqrtZDag),
        (FRAC_PI_4, GateKind::RPi4),
        (-FRAC_PI_4, GateKind::RPi4Dag),
    ];
    named
        .iter()
        .find(|(angle, _)| (lambda - angle).abs() < EPS)
        .map(|&(_, k)| k)
        .unwrap_or(GateKind::Phase(lambda))
}

fn controlled_unchecked(base: &[[C64; 2]; 2], num_controls: usize) -> ComplexMatrix {
    let dim = 2usize << num_controls;
    let mut m = ComplexMatrix::identity(dim);
    let off = dim - 2;
    for i in 0..2 {
        for j in 0..2 {
            m[(off + i, off + j)] = base[i][j];
        }
    }
    m
}

/// Matrix of `base` controlled by `num_controls` more significant qubits:
/// identity except for the final 2x2 block.
pub fn controlled(base: &ComplexMatrix, num_controls: usize) -> Result<ComplexMatrix> {
    let b = base
        .as_2x2()
        .ok_or_else(|| Error::Dimension("controlled() needs a 2x2 base".into()))?;
    if !base.is_unitary(1e-10)? {
        return Err(Error::NotUnitary);
    }
    Ok(controlled_unchecked(&b, num_controls))
}

/// Writes a 2x2 unitary as `e^{i gamma} U(theta, phi, lambda)`.
pub fn u_params_of(m: [[C64; 2]; 2]) -> (f64, f64, f64, f64) {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let gamma = det.arg() / 2.0;
    let unphase = C64::from_polar(1.0, -gamma);
    let a = m[0][0] * unphase;
    let b = m[1][0] * unphase;
    let theta = 2.0 * b.norm().atan2(a.norm());
    let arg = |z: C64| if z.norm() > 1e-14 { z.arg() } else { 0.0 };
    // a = e^{-i(phi+lambda)/2} cos, b = e^{i(phi-lambda)/2} sin
    let sum = -2.0 * arg(a);
    let diff = 2.0 * arg(b);
    let phi = (sum + diff) / 2.0;
    let lambda = (sum - diff) / 2.0;
    (theta, phi, lambda, gamma)
}
