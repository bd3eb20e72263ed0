//! State-vector quantum circuit simulation.
//!
//! The register is a vector of `2^q` complex amplitudes ([`StateVector`]).
//! Gates ([`GateKind`]) are placed on qubits as [`GateApplication`]s and
//! collected into a [`Circuit`]; running a circuit updates the amplitudes in
//! place with a strided kernel that never builds a `2^q x 2^q` matrix.
//! Measurement lives in [`measure`] and consumes the state it reads.
//!
//! On top of the engine sit three algorithms:
//!
//! * [`simon`]: Simon's hidden-shift problem, with a GF(2) solver and a
//!   classical collision-search baseline.
//! * [`grover`]: Grover search with an exact iteration schedule.
//! * [`sat`]: Exactly-1 3-SAT compiled to a gate-level Grover oracle.
//!
//! # Conventions
//!
//! Qubits are numbered from 0, and qubit 0 is the least significant bit of a
//! basis index. Bit strings are printed most significant qubit first, so
//! index 5 of a 3-qubit register prints as `101`. A circuit runs its steps
//! left to right; its unitary is the product of the step unitaries taken
//! right to left.
//!
//! # No cloning
//!
//! [`StateVector`] does not implement `Clone`, and the measurement functions
//! take it by value. A state that has been measured is gone; repeated
//! sampling goes through [`measure::sample_counts`], which is equivalent to
//! re-running the circuit for every shot. Explicit copies for analysis are
//! available through [`StateVector::duplicate_for_analysis`].
//!
//! ```
//! use qreg::{Circuit, StateVector, SimRng};
//!
//! let mut bell = Circuit::new(2);
//! bell.h(1).cx(1, 0);
//! let state = qreg::circuit::run(&bell, StateVector::zero(2)?)?;
//! let counts = qreg::measure::sample_counts(&state, 1000, &mut SimRng::seed_from(1))?;
//! assert!(counts.keys().all(|k| k == "00" || k == "11"));
//! # Ok::<(), qreg::Error>(())
//! ```

pub mod basis;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod gates;
pub mod gf2;
pub mod grover;
pub mod linalg;
pub mod measure;
pub mod rng;
pub mod sat;
pub mod simon;
pub mod state;

pub use basis::{dot_q, xor_q, BasisLabel};
pub use circuit::route::CouplingGraph;
pub use circuit::{Circuit, GateApplication};
pub use error::{Error, Result};
pub use gates::GateKind;
pub use linalg::{ComplexMatrix, ComplexVector, C64};
pub use measure::{Histogram, MeasurementOutcome};
pub use rng::SimRng;
pub use state::StateVector;
