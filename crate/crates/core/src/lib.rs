//! Phase-estimation based arbitrary controlled rotations.
//!
//! Modules, bottom-up:
//!
//! * [`state`]: dense statevector simulation. Qubit 0 is the least
//!   significant bit of a basis index.
//! * [`circuit`], [`qasm`]: gate-list IR, census, inversion, OpenQASM 2.0.
//! * [`synth`]: inverse QFT, diagonal and controlled-diagonal synthesis,
//!   multi-controlled `Rz`, cube-merged products.
//! * [`crot`]: the controlled-rotation module and its angle oracles.
//! * [`hhl`]: the linear-system pipeline built on [`crot`].
//! * [`fixedpoint`]: truncation fidelity model and parameter sweeps.
//! * [`resources`]: closed-form gate counts.
//!
//! All angles and phases are stored in *turns* (fractions of 2π). `Rz(t)` is
//! `diag(1, e^{2πi t})` and `Ry(t)` is the plain rotation
//! `[[cos 2πt, -sin 2πt], [sin 2πt, cos 2πt]]` with no half angle.

pub mod circuit;
pub mod crot;
pub mod error;
pub mod fixedpoint;
pub mod hhl;
pub mod qasm;
pub mod resources;
pub mod state;
pub mod synth;
pub mod units;

pub use circuit::{Circuit, Gate, GateCensus, GateClass, GateKind};
pub use error::{Error, Result};
pub use state::{QubitSpan, RegisterLabel, StateVector};

pub use num_complex::Complex64;
