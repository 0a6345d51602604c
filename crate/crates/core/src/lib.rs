//! Maximally entangled states of two qudits in odd prime dimension d.
//!
//! The crate builds, and checks to floating-point exactness, the objects
//! that tie two-qudit entanglement to single-qudit mutually unbiased bases:
//!
//! * [`mes`]: the d² element basis of maximally entangled states and the
//!   basis-independent state `|R⟩ = d^{-1/2} Σ_m |m⟩|m⟩`.
//! * [`collective`]: centre-of-mass and relative coordinates, in which every
//!   maximally entangled state is a product state, and discrete hopping on
//!   the resulting d × d lattice.
//! * [`geometry`]: straight lines in that lattice. Summing the lattice
//!   states along a line yields a product of two single-particle MUB states.
//! * [`schwinger`]: clock and shift operators and the d+1 MUB.
//! * [`verify`]: named verification suites producing report rows.

pub mod collective;
pub mod error;
pub mod geometry;
pub mod mes;
pub mod modring;
pub mod random;
pub mod schwinger;
pub mod state;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use modring::{is_prime, mod_inverse, ModInt, Prime};
pub use schwinger::{BasisLabel, MubState, RootsOfUnity};
pub use state::{DensityOp, Ket, Particle, PhaseMatch, UnitaryOp, C64, DEFAULT_TOL};
