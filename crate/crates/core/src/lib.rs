//! Optimal grounded Hamiltonians for mixed states with finite entropy.
//!
//! Given a spectrum `p_1 >= p_2 >= ...` of a state `rho`, an energy budget `E0`
//! and a target energy `E`, this crate constructs the grounded Hamiltonian `H`
//! with `Tr H rho <= E0` whose Gibbs state at energy `E` has the smallest
//! possible von Neumann entropy, together with that entropy in closed form.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised as:
//!
//! - [`spectra`]: probability spectra with exact tail mass `d_k` and tail entropy `s_k`.
//! - [`gibbs`]: partition functions, Gibbs states and the maximal entropy `F_H(E)`
//!   for arbitrary grounded level sequences, finite or infinite.
//! - [`optimal`]: breakpoints, case classification, the optimal levels, the
//!   minimal entropy and the piecewise entropy curve.
//! - [`bounds`]: lower-semicontinuity bounds with the optimal main term.
//! - [`oracle`]: brute-force probes of the convex program behind the closed forms.
//!
//! All entropies are in nats.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
mod error;
pub mod gibbs;
pub mod math;
pub mod optimal;
pub mod oracle;
mod roots;
pub mod spectra;

pub use error::{Error, Result};
pub use gibbs::{GibbsState, Hamiltonian, LevelGenerator, Tail};
pub use optimal::{Case, CurveRow, OptimalHamiltonian};
pub use spectra::{Rank, Spectrum, SpectrumModel, TailSums};
