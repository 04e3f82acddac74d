//! Workbench for covariant-gauge QED on a periodic lattice.
//!
//! Two engines share one set of conventions:
//!
//! * an exact symbolic normal-ordering engine ([`algebra`]) that verifies the
//!   operator identities behind the energy-descent construction, with no
//!   floating point anywhere in the proofs;
//! * a truncated Fock-space engine ([`fock`], [`qed`], [`construction`]) that
//!   realizes the same operators as sparse matrices over an occupation basis
//!   with an indefinite (ghost-sector) metric, checks the Heisenberg-equation
//!   conformance of the assembled Hamiltonian, and runs the energy-descent
//!   sweep E(f) = E(0) − f·a^d Σₓ D(x)².
//!
//! Conventions (also embedded in every report manifest):
//!
//! * natural units, periodic box of side L with N sites per axis, a = L/N;
//! * mode sums carry 1/√V per mode; ∫d³x ↔ a^d Σₓ;
//! * the momentum set K excludes k = 0; self-paired (Nyquist-type) momenta
//!   are kept in K but not quantized, and all derivative factors use the
//!   derivative-active components m(k) (Nyquist components zeroed), which
//!   makes summation by parts and ∇·(∇×B) = 0 exact on the lattice;
//! * currents enter operator identities through their active-mode projection
//!   (zero mode and self-paired modes removed).

pub mod algebra;
pub mod cli;
pub mod construction;
pub mod error;
pub mod fock;
pub mod modes;
pub mod qed;
pub mod report;

pub use error::CovqedError;
