//! Exact normal-ordering term-rewriting engine over the abstract mode
//! operators a_n(k), a_n†(k), a_Q(k), a_Q*(k) and opaque current symbols.
//!
//! All arithmetic is exact: coefficients live in the ring
//! ℚ(i)[π^{1/4}, L^{1/4}, p^{1/4} for small primes p], represented as sums of
//! Gaussian-rational multiples of radical monomials. Exact zero-testing of
//! that representation is sound for lattices with N ∈ {2, 4} sites per axis,
//! where the phase field ℚ(ζ_N) ⊆ ℚ(i) contains no real radicals; other N
//! are rejected.

pub mod coeff;
pub mod derivation;
pub mod fields;
pub mod poly;
pub mod table;

pub use coeff::Coefficient;
pub use derivation::{verify_derivation_chain, DerivationReport, IdentityResult};
pub use fields::SymbolicFields;
pub use poly::{OpPoly, OpSymbol};
pub use table::RewriteTable;
