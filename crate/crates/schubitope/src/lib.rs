//! Exact combinatorics of Schubert polynomials, key polynomials, and dual
//! characters of flagged Weyl modules.
//!
//! The library computes these polynomials with exact integer arithmetic,
//! counts their supports (lattice points of their Newton polytopes), and
//! implements the witness constructions that realize the pattern-based
//! support lower bounds, together with exhaustive desk-scale verification
//! of the bounds and the associated coefficient tables.
//!
//! Module map:
//!
//! * [`perm`] — permutations, compositions, pattern counting, reduced
//!   words, the Macdonald specialization formula.
//! * [`diagram`] — box diagrams in `[n]×[n]`, Rothe/skyline constructions,
//!   Gale order, weight vectors, and the r₁/r₂/r₃ configuration counts.
//! * [`poly`] — exact sparse polynomials, divided differences, Schubert
//!   and key polynomials, full symmetric-group sweeps.
//! * [`weylchar`] — dual-character supports by direct Gale down-set
//!   enumeration, independent of polynomial expansion.
//! * [`witness`] — the three witness algorithms and the pattern-indexed
//!   subdiagram generators.
//! * [`bounds`] — bound evaluators, the c/d coefficient recursions,
//!   extremal sweeps, and conjecture-evidence reports.

pub mod bounds;
pub mod diagram;
mod error;
pub mod perm;
pub mod poly;
pub mod weylchar;
pub mod witness;

pub use error::Error;

/// Largest grid size / permutation size the library accepts.
///
/// Column masks are stored in `u16` words and weight entries in `u8`, so
/// this bound keeps every representation a machine word.
pub const MAX_N: usize = 12;
