//! Finite-stage verification of contraction, covering and norm lemmas for
//! groups with conjugation-invariant norms.
//!
//! Everything here is a concrete, checkable ingredient: permutations with
//! their support, transposition and 3-cycle norms; cutting and splitting
//! maps; conjugacy-class covering and commutator witnesses; exact word-norm
//! tables; rank norms on matrix groups with their projections; free
//! products and direct sums; and finite prefixes of scaled sequences.

pub mod audit;
pub mod coneprobe;
pub mod contractions;
pub mod covering;
pub mod intnorm;
pub mod matnorm;
pub mod permgroup;
pub mod products;
pub mod quasimorphism;
pub mod wordnorm;
