//! Orthogonal-complement (perp) calculus on duals of modules over finite rings.
//!
//! Everything here is computed by exhaustion over explicitly enumerated
//! universes: rings are built from a small spec language as operation
//! tables, modules are presented as a free cover modulo a relation
//! submodule, duals are carried by coordinate vectors, and the lattice
//! laws connecting submodules of a module with submodules of its dual
//! are certified instance by instance. On top of that sits a decision
//! procedure for pseudo-Frobenius rings (self-injectivity via the Baer
//! criterion plus the Kasch condition, on both sides), a verifier for
//! the equivalence chain tying PF-ness to orthogonal equivalence of the
//! rank-2 free module, a counterexample search, an independent
//! brute-force oracle, and an exact truncated gallery of
//! infinite-dimensional counterexamples over a countable-basis vector
//! space.

pub mod duality;
pub mod error;
pub mod gallery;
pub mod limits;
pub mod module;
pub mod oracle;
pub mod pf;
pub mod ring;

pub use error::{Error, Result};
pub use limits::Limits;
