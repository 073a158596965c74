//! Prefix expansions of finite inverse semigroups.
//!
//! Given a finite inverse semigroup `G` (a validated Cayley table), this crate
//! enumerates its prefix expansion `S(G)` in normal form, reduces words over
//! the generators `[s]`, checks partial homomorphisms and partial actions,
//! builds the canonical partial action of `G` on its filters, and works with
//! finite-dimensional matrix models of Fell bundles and twisted partial
//! actions over `G` and `S(G)`.

pub mod actions;
pub mod catalog;
pub mod elemset;
pub mod error;
pub mod expansion;
pub mod matrix;
mod par;
pub mod report;
pub mod rewriter;
pub mod semigroup;

pub use elemset::ElemSet;
pub use error::{Error, Result};
pub use expansion::{build_expansion, ExpElem, ExpansionTable};
pub use report::Report;
pub use semigroup::{Elem, InverseSemigroup};

/// Number of worker threads used by the data-parallel loops (1 when built
/// without the `parallel` feature).
pub fn worker_threads() -> usize {
    par::workers()
}
