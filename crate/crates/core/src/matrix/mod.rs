//! Finite-dimensional matrix models: concrete Fell bundles over `G`, their
//! expansion to saturated bundles over `S(G)`, regularity data and twisted
//! partial actions.

mod fell;
pub mod io;
pub mod models;
mod subspace;
mod twisted;

pub use fell::{
    check_concrete_fell_bundle, check_regularity, check_span_refinement, expand_bundle, saturation_witness,
    ConcreteFellBundle, RegularityData,
};
pub use subspace::{
    generated_star_algebra, ideal_unit, is_star_algebra, unit, CMatrix, MatrixSubspace, DEFAULT_TOL, MAX_AMBIENT,
};
pub use twisted::{
    bundle_from_twisted, check_twisted_partial_action, twisted_from_regular, twisted_global_from_partial,
    twisted_round_trip_deviation, TwistedPartialActionFD,
};

#[cfg(test)]
mod tests;
