//! Finite families of group elements (or cosets) satisfying a system under
//! fixed witnesses: verification, bounded search, and the shape predicates
//! used by the dense-union constructions.

mod family;
mod search;
mod structure;

pub use family::{
    check_forced_shape, forced_shape_system, normalize_family, theoretical_bound, verify_family,
    FiniteFamily, Space, StatementCheck, Verification, WitnessAssignment,
};
pub use search::{search_family, SearchOutcome};
pub use structure::{
    connected_sets, is_connected, is_prime, is_strongly_prime, lines, lines_along, translate_right,
};
