//! The implication lattice between satisfiability properties, evidence
//! propagation over it, and a catalog of systems with known statuses.

mod classify;
mod fixtures;
mod property;

pub use classify::{classify, classify_with, Check, Classification, SearchBudget, Seed};
pub use fixtures::{classify_fixture, fixture_catalog, Fixture};
pub use property::{
    implication_edges, reachable, to_dot, Edge, EdgeGates, EdgeKind, Node, NodeStatus,
    PropertyReport, Provenance, Status, OPEN_LABEL,
};
