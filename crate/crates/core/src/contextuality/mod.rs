//! The extended KCBS witness: graph, strategies, correlation tables, witness
//! evaluation, the classical bound, and ingestion of measured tables.

pub mod classical;
pub mod graph;
pub mod ingest;
pub mod strategy;
pub mod table;
pub mod witness;

pub use classical::{
    classical_bound_bruteforce, classical_optimum, classical_value, ClassicalOptimum,
};
pub use graph::{ExtendedGraph, Vertex, EDGES, MEASURED_CONTEXTS};
pub use ingest::{ingest_tables, parse_context_csv, write_context_csv, ContextData, DuplicateRule};
pub use strategy::{
    born_correlations, born_correlations_with, ideal_strategy, ideal_vectors, kcbs_vectors,
    Strategy,
};
pub use table::CorrelationTable;
pub use witness::{
    evaluate_witness, witness_from_operators, StandardErrors, TermKind, WitnessReport, WitnessTerm,
    CLASSICAL_BOUND,
};
