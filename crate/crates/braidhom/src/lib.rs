//! Integral homology of unordered configuration spaces of finite graphs.
//!
//! The main pipeline builds, per degree and weight, an exact integer chain
//! complex slice out of a graph's local vertex states and edge multidegrees,
//! and reads homology off its Smith normal forms.  A brute-force cubical
//! model of the configuration space, built from a sufficiently subdivided
//! copy of the graph, serves as an independent cross-check, and a library of
//! explicit cycles and relation chains exercises the structural facts the
//! computations rely on.

pub mod classes;
pub mod formulas;
pub mod graph;
pub mod homology;
pub mod linalg;
pub mod morphism;
pub mod oracle;
pub mod report;
pub mod swk;

pub use graph::{standard_graph, Graph, GraphError, StandardGraph};
pub use linalg::{HomologyGroup, Int};
