//! Domination, total domination and their locating variants on hypertrees,
//! sibling trees and related binary-tree graphs.

pub mod audit;
pub mod checkers;
pub mod constructions;
pub mod export;
pub mod formulas;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod solver;

pub use checkers::{check, is_valid, Certificate, Variant, Violation};
pub use generators::{generate, Family, FamilySpec};
pub use graph::{Graph, Label, VertexSet};
pub use solver::{SolveResult, Solver, SolverConfig};
