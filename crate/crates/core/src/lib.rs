//! Cops and robbers on Cayley-type graphs of finite groups.
//!
//! The crate builds Cayley, Cayley sum, twisted Cayley and twisted Cayley
//! sum graphs, runs the labelled-cop pursuit strategy on them, and checks
//! the resulting cop-number bounds against an exact retrograde solver.

pub mod corpus;
pub mod cover;
pub mod game;
pub mod graph;
pub mod group;
pub mod instance;
pub mod oracle;
pub mod strategy;
pub mod suite;

pub use graph::{AlgebraicGraph, ExportFormat, Family, Graph, GraphError};
pub use group::{Automorphism, Elem, GenSet, Group, GroupError, GroupSpec, TailPower};
