//! Cops and robbers on finite graphs.
//!
//! Exact cop numbers for small graphs, the walk-weight robber and Hall-trap
//! cop strategies, bound evaluators and empirical checks for `G(n, p)`, and
//! retraction machinery for subdivided hypercubes.

pub mod acceptance;
pub mod bounds;
pub mod error;
pub mod experiment;
pub mod game;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod retracts;
pub mod rng;
pub mod solver;
pub mod strategies;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexSet};
