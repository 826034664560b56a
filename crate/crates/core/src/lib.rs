//! Solver, verifier and bounds for the connected-pseudoachromatic index
//! `psi_c(n)` of complete graphs: the largest number of colors in an edge
//! coloring of `K_n` in which every color class is connected and every two
//! classes share a vertex.
//!
//! * [`graph`]: `K_n` and its canonical edge order.
//! * [`coloring`]: colorings, the verifier and the JSON file format.
//! * [`fitness`]: the scalar fitness the GA maximizes.
//! * [`rankga`]: the rank genetic algorithm, generic over [`rankga::Problem`].
//! * [`problem`]: the coloring problem plugged into the engine.
//! * [`bounds`]: analytic bounds and the reference tables.
//! * [`oracle`]: exhaustive computation of `psi_c(n)` for small `n`.

pub mod bounds;
pub mod coloring;
pub mod error;
pub mod fitness;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod problem;
pub mod rankga;

pub use error::{Error, Result};
