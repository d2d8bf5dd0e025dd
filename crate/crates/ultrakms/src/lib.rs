//! KMS and ground states of ultragraph C*-algebras.
//!
//! The library models an ultragraph (finitely presented or the built-in
//! infinite family), the lattice of generalized vertices, the cylinder-set
//! semi-ring of the associated shift space, the induced pre-measure, state
//! functions with their KMS/ground verification conditions, a transfer-matrix
//! solver, and a small symbolic algebra of spanning elements.

pub mod graph;
pub mod measure;
pub mod parse;
pub mod report;
pub mod scalar;
pub mod sec6;
pub mod shift;
pub mod solver;
pub mod star;
pub mod state;
