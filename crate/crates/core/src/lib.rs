//! Finite nest theory: subsets, generated orders, topologies, sup
//! conditions, bounds, group compatibility and symbolic ray nests.

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod finite;
pub mod group;
pub mod harness;
pub mod io;
pub mod ray;
pub mod relation;
pub mod topology;

pub use error::{Error, Result};
pub use finite::{Nest, SetFamily, Subset, Universe};
pub use relation::{generated_order, Relation};
pub use topology::Topology;
