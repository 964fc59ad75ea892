//! Exact computations with orders in number fields: lattices, ideals and
//! their class monoids, matrix-order structures, and explicit bounds.

pub mod bounds;
pub mod corpus;
pub mod error;
pub mod gamma_structures;
pub mod ideals;
pub mod intmat;
pub mod numberfield;
pub mod orders;
pub mod suite;

pub use error::{Error, ErrorKind, Result};
pub use intmat::{IntMatrix, Lattice};
pub use numberfield::{FieldElement, NumberField};
pub use orders::Order;
