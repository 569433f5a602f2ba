//! Knot Floer homology from doubly pointed genus-one Heegaard diagrams.

pub mod algebra;
pub mod cover;
pub mod diagram;
pub mod fibered;
pub mod floer;
pub mod invariants;
pub mod registry;
