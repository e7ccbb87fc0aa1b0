//! Rainbow domination regularity of graphs.

pub mod graph;
pub mod families;
pub mod graph6;
pub mod rainbow;
pub mod symmetry;
pub mod constructions;
pub mod census;
pub mod verify;
