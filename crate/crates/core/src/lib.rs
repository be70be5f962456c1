//! Hybrid A*, restart-based multi-resolution Hybrid A* and incremental
//! generalized Hybrid A* over implicitly defined motion-primitive trees,
//! together with planar, kinematic-car and kinodynamic-car domains and the
//! map formats and generators they run on.

pub mod domain;
pub mod domains;
pub mod search;
pub mod worlds;

pub use domain::{Coords, DimKind, Domain, DomainError, Edge, Query};
