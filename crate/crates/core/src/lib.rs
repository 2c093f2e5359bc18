//! Triangulations of marked surfaces, their exchange quivers, block decompositions,
//! and recovery of a surface from the quiver of a maximal triangulation.

pub mod blocks;
pub mod builder;
pub mod cli;
pub mod explore;
pub mod quiver;
pub mod reconstruct;
pub mod surface;
pub mod tagged;
pub mod triangulation;

pub use quiver::Quiver;
pub use surface::SurfaceSig;
pub use triangulation::{Side, Triangle, Triangulation};
