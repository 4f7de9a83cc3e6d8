//! Incidence geometry and distance problems over prime fields.

pub mod bench;
pub mod constructions;
pub mod counting;
pub mod energy;
pub mod erdos;
pub mod field;
pub mod geom;
pub mod quadrics;
