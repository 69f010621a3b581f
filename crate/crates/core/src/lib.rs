//! Coadjoint orbits and their foliations for the fourteen MD5-families `G5_4_1 .. G5_4_14`.
//!
//! Modules build on each other bottom-up: [`lie`] holds the generic
//! structure-constant machinery, [`catalog`] the families, [`orbit`] the
//! closed-form K-orbits, and [`foliation`] the leaf classification with its
//! equivalence maps. [`verify`] turns all of it into seeded property suites.

pub mod catalog;
pub mod cli;
pub mod foliation;
pub mod lie;
pub mod orbit;
pub mod report;
pub mod sampling;
pub mod verify;
