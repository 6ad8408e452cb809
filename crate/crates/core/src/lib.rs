//! Coincidence points and common fixed points of mapping pairs on metric
//! spaces equipped with binary relations.

pub mod certifier;
pub mod contraction;
pub mod instance;
pub mod mappings;
pub mod oracle;
pub mod region;
pub mod relspace;
pub mod scalar;
pub mod solver;
pub mod worked;
