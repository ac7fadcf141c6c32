//! Exact computations with cyclic-type categories, cyclic homology,
//! filtered Dieudonné modules and their syntomic and cyclotomic invariants.

pub mod catcore;
pub mod cychom;
pub mod cyclo;
pub mod fdm;
pub mod fixtures;
pub mod report;
pub mod suites;
pub mod error;

pub use error::CycloError;
