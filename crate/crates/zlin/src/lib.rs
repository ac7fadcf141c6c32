//! Exact linear algebra over the integers.
//!
//! Smith normal form with verified unimodular transforms, finitely generated
//! abelian groups in invariant-factor form, and bounded chain complexes with
//! homology, cones, tensor products and quasi-isomorphism tests.

mod complex;
mod group;
mod matrix;
mod snf;

pub use complex::{homology_of_pair, kernel_basis, ChainComplex, ChainMap, ComplexWire};
pub use group::FgAbGroup;
pub use matrix::IntMatrix;
pub use num_bigint::BigInt;
pub use snf::{invariant_factors, is_saturated_basis, rank, smith_normal_form, solve, Smith};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZlinError {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("degree {degree} is outside the reliable window [{lo}, {hi}]")]
    Window { degree: i64, lo: i64, hi: i64 },
    #[error("Smith normal form check failed: {0}")]
    SmithCheck(String),
}
