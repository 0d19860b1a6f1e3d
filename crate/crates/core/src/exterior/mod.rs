//! Graded exterior algebra over a fixed coframe, with constant rational
//! coefficients and a pluggable structure differential.

mod differential;
mod form;
mod matrix;

pub use differential::{exterior_derivative, Auxiliary, StructureDifferential};
pub use form::{subsets, Coframe, Form, MultiIndex, Vector};
pub use matrix::{matrix_d, matrix_wedge, FormMatrix};

#[cfg(test)]
mod tests;
