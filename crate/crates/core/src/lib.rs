//! Exact-arithmetic workbench for exterior differential systems at a point.
//!
//! The crate computes integral elements, polar spaces, Cartan characters and
//! the linearized codimension of the integral-element variety, and certifies
//! the dimension bookkeeping of the local isometric embedding problem
//! ([`embedding`]).

pub mod cartan;
pub mod connection;
pub mod curvature;
pub mod document;
pub mod embedding;
pub mod error;
pub mod exterior;
pub mod ideal;
pub mod lemma;
pub mod linalg;
pub mod par;
pub mod rng;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;
