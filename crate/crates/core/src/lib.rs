//! Numerical tools for domains in ℂⁿ whose boundary Levi form has constant
//! rank: Levi data, normalized boundary charts, plurisubharmonic barriers,
//! Bergman kernels and metrics, Kobayashi/Sibony bounds and δ-sweep
//! experiments.

pub mod barrier;
pub mod bergman;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod kobayashi;
pub mod linalg;
pub mod normalization;
pub mod sampling;
pub mod special;

pub use error::{Error, Result};
