//! Exact computations on linear sections G(1,N) ∩ H^l of the Grassmannian of
//! lines: Pfaffians, normal forms of pencils and nets of antisymmetric
//! matrices, center curves and automorphism group dimensions.

pub mod antisym;
pub mod autgroup;
pub mod cli;
pub mod elimination;
pub mod error;
pub mod grassmann;
pub mod matrix;
pub mod modrank;
pub mod nets;
pub mod normal_forms;
pub mod pencils;
pub mod polar;
pub mod poly;
pub mod random;
pub mod rational;
pub mod univariate;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use rational::Rational;
