//! Generalized Bernstein-Bezier operators and numerical checks of their
//! moment identities, derivative bounds and convergence rates.

pub mod basis;
pub mod cli;
pub mod beta_functional;
pub mod error;
pub mod experiments;
pub mod function;
pub mod operators;
pub mod plot;
pub mod quadrature;
pub mod report;
pub mod smoothness;
pub mod special;

pub use error::{Error, Result};
pub use function::FunctionSpec;
pub use operators::{Operator, OperatorConfig, Variant};
