//! Dependency length measurement, online memory cost and minimum linear
//! arrangement tools for dependency trees.

pub mod case_study;
pub mod cli;
pub mod cost;
pub mod metrics;
pub mod optimizer;
pub mod predictions;
pub mod tree;
pub mod value;

pub use cost::{CostFunction, CostSpec};
pub use metrics::CostReport;
pub use optimizer::{MlaResult, PrecedenceConstraint};
pub use tree::{DepTree, Linearization, Token, Unit};
pub use value::{CostValue, Rational};
