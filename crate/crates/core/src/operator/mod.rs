//! Operator expressions and their matrices on graded pieces.

mod expr;
mod instantiate;
mod schema;

pub use expr::*;
pub use instantiate::{ConcreteOperator, GradedBasis, Instantiator};
pub use schema::{IndexedTermSchema, VarSign};

#[cfg(test)]
mod tests;
