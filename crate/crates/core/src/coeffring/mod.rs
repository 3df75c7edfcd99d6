//! Exact coefficient arithmetic: Gaussian rationals, multivariate
//! polynomials, restricted rational functions and jet variables.

mod expr;
mod gaussian;
mod parse;
mod poly;
mod symbol;

pub use expr::{Base, Bindings, Denominator, Expression};
pub use gaussian::GaussianRational;
pub use parse::Context;
pub use poly::{Monomial, Polynomial};
pub use symbol::{Coord, CoordSet, Dim, Jet, JetRule, Symbol};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("denominator `{0}` is not a product of registered bases")]
    UnregisteredDenominator(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator vanishes at the evaluation point")]
    Pole,
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("syntax error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("inconsistent binding for `{name}`: {reason}")]
    InconsistentBinding { name: String, reason: String },
}
