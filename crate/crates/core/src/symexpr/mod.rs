//! Exact symbolic scalar expressions over chart coordinates.

mod expr;
mod parse;
pub mod poly;
pub mod ratfunc;

pub use expr::{
    EvalError, Expr, ExprClass, ExprError, Func, Node, Value, ZeroPolicy, ZeroTestError,
    FUNCTION_NAMES,
};
pub use parse::{parse_expr, ParseError};
pub use poly::{Monomial, Poly};
pub use ratfunc::{RatFunc, ZeroDenominator};
