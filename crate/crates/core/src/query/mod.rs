//! A SPARQL SELECT subset: basic graph patterns, `GRAPH`, sequence paths,
//! `FILTER` with `=`, `&&` and the date accessors, and `LIMIT`.
//!
//! Results come back in a deterministic order (rows sorted by their projected
//! terms), so the same query over the same data always yields the same bytes.

mod ast;
mod eval;
mod expr;
mod parser;
mod results;

use thiserror::Error;

use crate::rdf::SyntaxError;

pub use ast::{
    DatasetClause, Expression, GraphPattern, PathExpr, SelectQuery, TermPattern, TriplePattern,
    Variable, VerbPattern,
};
pub use eval::{evaluate, evaluate_with_deadline, execute, execute_with_deadline};
pub use expr::{effective_boolean_value, eval_equals, ExprError};
pub use parser::parse_query;
pub use results::SolutionSequence;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("syntax error at {0}")]
    Syntax(SyntaxError),
    #[error("undefined prefix '{prefix}:' at line {line}, column {col}")]
    UndefinedPrefix {
        prefix: String,
        line: usize,
        col: usize,
    },
    #[error("unsupported feature {feature} at line {line}, column {col}")]
    Unsupported {
        feature: String,
        line: usize,
        col: usize,
    },
    #[error("projected variable {0} does not appear in the pattern")]
    UnboundProjection(Variable),
    #[error("query exceeded its time limit")]
    Timeout,
}

impl QueryError {
    /// Whether the query text itself is at fault, as opposed to evaluation.
    pub fn is_client_error(&self) -> bool {
        !matches!(self, QueryError::Timeout)
    }
}
