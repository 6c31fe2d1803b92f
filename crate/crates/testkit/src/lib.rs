//! Test support for the hecp workspace: a naive reference query evaluator,
//! random dataset and query generators, and fixture builders.

pub mod fixtures;
pub mod gen;
pub mod oracle;

pub use oracle::{naive_evaluate, naive_query, reference_pcc};
