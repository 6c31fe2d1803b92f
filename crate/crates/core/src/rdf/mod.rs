//! RDF data model, indexed quad store and Turtle I/O.

mod dataset;
mod iri;
pub(crate) mod lex;
mod prefix;
mod term;
mod turtle;
pub mod vocab;

use thiserror::Error;

pub use dataset::Dataset;
pub(crate) use dataset::{TermId, DEFAULT_GRAPH};
pub use iri::resolve_iri;
pub use lex::SyntaxError;
pub use prefix::PrefixMap;
pub use term::{parse_date_time, BlankNode, GraphName, Iri, Literal, Quad, Subject, Term};
pub use turtle::{load_turtle, parse_turtle, serialize_turtle, TurtleDocument};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RdfError {
    #[error("IRI <{0}> is relative, an absolute IRI is required")]
    RelativeIri(String),
    #[error("invalid character in IRI {iri:?} at offset {offset}")]
    InvalidIri { iri: String, offset: usize },
    #[error("invalid lexical form {lexical:?} for datatype <{datatype}>")]
    InvalidLiteral { lexical: String, datatype: String },
    #[error("literal {0} cannot be used as a subject")]
    LiteralSubject(String),
    #[error("undefined prefix '{0}:'")]
    UndefinedPrefix(String),
    #[error("{0}")]
    Syntax(SyntaxError),
    #[error("line {line}, column {col}: {source}")]
    Located {
        line: usize,
        col: usize,
        source: Box<RdfError>,
    },
}

impl RdfError {
    /// The underlying error with any position wrapper removed.
    pub fn root(&self) -> &RdfError {
        match self {
            RdfError::Located { source, .. } => source.root(),
            e => e,
        }
    }
}
