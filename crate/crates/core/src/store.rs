//! Loading Turtle files into one dataset.
//!
//! Turtle carries no graph name, so each file is placed either in the graph
//! named on the command line (`GRAPH=PATH`), in the graph named by a leading
//! `# graph: <iri>` comment, or in the default graph.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::rdf::{load_turtle, Dataset, GraphName, Iri, RdfError};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Turtle { path: PathBuf, source: RdfError },
    #[error("invalid graph in {arg:?}: {source}")]
    Graph { arg: String, source: RdfError },
}

/// A Turtle file and the graph it should be loaded into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoreFile {
    pub path: PathBuf,
    /// Overrides the file's `# graph:` comment.
    pub graph: Option<Iri>,
}

impl StoreFile {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        StoreFile {
            path: path.into(),
            graph: None,
        }
    }

    /// Parses `PATH`, `IRI=PATH` or `<IRI>=PATH`. The unbracketed form is
    /// recognised only when the text before the first `=` has a scheme.
    pub fn parse(arg: &str) -> Result<Self, StoreError> {
        let graph_err = |source| StoreError::Graph {
            arg: arg.to_owned(),
            source,
        };
        if let Some(rest) = arg.strip_prefix('<') {
            if let Some((iri, path)) = rest.split_once(">=") {
                return Ok(StoreFile {
                    path: path.into(),
                    graph: Some(Iri::new(iri).map_err(graph_err)?),
                });
            }
        }
        if let Some((head, path)) = arg.split_once('=') {
            if has_scheme(head) {
                return Ok(StoreFile {
                    path: path.into(),
                    graph: Some(Iri::new(head).map_err(graph_err)?),
                });
            }
        }
        Ok(StoreFile::new(arg))
    }
}

fn has_scheme(s: &str) -> bool {
    match s.split_once(':') {
        Some((scheme, _)) => {
            scheme.len() > 1
                && scheme.starts_with(|c: char| c.is_ascii_alphabetic())
                && scheme
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c))
        }
        None => false,
    }
}

/// The header line that records which graph a Turtle file belongs to.
pub fn graph_comment(graph: &Iri) -> String {
    format!("# graph: <{}>\n", graph.as_str())
}

/// The graph named by a `# graph: <iri>` comment among the leading comment
/// lines of `text`.
pub fn graph_hint(text: &str) -> Option<Iri> {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .find_map(|l| {
            let rest = l.strip_prefix('#')?.trim().strip_prefix("graph:")?.trim();
            Iri::new(rest.strip_prefix('<')?.strip_suffix('>')?).ok()
        })
}

/// Reads one file into `ds`.
pub fn load_file(ds: &mut Dataset, file: &StoreFile) -> Result<(), StoreError> {
    let text = read(&file.path)?;
    let graph = match file.graph.clone().or_else(|| graph_hint(&text)) {
        Some(iri) => GraphName::Named(iri),
        None => GraphName::Default,
    };
    load_turtle(ds, &text, None, &graph).map_err(|source| StoreError::Turtle {
        path: file.path.clone(),
        source,
    })?;
    Ok(())
}

/// Loads every file into a fresh dataset.
pub fn load_store(files: &[StoreFile]) -> Result<Dataset, StoreError> {
    let mut ds = Dataset::new();
    for f in files {
        load_file(&mut ds, f)?;
    }
    Ok(ds)
}

fn read(path: &Path) -> Result<String, StoreError> {
    std::fs::read_to_string(path).map_err(|source| StoreError::Io {
        path: path.to_owned(),
        source,
    })
}
