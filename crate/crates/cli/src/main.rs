//! `hecp`: uplift household energy CSV and NOAA climate data to RDF, query
//! it, serve it over HTTP and correlate device energy with weather.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::{Overrides, PipelineConfig};

/// An internal invariant was violated; exits with status 2.
#[derive(Debug)]
pub struct Internal(pub String);

impl fmt::Display for Internal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "internal error: {}", self.0)
    }
}

impl std::error::Error for Internal {}

#[derive(Parser)]
#[command(
    name = "hecp",
    version,
    about = "Household energy and climate linked-data pipeline"
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Uplift an energy CSV to <out>/cossmic.ttl
    Uplift { csv: PathBuf },
    /// Convert NOAA observations (CSV or JSON) to <out>/climate.ttl
    Climate { input: PathBuf },
    /// Run a query over Turtle files ([GRAPH=]PATH) and print the results
    Query {
        #[arg(required = true)]
        store: Vec<String>,
        /// Query text
        #[arg(
            short = 'e',
            long = "query",
            conflicts_with = "query_file",
            required_unless_present = "query_file"
        )]
        query: Option<String>,
        /// File holding the query
        #[arg(short = 'f', long)]
        query_file: Option<PathBuf>,
    },
    /// Serve Turtle files ([GRAPH=]PATH) over HTTP
    Serve {
        #[arg(required = true)]
        store: Vec<String>,
    },
    /// Correlate every device with the climate datatype and write reports to <out>
    Analyze {
        #[arg(required = true)]
        store: Vec<String>,
    },
}

fn run(cli: Cli) -> Result<()> {
    let config = PipelineConfig::resolve(&cli.overrides)?;
    match cli.command {
        Command::Uplift { csv } => {
            let out = commands::uplift(&csv, &config)?;
            eprintln!("wrote {}", out.display());
        }
        Command::Climate { input } => {
            let out = commands::climate(&input, &config)?;
            eprintln!("wrote {}", out.display());
        }
        Command::Query {
            store,
            query,
            query_file,
        } => {
            let text = match (query, query_file) {
                (Some(q), _) => q,
                (None, Some(f)) => std::fs::read_to_string(&f)
                    .with_context(|| format!("reading {}", f.display()))?,
                (None, None) => unreachable!("clap requires one"),
            };
            commands::print(&commands::query(&store, &text, &config)?)?;
        }
        Command::Serve { store } => commands::serve(&store, &config)?,
        Command::Analyze { store } => {
            let out = commands::analyze(&store, &config)?;
            commands::print(&out.report.to_tsv())?;
            for f in &out.files {
                eprintln!("wrote {}", config.out.join(f).display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| c.is::<Internal>()) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
        Err(_) => ExitCode::from(2),
    }
}
