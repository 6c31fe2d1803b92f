//! Household energy data as linked data: CSV uplift to RDF, NOAA climate
//! ingest, an in-memory quad store with a SPARQL subset, and Pearson
//! correlation analysis between device energy and daily weather.

pub mod analysis;
pub mod climate;
pub mod heading;
pub mod names;
pub mod query;
pub mod rdf;
pub mod store;
pub mod uplift;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/data-model.md")]
    mod data_model {}
    #[doc = include_str!("../../../book/src/uplift.md")]
    mod uplift {}
    #[doc = include_str!("../../../book/src/climate.md")]
    mod climate {}
    #[doc = include_str!("../../../book/src/queries.md")]
    mod queries {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/endpoint.md")]
    mod endpoint {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
