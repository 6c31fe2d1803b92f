//! Deterministic IRIs for every uplifted resource.

use chrono::{DateTime, NaiveDate, Utc};

use crate::heading::{DeviceHeading, Region, Site};
use crate::rdf::{vocab, GraphName, Iri};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minter {
    base: Iri,
    cossmic_graph: Iri,
}

impl Default for Minter {
    fn default() -> Self {
        Minter::new(Iri::new_unchecked(vocab::PROJECT_BASE))
    }
}

impl Minter {
    /// `base` should end with `/`; every IRI is `base` followed by a path.
    pub fn new(base: Iri) -> Self {
        let cossmic_graph = base.join("graph/cossmic");
        Minter {
            base,
            cossmic_graph,
        }
    }

    pub fn with_cossmic_graph(mut self, graph: Iri) -> Self {
        self.cossmic_graph = graph;
        self
    }

    pub fn base(&self) -> &Iri {
        &self.base
    }

    /// Named graph holding topology, evaluations and the weather link.
    pub fn cossmic_graph(&self) -> GraphName {
        GraphName::Named(self.cossmic_graph.clone())
    }

    pub fn cossmic_graph_iri(&self) -> &Iri {
        &self.cossmic_graph
    }

    /// Namespace of CoSSMic resources, `{base}resource/cossmic/`.
    pub fn cossmic_namespace(&self) -> Iri {
        self.base.join("resource/cossmic/")
    }

    pub fn device(&self, heading: &DeviceHeading) -> Iri {
        self.cossmic(heading.raw())
    }

    pub fn site(&self, site: &Site) -> Iri {
        self.cossmic(&site.to_string())
    }

    pub fn network(&self, region: &Region) -> Iri {
        self.cossmic(&format!("{region}_COSSMIC"))
    }

    pub fn grid(&self, region: &Region) -> Iri {
        self.cossmic(&format!("{region}_grid"))
    }

    pub fn evaluation(&self, device: &Iri, at: DateTime<Utc>) -> Iri {
        device.join(&format!("/evaluation/{}", at.format("%Y%m%dT%H%M%SZ")))
    }

    pub fn evaluation_value(&self, evaluation: &Iri) -> Iri {
        evaluation.join("/value")
    }

    pub fn station(&self, station_id: &str) -> Iri {
        self.base.join(&format!("resource/station/{station_id}"))
    }

    pub fn datatype(&self, code: &str) -> Iri {
        self.base.join(&format!("resource/datatype/{code}"))
    }

    pub fn observation(&self, station_id: &str, date: NaiveDate, code: &str) -> Iri {
        self.base.join(&format!(
            "resource/observation/{station_id}/{}/{code}",
            date.format("%Y-%m-%d")
        ))
    }

    pub fn observation_result(&self, observation: &Iri) -> Iri {
        observation.join("/result")
    }

    /// A climate-analysis vocabulary term, e.g. `ca/property/sourceStation`.
    pub fn ca(&self, path: &str) -> Iri {
        self.base.join(path)
    }

    fn cossmic(&self, local: &str) -> Iri {
        self.base.join(&format!("resource/cossmic/{local}"))
    }
}
