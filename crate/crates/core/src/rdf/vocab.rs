//! Namespace table and the vocabulary terms the uplift emits.
//!
//! Every constant is the verbatim expansion of `prefix:local`.

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const SEAS_NS: &str = "https://w3id.org/seas/";
pub const SOSA_NS: &str = "http://www.w3.org/ns/sosa/";
pub const PROV_NS: &str = "http://www.w3.org/ns/prov#";
pub const QUDT_NS: &str = "http://qudt.org/1.1/schema/qudt#";

/// Default project base. Resources, graphs and the climate-analysis (CA)
/// vocabulary are minted below it.
pub const PROJECT_BASE: &str = "http://jresearch.ucd.ie/climate-kg/";

/// Graph name used by engines such as Jena for the store's default graph.
pub const ARQ_DEFAULT_GRAPH: &str = "urn:x-arq:DefaultGraph";

pub mod rdf {
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
}

pub mod xsd {
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
}

pub mod seas {
    pub const ELECTRIC_POWER_DISTRIBUTION_NETWORK: &str =
        "https://w3id.org/seas/ElectricPowerDistributionNetwork";
    pub const ELECTRIC_POWER_TRANSMISSION_SYSTEM: &str =
        "https://w3id.org/seas/ElectricPowerTransmissionSystem";
    pub const ELECTRIC_POWER_SYSTEM: &str = "https://w3id.org/seas/ElectricPowerSystem";
    pub const ELECTRIC_POWER_CONSUMER: &str = "https://w3id.org/seas/ElectricPowerConsumer";
    pub const ELECTRIC_POWER_EVALUATION: &str = "https://w3id.org/seas/ElectricPowerEvaluation";
    pub const INDUSTRIAL_BUILDING: &str = "https://w3id.org/seas/IndustrialBuilding";
    pub const IS_POWERED_BY: &str = "https://w3id.org/seas/isPoweredBy";
    pub const POWERS: &str = "https://w3id.org/seas/powers";
    pub const PRODUCED_ELECTRIC_POWER: &str = "https://w3id.org/seas/producedElectricPower";
    pub const CONSUMED_ELECTRIC_POWER: &str = "https://w3id.org/seas/consumedElectricPower";
    pub const SUB_SYSTEM_OF: &str = "https://w3id.org/seas/subSystemOf";
    pub const EVALUATION: &str = "https://w3id.org/seas/evaluation";
    pub const EVALUATED_VALUE: &str = "https://w3id.org/seas/evaluatedValue";
}

pub mod sosa {
    pub const RESULT_TIME: &str = "http://www.w3.org/ns/sosa/resultTime";
    pub const HAS_RESULT: &str = "http://www.w3.org/ns/sosa/hasResult";
}

pub mod prov {
    pub const GENERATED_AT_TIME: &str = "http://www.w3.org/ns/prov#generatedAtTime";
}

pub mod qudt {
    /// Spelling used on energy evaluation values.
    pub const NUMERICAL_VALUE: &str = "http://qudt.org/1.1/schema/qudt#numericalValue";
    /// Spelling used on climate observation results.
    pub const NUMERIC_VALUE: &str = "http://qudt.org/1.1/schema/qudt#numericValue";
}

/// Base-relative paths of the climate-analysis vocabulary.
pub mod ca {
    pub const OBSERVATION_CLASS: &str = "ca/class/Observation";
    pub const SOURCE_STATION: &str = "ca/property/sourceStation";
    pub const WITH_DATA_TYPE: &str = "ca/property/withDataType";
    pub const RETRIEVE_WEATHER_FROM: &str = "ca/property/retrieveWeatherFrom";
}
