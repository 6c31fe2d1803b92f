//! NOAA daily observations to the climate (default) graph, plus the link from
//! an energy network to the station it takes its weather from.

use std::collections::BTreeSet;

use chrono::{NaiveDate, NaiveDateTime};
use serde::Deserialize;
use thiserror::Error;

use crate::names::Minter;
use crate::rdf::vocab::{ca, qudt, rdf, sosa};
use crate::rdf::{GraphName, Iri, Literal, Quad};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClimateError {
    #[error("climate CSV line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("climate JSON: {0}")]
    Json(String),
    #[error("duplicate observation {station} {date} {datatype}")]
    Duplicate {
        station: String,
        date: NaiveDate,
        datatype: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClimateObservation {
    pub station_id: String,
    pub date: NaiveDate,
    /// GHCND code such as `TMAX` or `PRCP`; the vocabulary is open.
    pub datatype: String,
    /// In the units of the source.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StationRecord {
    pub station_id: String,
    pub name: Option<String>,
    pub latitude: Option<f64>,
    pub longitude: Option<f64>,
}

fn is_id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, ':' | '_' | '-' | '.')
}

fn parse_day(s: &str) -> Option<NaiveDate> {
    let s = s.trim();
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .or_else(|| {
            NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S")
                .ok()
                .filter(|dt| dt.time() == chrono::NaiveTime::MIN)
                .map(|dt| dt.date())
        })
        .or_else(|| {
            crate::rdf::parse_date_time(s)
                .filter(|dt| dt.time() == chrono::NaiveTime::MIN)
                .map(|dt| dt.date_naive())
        })
}

fn observation(
    station: &str,
    date: &str,
    datatype: &str,
    value: f64,
) -> Result<ClimateObservation, String> {
    if station.is_empty() || !station.chars().all(is_id_char) {
        return Err(format!("invalid station id {station:?}"));
    }
    if datatype.is_empty() || !datatype.chars().all(is_id_char) {
        return Err(format!("invalid datatype {datatype:?}"));
    }
    let date = parse_day(date).ok_or_else(|| format!("invalid date {date:?}"))?;
    if !value.is_finite() {
        return Err(format!("invalid value {value}"));
    }
    Ok(ClimateObservation {
        station_id: station.to_owned(),
        date,
        datatype: datatype.to_owned(),
        value,
    })
}

fn check_duplicates(obs: &[ClimateObservation]) -> Result<(), ClimateError> {
    let mut seen = BTreeSet::new();
    for o in obs {
        if !seen.insert((&o.station_id, o.date, &o.datatype)) {
            return Err(ClimateError::Duplicate {
                station: o.station_id.clone(),
                date: o.date,
                datatype: o.datatype.clone(),
            });
        }
    }
    Ok(())
}

/// Reads `station,date,datatype,value` rows.
pub fn parse_noaa_csv(text: &str) -> Result<Vec<ClimateObservation>, ClimateError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let err = |line: u64, message: String| ClimateError::Csv { line, message };
    let headers = rdr.headers().map_err(|e| err(1, e.to_string()))?;
    if !text.trim().is_empty()
        && headers.iter().collect::<Vec<_>>() != ["station", "date", "datatype", "value"]
    {
        return Err(err(1, "header must be station,date,datatype,value".into()));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        let value: f64 = row[3]
            .parse()
            .map_err(|_| err(line, format!("invalid value {:?}", &row[3])))?;
        out.push(observation(&row[0], &row[1], &row[2], value).map_err(|m| err(line, m))?);
    }
    check_duplicates(&out)?;
    Ok(out)
}

#[derive(Deserialize)]
struct JsonObservation {
    station: String,
    date: String,
    datatype: String,
    value: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonDocument {
    Bare(Vec<JsonObservation>),
    Response { results: Vec<JsonObservation> },
}

/// Reads a JSON array of `{station, date, datatype, value}` objects, or a
/// CDO web-service response carrying that array under `results`.
pub fn parse_noaa_json(text: &str) -> Result<Vec<ClimateObservation>, ClimateError> {
    let doc: JsonDocument =
        serde_json::from_str(text).map_err(|e| ClimateError::Json(e.to_string()))?;
    let rows = match doc {
        JsonDocument::Bare(rows) | JsonDocument::Response { results: rows } => rows,
    };
    let out = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            observation(&r.station, &r.date, &r.datatype, r.value)
                .map_err(|m| ClimateError::Json(format!("entry {i}: {m}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    check_duplicates(&out)?;
    Ok(out)
}

/// Six default-graph quads per observation.
pub fn observation_quads(minter: &Minter, obs: &[ClimateObservation]) -> Vec<Quad> {
    let g = GraphName::Default;
    let iri = Iri::new_unchecked;
    let mut out = Vec::with_capacity(obs.len() * 6);
    for o in obs {
        let node = minter.observation(&o.station_id, o.date, &o.datatype);
        let result = minter.observation_result(&node);
        let midnight = o.date.and_hms_opt(0, 0, 0).unwrap().and_utc();
        out.push(Quad::new(
            node.clone(),
            iri(rdf::TYPE),
            minter.ca(ca::OBSERVATION_CLASS),
            g.clone(),
        ));
        out.push(Quad::new(
            node.clone(),
            minter.ca(ca::SOURCE_STATION),
            minter.station(&o.station_id),
            g.clone(),
        ));
        out.push(Quad::new(
            node.clone(),
            iri(sosa::RESULT_TIME),
            Literal::date_time(midnight),
            g.clone(),
        ));
        out.push(Quad::new(
            node,
            iri(sosa::HAS_RESULT),
            result.clone(),
            g.clone(),
        ));
        out.push(Quad::new(
            result.clone(),
            iri(qudt::NUMERIC_VALUE),
            Literal::decimal(o.value),
            g.clone(),
        ));
        out.push(Quad::new(
            result,
            minter.ca(ca::WITH_DATA_TYPE),
            minter.datatype(&o.datatype),
            g.clone(),
        ));
    }
    out
}

/// `network ca:retrieveWeatherFrom station`, in the CoSSMic graph.
pub fn link_network_to_station(minter: &Minter, network: &Iri, station: &Iri) -> Quad {
    Quad::new(
        network.clone(),
        minter.ca(ca::RETRIEVE_WEATHER_FROM),
        station.clone(),
        minter.cossmic_graph(),
    )
}

/// Multiplies every value by `factor` (e.g. 0.1 for tenths of a degree).
pub fn scale_values(obs: &mut [ClimateObservation], factor: f64) {
    for o in obs {
        o.value *= factor;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Dataset;

    #[test]
    fn csv_row_maps_fields() {
        let obs =
            parse_noaa_csv("station,date,datatype,value\nGHCND:GME00102404,2016-05-01,TMAX,22.3\n")
                .unwrap();
        assert_eq!(
            obs,
            vec![ClimateObservation {
                station_id: "GHCND:GME00102404".into(),
                date: NaiveDate::from_ymd_opt(2016, 5, 1).unwrap(),
                datatype: "TMAX".into(),
                value: 22.3,
            }]
        );
    }

    #[test]
    fn empty_inputs() {
        assert!(parse_noaa_csv("").unwrap().is_empty());
        assert!(parse_noaa_csv("station,date,datatype,value\n")
            .unwrap()
            .is_empty());
    }

    #[test]
    fn precipitation_and_unknown_codes_accepted() {
        let obs = parse_noaa_csv(
            "station,date,datatype,value\nS1,2016-05-01,PRCP,0.4\nS1,2016-05-01,WSF2,3\n",
        )
        .unwrap();
        assert_eq!(obs.len(), 2);
    }

    #[test]
    fn bad_rows_report_line() {
        let err = parse_noaa_csv(
            "station,date,datatype,value\nS1,2016-05-01,TMAX,1\nS1,2016-13-01,TMAX,1\n",
        )
        .unwrap_err();
        assert!(matches!(err, ClimateError::Csv { line: 3, .. }), "{err}");
        let err =
            parse_noaa_csv("station,date,datatype,value\nS1,2016-05-01,TMAX,warm\n").unwrap_err();
        assert!(matches!(err, ClimateError::Csv { line: 2, .. }));
        assert!(parse_noaa_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn duplicates_rejected() {
        let err = parse_noaa_csv(
            "station,date,datatype,value\nS,2016-05-01,TMAX,1\nS,2016-05-01,TMAX,2\n",
        )
        .unwrap_err();
        assert!(matches!(err, ClimateError::Duplicate { .. }));
    }

    #[test]
    fn json_shapes() {
        let bare = r#"[{"station":"GHCND:GME00102404","date":"2016-05-01T00:00:00","datatype":"TMAX","value":223}]"#;
        let resp = format!(r#"{{"metadata":{{}},"results":{bare}}}"#);
        let a = parse_noaa_json(bare).unwrap();
        let b = parse_noaa_json(&resp).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].value, 223.0);
        assert!(parse_noaa_json("{}").is_err());
    }

    #[test]
    fn one_observation_six_quads_in_default_graph() {
        let obs =
            parse_noaa_csv("station,date,datatype,value\nGHCND:GME00102404,2016-05-01,TMAX,22.3\n")
                .unwrap();
        let q = observation_quads(&Minter::default(), &obs);
        assert_eq!(q.len(), 6);
        assert!(q.iter().all(|q| q.graph == GraphName::Default));
    }

    #[test]
    fn link_is_idempotent_and_distinct_per_station() {
        let m = Minter::default();
        let net = m.network(&crate::heading::Region::new("DE", "KN"));
        let a = link_network_to_station(&m, &net, &m.station("GHCND:GME00102404"));
        let b = link_network_to_station(&m, &net, &m.station("GHCND:OTHER"));
        let mut ds = Dataset::new();
        ds.insert(&a);
        ds.insert(&a);
        ds.insert(&b);
        assert_eq!(ds.len(), 2);
        assert_eq!(a.graph, m.cossmic_graph());
        assert_eq!(
            a.predicate.as_str(),
            "http://jresearch.ucd.ie/climate-kg/ca/property/retrieveWeatherFrom"
        );
    }
}
