//! Daily alignment of device energy with weather observations, and Pearson
//! correlation tables over the aligned series.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use chrono::NaiveDate;
use serde::Serialize;
use thiserror::Error;

use crate::climate::link_network_to_station;
use crate::heading::{parse_heading, DeviceHeading};
use crate::names::Minter;
use crate::query::{execute, QueryError};
use crate::rdf::vocab::{self, ca, qudt, seas, sosa, ARQ_DEFAULT_GRAPH};
use crate::rdf::{Dataset, Iri, Term};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("network not linked to station: {network} has no retrieveWeatherFrom {station}")]
    NotLinked { network: String, station: String },
    #[error("{device} has more than one energy value on {date}")]
    DuplicateDay { device: String, date: NaiveDate },
    #[error("unexpected value {value} in aligned results")]
    BadValue { value: String },
    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("cannot export an empty series")]
    EmptySeries,
    #[error(transparent)]
    Query(#[from] QueryError),
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum PccError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("undefined correlation: {0} samples, at least 2 required")]
    TooFewSamples(usize),
    #[error("undefined correlation: zero variance")]
    ZeroVariance,
}

/// A device's daily energy paired with one climate variable, inner-joined on
/// calendar day.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignedSeries {
    pub device: DeviceHeading,
    pub climate_code: String,
    /// `(day, energy kWh, climate value)`, sorted by day.
    pub pairs: Vec<(NaiveDate, f64, f64)>,
    /// Extra observations by code, one entry per pair.
    pub auxiliary: BTreeMap<String, Vec<Option<f64>>>,
}

impl AlignedSeries {
    pub fn energy(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.1).collect()
    }

    pub fn climate(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.2).collect()
    }

    pub fn pcc(&self) -> Result<f64, PccError> {
        pcc(&self.energy(), &self.climate())
    }

    /// Attaches `code` values to the days present in the series.
    pub fn add_auxiliary(&mut self, code: &str, by_day: &BTreeMap<NaiveDate, f64>) {
        let column = self
            .pairs
            .iter()
            .map(|p| by_day.get(&p.0).copied())
            .collect();
        self.auxiliary.insert(code.to_owned(), column);
    }
}

fn literal_f64(t: Option<&Term>) -> Result<f64, AnalysisError> {
    t.and_then(Term::as_literal)
        .and_then(|l| l.as_f64())
        .ok_or_else(|| AnalysisError::BadValue {
            value: t.map_or("unbound".into(), Term::to_string),
        })
}

fn literal_day(t: Option<&Term>) -> Result<NaiveDate, AnalysisError> {
    t.and_then(Term::as_literal)
        .and_then(|l| l.as_date_time())
        .map(|dt| dt.date_naive())
        .ok_or_else(|| AnalysisError::BadValue {
            value: t.map_or("unbound".into(), Term::to_string),
        })
}

/// The device/climate join, shaped like `fixtures/weather_join.rq`:
/// observations from the default graph, evaluations from the CoSSMic graph,
/// matched on year, month and day.
pub fn alignment_query(
    minter: &Minter,
    device: &DeviceHeading,
    climate_code: &str,
    station_id: &str,
) -> String {
    let station = minter.station(station_id);
    format!(
        "PREFIX rdf: <{rdf_ns}>
PREFIX seas: <{seas_ns}>
PREFIX qudt: <{qudt_ns}>
PREFIX prov: <{prov_ns}>
PREFIX sosa: <{sosa_ns}>

SELECT ?eval ?val ?obsValue ?date
FROM <{default}>
FROM NAMED <{graph}>
WHERE
{{
  ?obsv a <{obs_class}> ;
        <{source}> <{station}> ;
        sosa:resultTime ?date ;
        sosa:hasResult/qudt:numericValue ?obsValue ;
        sosa:hasResult/<{with_type}> <{datatype}> .
  GRAPH <{graph}>
  {{
    <{network}> <{retrieve}> <{station}> .
    <{device}> seas:evaluation ?eval .
    ?eval prov:generatedAtTime ?edate ;
          seas:evaluatedValue/qudt:numericalValue ?val .
  }}
  FILTER (year(?date)=year(?edate) && month(?date)=month(?edate) && day(?date)=day(?edate))
}}
",
        rdf_ns = vocab::RDF_NS,
        seas_ns = vocab::SEAS_NS,
        qudt_ns = vocab::QUDT_NS,
        prov_ns = vocab::PROV_NS,
        sosa_ns = vocab::SOSA_NS,
        default = ARQ_DEFAULT_GRAPH,
        graph = minter.cossmic_graph_iri().as_str(),
        obs_class = minter.ca(ca::OBSERVATION_CLASS).as_str(),
        source = minter.ca(ca::SOURCE_STATION).as_str(),
        station = station.as_str(),
        with_type = minter.ca(ca::WITH_DATA_TYPE).as_str(),
        datatype = minter.datatype(climate_code).as_str(),
        network = minter.network(device.region()).as_str(),
        retrieve = minter.ca(ca::RETRIEVE_WEATHER_FROM).as_str(),
        device = minter.device(device).as_str(),
    )
}

/// Pairs each day's energy for `device` with the station's `climate_code`
/// observation on the same day.
pub fn align(
    ds: &Dataset,
    minter: &Minter,
    device: &DeviceHeading,
    climate_code: &str,
    station_id: &str,
) -> Result<AlignedSeries, AnalysisError> {
    let network = minter.network(device.region());
    let station = minter.station(station_id);
    if !ds.contains(&link_network_to_station(minter, &network, &station)) {
        return Err(AnalysisError::NotLinked {
            network: network.as_str().to_owned(),
            station: station.as_str().to_owned(),
        });
    }
    let rows = execute(
        ds,
        &alignment_query(minter, device, climate_code, station_id),
    )?;
    let (vals, climate, dates) = (
        rows.column("val").expect("projected"),
        rows.column("obsValue").expect("projected"),
        rows.column("date").expect("projected"),
    );
    let mut by_day = BTreeMap::new();
    for i in 0..rows.len() {
        let day = literal_day(dates[i])?;
        let pair = (literal_f64(vals[i])?, literal_f64(climate[i])?);
        if by_day.insert(day, pair).is_some() {
            return Err(AnalysisError::DuplicateDay {
                device: device.raw().to_owned(),
                date: day,
            });
        }
    }
    Ok(AlignedSeries {
        device: device.clone(),
        climate_code: climate_code.to_owned(),
        pairs: by_day.into_iter().map(|(d, (e, c))| (d, e, c)).collect(),
        auxiliary: BTreeMap::new(),
    })
}

/// Daily values of one station variable, straight from the default graph.
pub fn climate_by_day(
    ds: &Dataset,
    minter: &Minter,
    climate_code: &str,
    station_id: &str,
) -> Result<BTreeMap<NaiveDate, f64>, AnalysisError> {
    let q = format!(
        "SELECT ?date ?v WHERE {{
  ?o <{source}> <{station}> ;
     <{time}> ?date ;
     <{has_result}>/<{value}> ?v ;
     <{has_result}>/<{with_type}> <{datatype}> .
}}",
        source = minter.ca(ca::SOURCE_STATION).as_str(),
        station = minter.station(station_id).as_str(),
        time = sosa::RESULT_TIME,
        has_result = sosa::HAS_RESULT,
        value = qudt::NUMERIC_VALUE,
        with_type = minter.ca(ca::WITH_DATA_TYPE).as_str(),
        datatype = minter.datatype(climate_code).as_str(),
    );
    let rows = execute(ds, &q)?;
    let (dates, values) = (
        rows.column("date").expect("projected"),
        rows.column("v").expect("projected"),
    );
    let mut out = BTreeMap::new();
    for (d, v) in dates.into_iter().zip(values) {
        out.insert(literal_day(d)?, literal_f64(v)?);
    }
    Ok(out)
}

/// Devices that have at least one evaluation in the CoSSMic graph, sorted
/// by heading.
pub fn devices_in(ds: &Dataset, minter: &Minter) -> Vec<DeviceHeading> {
    let ns = minter.cossmic_namespace();
    let predicate = Iri::new(seas::EVALUATION).expect("vocabulary IRI");
    let subjects: BTreeSet<String> = ds
        .match_pattern(None, Some(&predicate), None, Some(&minter.cossmic_graph()))
        .into_iter()
        .filter_map(|q| match q.subject {
            crate::rdf::Subject::Iri(i) => i.as_str().strip_prefix(ns.as_str()).map(str::to_owned),
            _ => None,
        })
        .collect();
    subjects
        .iter()
        .filter_map(|s| parse_heading(s).ok())
        .collect()
}

/// Pearson correlation coefficient,
/// `Σ(x-x̄)(y-ȳ) / √(Σ(x-x̄)²·Σ(y-ȳ)²)`.
pub fn pcc(x: &[f64], y: &[f64]) -> Result<f64, PccError> {
    if x.len() != y.len() {
        return Err(PccError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 2 {
        return Err(PccError::TooFewSamples(n));
    }
    let mean_x = x.iter().sum::<f64>() / n as f64;
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mean_x, b - mean_y);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(PccError::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationEntry {
    pub device: String,
    pub climate_code: String,
    pub pcc: f64,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub climate_code: String,
    pub threshold: f64,
    pub min_samples: usize,
    /// Sorted by device heading.
    pub entries: Vec<CorrelationEntry>,
    /// Devices left out, with the reason.
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationOptions {
    /// Keep entries with `|pcc| >= threshold`.
    pub threshold: f64,
    pub min_samples: usize,
}

impl Default for CorrelationOptions {
    fn default() -> Self {
        CorrelationOptions {
            threshold: 0.7,
            min_samples: 2,
        }
    }
}

/// Two-decimal display used in the tables.
pub fn format_pcc(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

impl CorrelationReport {
    /// Builds a report from aligned series; devices with too few samples or
    /// an undefined correlation become warnings.
    pub fn from_series(
        series: &[AlignedSeries],
        climate_code: &str,
        options: CorrelationOptions,
    ) -> Result<Self, AnalysisError> {
        if !(0.0..=1.0).contains(&options.threshold) {
            return Err(AnalysisError::InvalidThreshold(options.threshold));
        }
        let mut entries = Vec::new();
        let mut warnings = Vec::new();
        for s in series {
            let n = s.pairs.len();
            if n < options.min_samples.max(2) {
                warnings.push(format!(
                    "{}: {n} aligned days, fewer than {}",
                    s.device.raw(),
                    options.min_samples.max(2)
                ));
                continue;
            }
            match s.pcc() {
                Ok(pcc) if pcc.abs() >= options.threshold => entries.push(CorrelationEntry {
                    device: s.device.raw().to_owned(),
                    climate_code: climate_code.to_owned(),
                    pcc,
                    n,
                }),
                Ok(_) => {}
                Err(e) => warnings.push(format!("{}: {e}", s.device.raw())),
            }
        }
        entries.sort_by(|a, b| a.device.cmp(&b.device));
        warnings.sort();
        Ok(CorrelationReport {
            climate_code: climate_code.to_owned(),
            threshold: options.threshold,
            min_samples: options.min_samples,
            entries,
            warnings,
        })
    }

    /// The subset with `|pcc| >= threshold`.
    pub fn with_threshold(&self, threshold: f64) -> Result<Self, AnalysisError> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(AnalysisError::InvalidThreshold(threshold));
        }
        Ok(CorrelationReport {
            threshold,
            entries: self
                .entries
                .iter()
                .filter(|e| e.pcc.abs() >= threshold)
                .cloned()
                .collect(),
            ..self.clone()
        })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("device\tclimate_code\tpcc\tn\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                e.device,
                e.climate_code,
                format_pcc(e.pcc),
                e.n
            ));
        }
        for w in &self.warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Aligns every device and reports those with `|pcc| >= threshold`.
pub fn correlation_table(
    ds: &Dataset,
    minter: &Minter,
    devices: &[DeviceHeading],
    climate_code: &str,
    station_id: &str,
    options: CorrelationOptions,
) -> Result<CorrelationReport, AnalysisError> {
    if !(0.0..=1.0).contains(&options.threshold) {
        return Err(AnalysisError::InvalidThreshold(options.threshold));
    }
    let series = devices
        .iter()
        .map(|d| align(ds, minter, d, climate_code, station_id))
        .collect::<Result<Vec<_>, _>>()?;
    CorrelationReport::from_series(&series, climate_code, options)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DeviceCategory {
    PV,
    RefrigeratorFreezer,
    GridImport,
    GridExport,
    HeatPump,
    CirculationPump,
    Other(String),
}

impl fmt::Display for DeviceCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeviceCategory::Other(label) => f.write_str(label),
            c => write!(f, "{c:?}"),
        }
    }
}

pub fn categorize(h: &DeviceHeading) -> DeviceCategory {
    let name = h.device_name();
    match name.as_str() {
        _ if h.device_segments[0].starts_with("pv") => DeviceCategory::PV,
        "refrigerator" | "freezer" => DeviceCategory::RefrigeratorFreezer,
        "grid_import" => DeviceCategory::GridImport,
        "grid_export" => DeviceCategory::GridExport,
        "heat_pump" => DeviceCategory::HeatPump,
        "circulation_pump" => DeviceCategory::CirculationPump,
        _ => DeviceCategory::Other(name),
    }
}

/// Five-number summary with linearly interpolated quartiles (R type 7).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl BoxStats {
    /// `None` for an empty sample or one containing NaN.
    pub fn from_values(values: &[f64]) -> Option<BoxStats> {
        if values.is_empty() || values.iter().any(|v| v.is_nan()) {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let h = (v.len() - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            v[lo] + (h - lo as f64) * (v[hi] - v[lo])
        };
        Some(BoxStats {
            min: v[0],
            q1: q(0.25),
            median: q(0.5),
            q3: q(0.75),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryTable {
    pub category: DeviceCategory,
    pub entries: Vec<CorrelationEntry>,
    pub box_stats: Option<BoxStats>,
}

impl CategoryTable {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("device\tclimate_code\tpcc\tn\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                e.device,
                e.climate_code,
                format_pcc(e.pcc),
                e.n
            ));
        }
        if let Some(b) = self.box_stats {
            out.push_str(&format!(
                "# box: min {} q1 {} median {} q3 {} max {}\n",
                format_pcc(b.min),
                format_pcc(b.q1),
                format_pcc(b.median),
                format_pcc(b.q3),
                format_pcc(b.max)
            ));
        }
        out
    }
}

/// Groups report entries by device category. Pass an unfiltered report
/// (threshold 0) to get full per-category distributions.
pub fn category_tables(report: &CorrelationReport) -> Result<Vec<CategoryTable>, AnalysisError> {
    let mut groups: BTreeMap<DeviceCategory, Vec<CorrelationEntry>> = BTreeMap::new();
    for e in &report.entries {
        let h = parse_heading(&e.device).map_err(|_| AnalysisError::BadValue {
            value: e.device.clone(),
        })?;
        groups.entry(categorize(&h)).or_default().push(e.clone());
    }
    Ok(groups
        .into_iter()
        .map(|(category, entries)| {
            let pccs: Vec<f64> = entries.iter().map(|e| e.pcc).collect();
            CategoryTable {
                category,
                box_stats: BoxStats::from_values(&pccs),
                entries,
            }
        })
        .collect())
}

/// Scatter data for one series; see [`scatter_csv`].
pub fn scatter_export(series: &AlignedSeries) -> Result<String, AnalysisError> {
    scatter_csv(std::slice::from_ref(series))
}

/// `device,date,energy_kwh,{code},prcp` rows for every pair of every series.
/// The `prcp` cell is empty when no precipitation was observed that day.
pub fn scatter_csv(series: &[AlignedSeries]) -> Result<String, AnalysisError> {
    let first = series
        .iter()
        .find(|s| !s.pairs.is_empty())
        .ok_or(AnalysisError::EmptySeries)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, rec: &[String]| {
        w.write_record(rec).expect("in-memory CSV write")
    };
    write(
        &mut w,
        &[
            "device".into(),
            "date".into(),
            "energy_kwh".into(),
            first.climate_code.clone(),
            "prcp".into(),
        ],
    );
    for s in series {
        let prcp = s.auxiliary.get("PRCP");
        for (i, (day, energy, climate)) in s.pairs.iter().enumerate() {
            let p = prcp
                .and_then(|c| c[i])
                .map(|v| v.to_string())
                .unwrap_or_default();
            write(
                &mut w,
                &[
                    s.device.raw().to_owned(),
                    day.to_string(),
                    energy.to_string(),
                    climate.to_string(),
                    p,
                ],
            );
        }
    }
    Ok(String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heading(s: &str) -> DeviceHeading {
        parse_heading(s).unwrap()
    }

    #[test]
    fn pcc_examples() {
        assert_eq!(pcc(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]), Ok(1.0));
        assert_eq!(pcc(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Ok(-1.0));
        assert!((pcc(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn pcc_errors() {
        assert_eq!(pcc(&[1.0], &[1.0]), Err(PccError::TooFewSamples(1)));
        assert_eq!(
            pcc(&[1.0, 2.0], &[1.0]),
            Err(PccError::LengthMismatch(2, 1))
        );
        assert_eq!(pcc(&[1.0, 1.0], &[1.0, 2.0]), Err(PccError::ZeroVariance));
        assert!(PccError::ZeroVariance
            .to_string()
            .contains("undefined correlation"));
    }

    #[test]
    fn categories() {
        assert_eq!(
            categorize(&heading("DE_KN_industrial3_pv_roof")),
            DeviceCategory::PV
        );
        assert_eq!(
            categorize(&heading("DE_KN_industrial1_pv_1")),
            DeviceCategory::PV
        );
        assert_eq!(
            categorize(&heading("DE_KN_residential2_freezer")),
            DeviceCategory::RefrigeratorFreezer
        );
        assert_eq!(
            categorize(&heading("DE_KN_public1_grid_import")),
            DeviceCategory::GridImport
        );
        assert_eq!(
            categorize(&heading("DE_KN_residential4_heat_pump")),
            DeviceCategory::HeatPump
        );
        assert_eq!(
            categorize(&heading("DE_KN_residential1_dishwasher")),
            DeviceCategory::Other("dishwasher".into())
        );
    }

    #[test]
    fn box_stats_type7() {
        let b = BoxStats::from_values(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(
            (b.min, b.q1, b.median, b.q3, b.max),
            (1.0, 1.75, 2.5, 3.25, 4.0)
        );
        assert_eq!(BoxStats::from_values(&[]), None);
    }

    fn series(device: &str, pairs: &[(u32, f64, f64)]) -> AlignedSeries {
        AlignedSeries {
            device: heading(device),
            climate_code: "TMAX".into(),
            pairs: pairs
                .iter()
                .map(|&(d, e, c)| (NaiveDate::from_ymd_opt(2016, 5, d).unwrap(), e, c))
                .collect(),
            auxiliary: BTreeMap::new(),
        }
    }

    #[test]
    fn scatter_rows() {
        let mut s = series(
            "DE_KN_residential1_pv",
            &[(1, 1.5, 20.0), (2, 2.0, 21.0), (3, 2.5, 22.0)],
        );
        let csv = scatter_export(&s).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "device,date,energy_kwh,TMAX,prcp");
        assert_eq!(lines[1], "DE_KN_residential1_pv,2016-05-01,1.5,20,");
        let prcp = BTreeMap::from([(NaiveDate::from_ymd_opt(2016, 5, 2).unwrap(), 0.4)]);
        s.add_auxiliary("PRCP", &prcp);
        let csv = scatter_export(&s).unwrap();
        assert_eq!(
            csv.lines().nth(2).unwrap(),
            "DE_KN_residential1_pv,2016-05-02,2,21,0.4"
        );
        assert_eq!(
            scatter_export(&series("DE_KN_residential1_pv", &[])),
            Err(AnalysisError::EmptySeries)
        );
    }

    #[test]
    fn report_threshold_and_warnings() {
        let a = series(
            "DE_KN_residential1_pv",
            &[(1, 1.0, 2.0), (2, 2.0, 4.0), (3, 3.0, 6.1)],
        );
        let b = series(
            "DE_KN_residential1_freezer",
            &[(1, 1.0, 2.0), (2, 1.0, 4.0), (3, 1.0, 6.0)],
        );
        let c = series("DE_KN_residential1_dishwasher", &[(1, 1.0, 2.0)]);
        let r = CorrelationReport::from_series(&[a, b, c], "TMAX", CorrelationOptions::default())
            .unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].device, "DE_KN_residential1_pv");
        assert_eq!(r.warnings.len(), 2);
        assert!(r
            .to_tsv()
            .contains("DE_KN_residential1_pv\tTMAX\t1.00\t3\n"));
        let bad = CorrelationOptions {
            threshold: 1.01,
            ..Default::default()
        };
        assert!(matches!(
            CorrelationReport::from_series(&[], "TMAX", bad),
            Err(AnalysisError::InvalidThreshold(_))
        ));
    }

    #[test]
    fn display_rounding() {
        assert_eq!(format_pcc(0.784), "0.78");
        assert_eq!(format_pcc(-0.949), "-0.95");
        assert_eq!(format_pcc(-0.001), "0.00");
    }
}
