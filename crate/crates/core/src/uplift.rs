//! Energy tables to RDF: topology from headings, evaluations from readings.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use chrono::{DateTime, Days, NaiveDate, Utc};
use thiserror::Error;

use crate::heading::{
    parse_heading, DeviceHeading, DeviceRole, HeadingError, Region, Site, SiteKind,
};
use crate::names::Minter;
use crate::rdf::vocab::{prov, qudt, rdf, seas};
use crate::rdf::{parse_date_time, Iri, Literal, Quad};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UpliftError {
    #[error(transparent)]
    Heading(#[from] HeadingError),
    #[error("heading {heading} is in region {found}, expected {expected}")]
    MixedRegion {
        heading: String,
        found: Region,
        expected: Region,
    },
    #[error("no device headings to derive a region from")]
    NoHeadings,
    #[error("duplicate (device, timestamp) records: {}", .0.join(", "))]
    DuplicateRecords(Vec<String>),
    #[error("counter reset for {device} on {day}: reading fell from {from} to {to}")]
    CounterReset {
        device: String,
        day: NaiveDate,
        from: f64,
        to: f64,
    },
    #[error("energy CSV line {line}: {message}")]
    Csv { line: u64, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CounterMode {
    /// Monotone meter readings; energy is the difference between readings.
    Cumulative,
    /// Each reading is the energy of its own interval.
    Interval,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyRecord {
    pub device: DeviceHeading,
    pub timestamp: DateTime<Utc>,
    /// kWh
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyColumn {
    pub heading: DeviceHeading,
    /// One slot per table timestamp; `None` is a missing cell.
    pub values: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyTable {
    pub timestamps: Vec<DateTime<Utc>>,
    pub columns: Vec<EnergyColumn>,
    pub counter_mode: CounterMode,
}

/// Upstream household-data columns that are not device headings.
const NON_DEVICE_COLUMNS: [&str; 2] = ["cet_cest_timestamp", "interpolated"];

impl EnergyTable {
    /// Reads a CSV whose first column is `utc_timestamp` and whose other
    /// columns are device headings. Empty cells are missing values.
    pub fn from_csv(reader: impl Read, counter_mode: CounterMode) -> Result<Self, UpliftError> {
        let mut rdr = csv::ReaderBuilder::new()
            .flexible(false)
            .from_reader(reader);
        let csv_err = |line: u64, e: &dyn std::fmt::Display| UpliftError::Csv {
            line,
            message: e.to_string(),
        };
        let headers = rdr.headers().map_err(|e| csv_err(1, &e))?.clone();
        if headers.get(0) != Some("utc_timestamp") {
            return Err(csv_err(1, &"first column must be utc_timestamp"));
        }
        let mut keep = Vec::new();
        let mut columns = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, name) in headers.iter().enumerate().skip(1) {
            if NON_DEVICE_COLUMNS.contains(&name) {
                continue;
            }
            if !seen.insert(name) {
                return Err(csv_err(1, &format!("duplicate column {name}")));
            }
            keep.push(i);
            columns.push(EnergyColumn {
                heading: parse_heading(name)?,
                values: Vec::new(),
            });
        }
        let mut timestamps: Vec<DateTime<Utc>> = Vec::new();
        for row in rdr.records() {
            let row = row.map_err(|e| csv_err(e.position().map_or(0, |p| p.line()), &e))?;
            let line = row.position().map_or(0, |p| p.line());
            let ts_text = &row[0];
            let ts = parse_date_time(ts_text)
                .ok_or_else(|| csv_err(line, &format!("invalid timestamp {ts_text:?}")))?;
            if timestamps.last().is_some_and(|&prev| prev >= ts) {
                return Err(csv_err(line, &"timestamps must be strictly increasing"));
            }
            timestamps.push(ts);
            for (col, &i) in columns.iter_mut().zip(&keep) {
                let cell = row[i].trim();
                let value = if cell.is_empty() {
                    None
                } else {
                    let v: f64 = cell
                        .parse()
                        .ok()
                        .filter(|v: &f64| v.is_finite())
                        .ok_or_else(|| csv_err(line, &format!("invalid value {cell:?}")))?;
                    Some(v)
                };
                col.values.push(value);
            }
        }
        Ok(EnergyTable {
            timestamps,
            columns,
            counter_mode,
        })
    }

    pub fn headings(&self) -> Vec<DeviceHeading> {
        self.columns.iter().map(|c| c.heading.clone()).collect()
    }

    /// One record per non-missing cell.
    pub fn records(&self) -> Vec<EnergyRecord> {
        self.columns
            .iter()
            .flat_map(|col| {
                col.values
                    .iter()
                    .zip(&self.timestamps)
                    .filter_map(move |(v, &ts)| {
                        v.map(|value| EnergyRecord {
                            device: col.heading.clone(),
                            timestamp: ts,
                            value,
                        })
                    })
            })
            .collect()
    }

    /// Resamples to UTC days, stamped at 00:00:00Z.
    ///
    /// Cumulative counters: the value of day D is the last reading of D minus
    /// the last reading of D-1; D is skipped if either is missing. Interval
    /// readings are summed per day. The result is always in interval mode.
    pub fn to_daily(&self) -> Result<EnergyTable, UpliftError> {
        let mut per_column: Vec<BTreeMap<NaiveDate, f64>> = Vec::with_capacity(self.columns.len());
        for col in &self.columns {
            let readings = col
                .values
                .iter()
                .zip(&self.timestamps)
                .filter_map(|(v, ts)| v.map(|v| (ts.date_naive(), v)));
            let daily = match self.counter_mode {
                CounterMode::Interval => {
                    let mut sums = BTreeMap::new();
                    for (day, v) in readings {
                        *sums.entry(day).or_insert(0.0) += v;
                    }
                    sums
                }
                CounterMode::Cumulative => {
                    let mut last_of_day = BTreeMap::new();
                    let mut prev: Option<f64> = None;
                    for (day, v) in readings {
                        if let Some(p) = prev {
                            if v < p {
                                return Err(UpliftError::CounterReset {
                                    device: col.heading.raw().to_owned(),
                                    day,
                                    from: p,
                                    to: v,
                                });
                            }
                        }
                        prev = Some(v);
                        last_of_day.insert(day, v);
                    }
                    last_of_day
                        .iter()
                        .filter_map(|(&day, &end)| {
                            let before = day.checked_sub_days(Days::new(1))?;
                            last_of_day.get(&before).map(|&start| (day, end - start))
                        })
                        .collect()
                }
            };
            per_column.push(daily);
        }
        let days: BTreeSet<NaiveDate> = per_column.iter().flat_map(|m| m.keys().copied()).collect();
        let columns = self
            .columns
            .iter()
            .zip(&per_column)
            .map(|(col, daily)| EnergyColumn {
                heading: col.heading.clone(),
                values: days.iter().map(|d| daily.get(d).copied()).collect(),
            })
            .collect();
        Ok(EnergyTable {
            timestamps: days
                .into_iter()
                .map(|d| d.and_hms_opt(0, 0, 0).unwrap().and_utc())
                .collect(),
            columns,
            counter_mode: CounterMode::Interval,
        })
    }
}

/// Sites and devices of one region's distribution network.
#[derive(Clone, Debug)]
pub struct Topology {
    region: Region,
    sites: BTreeMap<Site, Vec<DeviceHeading>>,
}

impl Topology {
    pub fn new(region: Region) -> Self {
        Topology {
            region,
            sites: BTreeMap::new(),
        }
    }

    /// Builds a topology from headings that must all share one region.
    pub fn from_headings(headings: &[DeviceHeading]) -> Result<Self, UpliftError> {
        let first = headings.first().ok_or(UpliftError::NoHeadings)?;
        let mut topology = Topology::new(first.region().clone());
        for h in headings {
            topology.add_device(h.clone())?;
        }
        Ok(topology)
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn add_site(&mut self, site: Site) -> Result<(), UpliftError> {
        self.check_region(&site.region, &site.to_string())?;
        self.sites.entry(site).or_default();
        Ok(())
    }

    pub fn add_device(&mut self, heading: DeviceHeading) -> Result<(), UpliftError> {
        self.check_region(heading.region(), heading.raw())?;
        let devices = self.sites.entry(heading.site.clone()).or_default();
        if !devices.contains(&heading) {
            devices.push(heading);
        }
        Ok(())
    }

    fn check_region(&self, region: &Region, what: &str) -> Result<(), UpliftError> {
        if *region != self.region {
            return Err(UpliftError::MixedRegion {
                heading: what.to_owned(),
                found: region.clone(),
                expected: self.region.clone(),
            });
        }
        Ok(())
    }

    /// Topology quads in the CoSSMic graph, sorted and deduplicated.
    pub fn quads(&self, minter: &Minter) -> Vec<Quad> {
        let graph = minter.cossmic_graph();
        let iri = Iri::new_unchecked;
        let mut out = BTreeSet::new();
        let mut push = |s: &Iri, p: &str, o: &Iri| {
            out.insert(Quad::new(
                s.clone(),
                Iri::new_unchecked(p),
                o.clone(),
                graph.clone(),
            ));
        };

        let network = minter.network(&self.region);
        let grid = minter.grid(&self.region);
        push(
            &network,
            rdf::TYPE,
            &iri(seas::ELECTRIC_POWER_DISTRIBUTION_NETWORK),
        );

        let mut grid_used = false;
        for (site, devices) in &self.sites {
            let s = minter.site(site);
            push(&s, rdf::TYPE, &iri(seas::ELECTRIC_POWER_SYSTEM));
            if site.kind == SiteKind::Industrial {
                push(&s, rdf::TYPE, &iri(seas::INDUSTRIAL_BUILDING));
            }
            push(&s, seas::SUB_SYSTEM_OF, &network);
            for d in devices {
                let dev = minter.device(d);
                match d.role() {
                    DeviceRole::Producer => {
                        push(&s, seas::PRODUCED_ELECTRIC_POWER, &dev);
                        push(&grid, seas::IS_POWERED_BY, &dev);
                        grid_used = true;
                    }
                    DeviceRole::Consumer => {
                        push(&s, seas::CONSUMED_ELECTRIC_POWER, &dev);
                        push(&dev, rdf::TYPE, &iri(seas::ELECTRIC_POWER_CONSUMER));
                    }
                    DeviceRole::GridImport => {
                        push(&s, seas::IS_POWERED_BY, &dev);
                        push(&dev, seas::SUB_SYSTEM_OF, &grid);
                        grid_used = true;
                    }
                    DeviceRole::GridExport => {
                        push(&s, seas::POWERS, &dev);
                        push(&dev, seas::SUB_SYSTEM_OF, &grid);
                        grid_used = true;
                    }
                }
            }
        }
        if grid_used {
            push(
                &grid,
                rdf::TYPE,
                &iri(seas::ELECTRIC_POWER_TRANSMISSION_SYSTEM),
            );
        }
        out.into_iter().collect()
    }
}

/// Topology quads for a set of headings from one region.
pub fn topology_quads(
    minter: &Minter,
    headings: &[DeviceHeading],
) -> Result<Vec<Quad>, UpliftError> {
    Ok(Topology::from_headings(headings)?.quads(minter))
}

/// Five quads per record: the device's evaluation, its type, timestamp, value
/// node and the numeric value on that node.
pub fn evaluation_quads(
    minter: &Minter,
    records: &[EnergyRecord],
) -> Result<Vec<Quad>, UpliftError> {
    let mut seen = BTreeSet::new();
    let mut duplicates = BTreeSet::new();
    for r in records {
        if !seen.insert((r.device.raw(), r.timestamp)) {
            duplicates.insert(format!(
                "{}@{}",
                r.device.raw(),
                r.timestamp.format("%Y-%m-%dT%H:%M:%SZ")
            ));
        }
    }
    if !duplicates.is_empty() {
        return Err(UpliftError::DuplicateRecords(
            duplicates.into_iter().collect(),
        ));
    }
    let graph = minter.cossmic_graph();
    let iri = Iri::new_unchecked;
    let mut out = Vec::with_capacity(records.len() * 5);
    for r in records {
        let device = minter.device(&r.device);
        let eval = minter.evaluation(&device, r.timestamp);
        let value = minter.evaluation_value(&eval);
        out.push(Quad::new(
            device,
            iri(seas::EVALUATION),
            eval.clone(),
            graph.clone(),
        ));
        out.push(Quad::new(
            eval.clone(),
            iri(rdf::TYPE),
            iri(seas::ELECTRIC_POWER_EVALUATION),
            graph.clone(),
        ));
        out.push(Quad::new(
            eval.clone(),
            iri(prov::GENERATED_AT_TIME),
            Literal::date_time(r.timestamp),
            graph.clone(),
        ));
        out.push(Quad::new(
            eval,
            iri(seas::EVALUATED_VALUE),
            value.clone(),
            graph.clone(),
        ));
        out.push(Quad::new(
            value,
            iri(qudt::NUMERICAL_VALUE),
            Literal::decimal(r.value),
            graph.clone(),
        ));
    }
    Ok(out)
}
