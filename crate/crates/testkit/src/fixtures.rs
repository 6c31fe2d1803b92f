//! Datasets built through the real uplift and ingest paths.

use std::path::PathBuf;

use chrono::{Duration, NaiveDate, TimeZone, Utc};
use hecp::climate::{
    link_network_to_station, observation_quads, parse_noaa_csv, ClimateObservation,
};
use hecp::heading::{parse_heading, DeviceHeading};
use hecp::names::Minter;
use hecp::rdf::{Dataset, Quad};
use hecp::uplift::{evaluation_quads, topology_quads, CounterMode, EnergyRecord, EnergyTable};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const STATION: &str = "GHCND:GME00102404";

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    let path = fixture_path(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// The reference weather-join query, byte for byte.
pub fn weather_join_query() -> String {
    read_fixture("weather_join.rq")
}

/// Topology, evaluations, observations and the station link in one store.
pub fn assemble(
    minter: &Minter,
    headings: &[DeviceHeading],
    records: &[EnergyRecord],
    observations: &[ClimateObservation],
    station_id: &str,
) -> Dataset {
    let mut ds = Dataset::new();
    if !headings.is_empty() {
        ds.extend(&topology_quads(minter, headings).expect("one region"));
        let network = minter.network(headings[0].region());
        ds.insert(&link_network_to_station(
            minter,
            &network,
            &minter.station(station_id),
        ));
    }
    ds.extend(&evaluation_quads(minter, records).expect("unique records"));
    ds.extend(&observation_quads(minter, observations));
    ds
}

/// Three days of cumulative meter readings for three industrial devices plus
/// NOAA observations for the same days, resampled to daily energy.
pub fn three_day_dataset() -> Dataset {
    let table = EnergyTable::from_csv(
        read_fixture("energy_3day.csv").as_bytes(),
        CounterMode::Cumulative,
    )
    .expect("fixture parses")
    .to_daily()
    .expect("fixture is monotone");
    let obs = parse_noaa_csv(&read_fixture("noaa_3day.csv")).expect("fixture parses");
    assemble(
        &Minter::default(),
        &table.headings(),
        &table.records(),
        &obs,
        STATION,
    )
}

fn day(start: NaiveDate, i: usize) -> NaiveDate {
    start + Duration::days(i as i64)
}

/// `days` days of TMAX, a device whose energy is `slope * TMAX + intercept`,
/// and a device at a constant level with small independent noise.
pub struct LinearFixture {
    pub dataset: Dataset,
    pub linear: DeviceHeading,
    pub noisy: DeviceHeading,
    pub tmax: Vec<f64>,
    pub linear_energy: Vec<f64>,
    pub noisy_energy: Vec<f64>,
}

pub fn linear_fixture(days: usize, slope: f64, intercept: f64, seed: u64) -> LinearFixture {
    let mut rng = StdRng::seed_from_u64(seed);
    let linear = parse_heading("DE_KN_residential1_heat_pump").unwrap();
    let noisy = parse_heading("DE_KN_residential1_freezer").unwrap();
    let start = NaiveDate::from_ymd_opt(2016, 5, 1).unwrap();
    let tmax: Vec<f64> = (0..days)
        .map(|_| (rng.gen_range(50..=300) as f64) / 10.0)
        .collect();
    let linear_energy: Vec<f64> = tmax.iter().map(|t| slope * t + intercept).collect();
    let noisy_energy: Vec<f64> = (0..days)
        .map(|_| 1.2 + rng.gen_range(-0.01..0.01))
        .collect();

    let mut records = Vec::new();
    let mut obs = Vec::new();
    for i in 0..days {
        let d = day(start, i);
        let ts = Utc.from_utc_datetime(&d.and_hms_opt(0, 0, 0).unwrap());
        records.push(EnergyRecord {
            device: linear.clone(),
            timestamp: ts,
            value: linear_energy[i],
        });
        records.push(EnergyRecord {
            device: noisy.clone(),
            timestamp: ts,
            value: noisy_energy[i],
        });
        obs.push(ClimateObservation {
            station_id: STATION.into(),
            date: d,
            datatype: "TMAX".into(),
            value: tmax[i],
        });
    }
    let dataset = assemble(
        &Minter::default(),
        &[linear.clone(), noisy.clone()],
        &records,
        &obs,
        STATION,
    );
    LinearFixture {
        dataset,
        linear,
        noisy,
        tmax,
        linear_energy,
        noisy_energy,
    }
}

/// A store holding `evaluations * 5` evaluation quads spread across
/// `devices` devices, daily TMAX for every day covered, and the station
/// link. Returns the store and the first device.
pub fn scale_dataset(evaluations: usize, devices: usize) -> (Dataset, DeviceHeading) {
    let headings: Vec<DeviceHeading> = (0..devices)
        .map(|i| {
            parse_heading(&format!(
                "DE_KN_residential{}_pv_{}",
                i / 10 + 1,
                i % 10 + 1
            ))
            .unwrap()
        })
        .collect();
    let per_device = evaluations.div_ceil(devices);
    let start = NaiveDate::from_ymd_opt(2010, 1, 1).unwrap();
    let minter = Minter::default();
    let mut ds = Dataset::new();
    ds.extend(&topology_quads(&minter, &headings).unwrap());
    ds.insert(&link_network_to_station(
        &minter,
        &minter.network(headings[0].region()),
        &minter.station(STATION),
    ));
    let mut remaining = evaluations;
    for h in &headings {
        let n = per_device.min(remaining);
        remaining -= n;
        let records: Vec<EnergyRecord> = (0..n)
            .map(|i| EnergyRecord {
                device: h.clone(),
                timestamp: Utc.from_utc_datetime(&day(start, i).and_hms_opt(0, 0, 0).unwrap()),
                value: (i % 97) as f64 / 10.0,
            })
            .collect();
        let quads: Vec<Quad> = evaluation_quads(&minter, &records).unwrap();
        ds.extend(&quads);
    }
    let obs: Vec<ClimateObservation> = (0..per_device)
        .map(|i| ClimateObservation {
            station_id: STATION.into(),
            date: day(start, i),
            datatype: "TMAX".into(),
            value: (i % 31) as f64,
        })
        .collect();
    ds.extend(&observation_quads(&minter, &obs));
    (ds, headings[0].clone())
}
