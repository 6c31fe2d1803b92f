use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use hecp::analysis::{
    align, categorize, category_tables, climate_by_day, devices_in, scatter_csv, AlignedSeries,
    CorrelationOptions, CorrelationReport, DeviceCategory,
};
use hecp::climate::{
    link_network_to_station, observation_quads, parse_noaa_csv, parse_noaa_json, scale_values,
};
use hecp::query::execute_with_deadline;
use hecp::rdf::{parse_turtle, serialize_turtle, Dataset, GraphName, PrefixMap};
use hecp::store::{graph_comment, load_store, StoreFile};
use hecp::uplift::{evaluation_quads, EnergyTable, Topology};
use hecp_endpoint::EndpointConfig;

use crate::config::{Format, PipelineConfig, Resolution};
use crate::Internal;

/// Categories that always get a scatter file.
const SCATTER_CATEGORIES: [DeviceCategory; 3] = [
    DeviceCategory::PV,
    DeviceCategory::RefrigeratorFreezer,
    DeviceCategory::GridImport,
];

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Serializes `graph` and checks that the text parses back to the same quads.
fn turtle(ds: &Dataset, graph: &GraphName, prefixes: &PrefixMap) -> Result<String> {
    let text = serialize_turtle(ds, graph, prefixes);
    let back = parse_turtle(&text, None, graph)
        .map_err(|e| Internal(format!("serialized Turtle does not parse: {e}")))?;
    let back: Dataset = back.quads.iter().collect();
    if back.quads() != ds.match_pattern(None, None, None, Some(graph)) {
        bail!(Internal("serialized Turtle does not round-trip".into()));
    }
    Ok(text)
}

pub fn uplift(csv: &Path, config: &PipelineConfig) -> Result<PathBuf> {
    let file = fs::File::open(csv).with_context(|| format!("opening {}", csv.display()))?;
    let mut table = EnergyTable::from_csv(file, config.counter_mode)
        .with_context(|| format!("in {}", csv.display()))?;
    if config.resolution == Resolution::Daily {
        table = table
            .to_daily()
            .with_context(|| format!("resampling {}", csv.display()))?;
    }
    let minter = config.minter();
    let headings = table.headings();
    let topology = if headings.is_empty() {
        Topology::new(config.region.clone())
    } else {
        Topology::from_headings(&headings)?
    };
    let mut ds = Dataset::new();
    ds.extend(&topology.quads(&minter));
    ds.insert(&link_network_to_station(
        &minter,
        &minter.network(topology.region()),
        &minter.station(&config.station),
    ));
    ds.extend(&evaluation_quads(&minter, &table.records())?);

    let graph = minter.cossmic_graph();
    let mut text = graph_comment(minter.cossmic_graph_iri());
    text.push_str(&turtle(
        &ds,
        &graph,
        &PrefixMap::standard(Some(config.base.clone())),
    )?);
    let out = config.out.join("cossmic.ttl");
    write_file(&out, &text)?;
    Ok(out)
}

pub fn climate(input: &Path, config: &PipelineConfig) -> Result<PathBuf> {
    let text = read_file(input)?;
    let is_json = input
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let mut obs = if is_json {
        parse_noaa_json(&text)
    } else {
        parse_noaa_csv(&text)
    }
    .with_context(|| format!("in {}", input.display()))?;
    scale_values(&mut obs, config.scale);
    let minter = config.minter();
    let ds: Dataset = observation_quads(&minter, &obs).iter().collect();
    let text = turtle(
        &ds,
        &GraphName::Default,
        &PrefixMap::standard(Some(config.base.clone())),
    )?;
    let out = config.out.join("climate.ttl");
    write_file(&out, &text)?;
    Ok(out)
}

pub fn load(args: &[String]) -> Result<Dataset> {
    let files = args
        .iter()
        .map(|s| StoreFile::parse(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(load_store(&files)?)
}

pub fn query(store: &[String], text: &str, config: &PipelineConfig) -> Result<String> {
    let ds = load(store)?;
    let deadline = std::time::Instant::now() + config.timeout;
    let solutions = execute_with_deadline(&ds, text, Some(deadline))?;
    Ok(match config.format {
        Format::Json => solutions.to_json(),
        Format::Tsv => solutions.to_tsv(),
    })
}

pub fn serve(store: &[String], config: &PipelineConfig) -> Result<()> {
    let endpoint = EndpointConfig {
        bind: config.bind,
        dataset: store
            .iter()
            .map(|s| StoreFile::parse(s))
            .collect::<Result<Vec<_>, _>>()?,
        max_query_len: config.max_query_len,
        timeout: config.timeout,
    };
    endpoint.validate()?;
    let ds = Arc::new(endpoint.load_dataset()?);
    let runtime = tokio::runtime::Runtime::new().context("starting runtime")?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(endpoint.bind)
            .await
            .with_context(|| format!("cannot bind {}", endpoint.bind))?;
        eprintln!(
            "serving {} quads at http://{}/sparql",
            ds.len(),
            listener.local_addr().context("listener address")?
        );
        hecp_endpoint::serve_on(listener, endpoint, ds).await?;
        Ok(())
    })
}

fn slug(c: &DeviceCategory) -> String {
    match c {
        DeviceCategory::PV => "pv".into(),
        DeviceCategory::RefrigeratorFreezer => "refrigerator_freezer".into(),
        DeviceCategory::GridImport => "grid_import".into(),
        DeviceCategory::GridExport => "grid_export".into(),
        DeviceCategory::HeatPump => "heat_pump".into(),
        DeviceCategory::CirculationPump => "circulation_pump".into(),
        DeviceCategory::Other(label) => format!("other_{label}"),
    }
}

/// Files written by `analyze`, relative to the output directory.
pub struct AnalyzeOutput {
    pub report: CorrelationReport,
    pub files: Vec<PathBuf>,
}

pub fn analyze(store: &[String], config: &PipelineConfig) -> Result<AnalyzeOutput> {
    let ds = load(store)?;
    let minter = config.minter();
    let devices = devices_in(&ds, &minter);
    if devices.is_empty() {
        bail!(
            "no device evaluations in graph <{}>",
            minter.cossmic_graph_iri().as_str()
        );
    }
    let prcp = climate_by_day(&ds, &minter, "PRCP", &config.station)?;
    let mut series = Vec::with_capacity(devices.len());
    for d in &devices {
        let mut s = align(&ds, &minter, d, &config.datatype, &config.station)?;
        s.add_auxiliary("PRCP", &prcp);
        series.push(s);
    }

    let unfiltered = CorrelationReport::from_series(
        &series,
        &config.datatype,
        CorrelationOptions {
            threshold: 0.0,
            min_samples: config.min_samples,
        },
    )?;
    let report = unfiltered.with_threshold(config.threshold)?;

    let dir = &config.out;
    let mut files = Vec::new();
    let mut emit = |name: String, contents: &str| -> Result<()> {
        write_file(&dir.join(&name), contents)?;
        files.push(PathBuf::from(name));
        Ok(())
    };
    emit("correlation.tsv".into(), &report.to_tsv())?;
    emit("correlation.json".into(), &report.to_json())?;

    let tables = category_tables(&unfiltered)?;
    for t in &tables {
        emit(format!("category_{}.tsv", slug(&t.category)), &t.to_tsv())?;
    }
    let mut summary =
        serde_json::to_string_pretty(&tables).context("serializing category tables")?;
    summary.push('\n');
    emit("categories.json".into(), &summary)?;

    let mut by_category: BTreeMap<DeviceCategory, Vec<AlignedSeries>> = BTreeMap::new();
    for s in series {
        by_category
            .entry(categorize(&s.device))
            .or_default()
            .push(s);
    }
    for c in SCATTER_CATEGORIES {
        let members = by_category.remove(&c).unwrap_or_default();
        let csv = if members.iter().any(|s| !s.pairs.is_empty()) {
            scatter_csv(&members)?
        } else {
            format!("device,date,energy_kwh,{},prcp\n", config.datatype)
        };
        emit(format!("scatter_{}.csv", slug(&c)), &csv)?;
    }
    Ok(AnalyzeOutput { report, files })
}

pub fn print(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}
