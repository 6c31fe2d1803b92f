//! Pipeline settings: flags, then `HECP_*` environment variables, then a
//! `key=value` config file, then defaults.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use hecp::heading::Region;
use hecp::names::Minter;
use hecp::rdf::{vocab, Iri};
use hecp::uplift::CounterMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CounterArg {
    Cumulative,
    Interval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Resolution {
    /// One evaluation per device and UTC day.
    Daily,
    /// One evaluation per CSV row.
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Args, Debug, Default)]
pub struct Overrides {
    /// key=value settings file
    #[arg(long, global = true, env = "HECP_CONFIG")]
    pub config: Option<PathBuf>,
    /// Base IRI for minted resources, ending in `/`
    #[arg(long, global = true, env = "HECP_BASE")]
    pub base: Option<String>,
    /// Weather station id, e.g. GHCND:GME00102404
    #[arg(long, global = true, env = "HECP_STATION")]
    pub station: Option<String>,
    /// Name of the CoSSMic graph
    #[arg(long, global = true, env = "HECP_GRAPH")]
    pub graph: Option<String>,
    /// Region of the distribution network when the CSV has no device columns
    #[arg(long, global = true, env = "HECP_REGION")]
    pub region: Option<String>,
    #[arg(long, global = true, env = "HECP_COUNTER_MODE", value_enum)]
    pub counter_mode: Option<CounterArg>,
    #[arg(long, global = true, env = "HECP_RESOLUTION", value_enum)]
    pub resolution: Option<Resolution>,
    /// Output directory
    #[arg(long, global = true, env = "HECP_OUT")]
    pub out: Option<PathBuf>,
    /// Keep correlations with |pcc| at or above this value
    #[arg(long, global = true, env = "HECP_THRESHOLD")]
    pub threshold: Option<f64>,
    /// Climate datatype code to correlate against
    #[arg(long, global = true, env = "HECP_DATATYPE")]
    pub datatype: Option<String>,
    /// Factor applied to every climate value on ingest
    #[arg(long, global = true, env = "HECP_SCALE")]
    pub scale: Option<f64>,
    /// Minimum aligned days for a correlation
    #[arg(long, global = true, env = "HECP_MIN_SAMPLES")]
    pub min_samples: Option<usize>,
    #[arg(long, global = true, env = "HECP_BIND")]
    pub bind: Option<String>,
    #[arg(long, global = true, env = "HECP_FORMAT", value_enum)]
    pub format: Option<Format>,
    /// Query time limit in seconds
    #[arg(long, global = true, env = "HECP_TIMEOUT")]
    pub timeout: Option<f64>,
    /// Longest query the endpoint accepts, in bytes
    #[arg(long, global = true, env = "HECP_MAX_QUERY_LEN")]
    pub max_query_len: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub base: Iri,
    pub station: String,
    pub graph: Option<Iri>,
    pub region: Region,
    pub counter_mode: CounterMode,
    pub resolution: Resolution,
    pub out: PathBuf,
    pub threshold: f64,
    pub datatype: String,
    pub scale: f64,
    pub min_samples: usize,
    pub bind: SocketAddr,
    pub format: Format,
    pub timeout: Duration,
    pub max_query_len: usize,
}

const KEYS: [&str; 15] = [
    "base",
    "station",
    "graph",
    "region",
    "counter_mode",
    "resolution",
    "out",
    "threshold",
    "datatype",
    "scale",
    "min_samples",
    "bind",
    "format",
    "timeout",
    "max_query_len",
];

/// Reads `key = value` lines; `#` starts a comment line.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in config {}", path.display()))
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key=value", i + 1);
        };
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            bail!("line {}: unknown key {:?}", i + 1, k.trim());
        }
        out.insert(key, v.trim().to_owned());
    }
    Ok(out)
}

fn value_enum<T: ValueEnum>(key: &str, s: &str) -> Result<T> {
    T::from_str(s, true).map_err(|_| anyhow::anyhow!("invalid {key} {s:?}"))
}

fn number<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| anyhow::anyhow!("invalid {key} {s:?}"))
}

impl PipelineConfig {
    pub fn resolve(o: &Overrides) -> Result<Self> {
        let file = match &o.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        let from_file = |k: &str| file.get(k).map(String::as_str);

        let base = o
            .base
            .as_deref()
            .or(from_file("base"))
            .unwrap_or(vocab::PROJECT_BASE);
        let base = Iri::new(base).with_context(|| format!("invalid base IRI {base:?}"))?;
        if !base.as_str().ends_with('/') {
            bail!("base IRI {} must end with '/'", base.as_str());
        }
        let graph = match o.graph.as_deref().or(from_file("graph")) {
            Some(g) => Some(Iri::new(g).with_context(|| format!("invalid graph IRI {g:?}"))?),
            None => None,
        };
        let region = o
            .region
            .as_deref()
            .or(from_file("region"))
            .unwrap_or("DE_KN");
        let region: Region = region
            .parse()
            .with_context(|| format!("invalid region {region:?}"))?;
        let counter_mode = match o.counter_mode {
            Some(c) => c,
            None => from_file("counter_mode").map_or(Ok(CounterArg::Cumulative), |s| {
                value_enum("counter_mode", s)
            })?,
        };
        let resolution = match o.resolution {
            Some(r) => r,
            None => from_file("resolution")
                .map_or(Ok(Resolution::Daily), |s| value_enum("resolution", s))?,
        };
        let format = match o.format {
            Some(f) => f,
            None => from_file("format").map_or(Ok(Format::Tsv), |s| value_enum("format", s))?,
        };
        let threshold = match o.threshold {
            Some(t) => t,
            None => from_file("threshold").map_or(Ok(0.7), |s| number("threshold", s))?,
        };
        if !(0.0..=1.0).contains(&threshold) {
            bail!("threshold {threshold} is outside [0, 1]");
        }
        let scale = match o.scale {
            Some(s) => s,
            None => from_file("scale").map_or(Ok(1.0), |s| number("scale", s))?,
        };
        if !scale.is_finite() {
            bail!("scale must be finite");
        }
        let min_samples = match o.min_samples {
            Some(n) => n,
            None => from_file("min_samples").map_or(Ok(2), |s| number("min_samples", s))?,
        };
        let bind = o
            .bind
            .as_deref()
            .or(from_file("bind"))
            .unwrap_or("127.0.0.1:7878");
        let bind: SocketAddr = number("bind address", bind)?;
        let timeout = match o.timeout {
            Some(t) => t,
            None => from_file("timeout").map_or(Ok(30.0), |s| number("timeout", s))?,
        };
        if !(timeout > 0.0 && timeout.is_finite()) {
            bail!("timeout must be a positive number of seconds");
        }
        let max_query_len = match o.max_query_len {
            Some(n) => n,
            None => {
                from_file("max_query_len").map_or(Ok(64 * 1024), |s| number("max_query_len", s))?
            }
        };
        Ok(PipelineConfig {
            base,
            station: o
                .station
                .clone()
                .or(from_file("station").map(str::to_owned))
                .unwrap_or_else(|| "GHCND:GME00102404".into()),
            graph,
            region,
            counter_mode: match counter_mode {
                CounterArg::Cumulative => CounterMode::Cumulative,
                CounterArg::Interval => CounterMode::Interval,
            },
            resolution,
            out: o
                .out
                .clone()
                .or(from_file("out").map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(".")),
            threshold,
            datatype: o
                .datatype
                .clone()
                .or(from_file("datatype").map(str::to_owned))
                .unwrap_or_else(|| "TMAX".into()),
            scale,
            min_samples,
            bind,
            format,
            timeout: Duration::from_secs_f64(timeout),
            max_query_len,
        })
    }

    pub fn minter(&self) -> Minter {
        let m = Minter::new(self.base.clone());
        match &self.graph {
            Some(g) => m.with_cossmic_graph(g.clone()),
            None => m,
        }
    }
}
