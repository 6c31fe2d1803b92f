use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};
use std::time::{Duration, Instant};

use hecp::names::Minter;
use hecp::rdf::{parse_turtle, serialize_turtle, Dataset, GraphName, PrefixMap, Term};
use hecp::store::graph_comment;
use hecp_testkit::fixtures::{assemble, fixture_path, linear_fixture, read_fixture, STATION};
use hecp_testkit::naive_query;

fn hecp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecp"))
        .args(args)
        .env_clear()
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn ok(out: Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// `cossmic.ttl` and `climate.ttl` for the 3-day fixture in `dir`.
fn three_day_files(dir: &Path) -> (PathBuf, PathBuf) {
    let out = path(dir);
    ok(hecp(&[
        "--out",
        out,
        "uplift",
        path(&fixture_path("energy_3day.csv")),
    ]));
    ok(hecp(&[
        "--out",
        out,
        "climate",
        path(&fixture_path("noaa_3day.csv")),
    ]));
    (dir.join("cossmic.ttl"), dir.join("climate.ttl"))
}

fn load_files(files: &[&Path]) -> Dataset {
    let specs: Vec<_> = files
        .iter()
        .map(|f| hecp::store::StoreFile::new(*f))
        .collect();
    hecp::store::load_store(&specs).unwrap()
}

#[test]
fn uplift_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let (cossmic, _) = three_day_files(dir.path());
    let text = std::fs::read_to_string(&cossmic).unwrap();
    assert_eq!(text, read_fixture("golden/energy_3day_cossmic.ttl"));

    // same quads as building the store through the library
    let table = hecp::uplift::EnergyTable::from_csv(
        read_fixture("energy_3day.csv").as_bytes(),
        hecp::uplift::CounterMode::Cumulative,
    )
    .unwrap()
    .to_daily()
    .unwrap();
    let expected = assemble(
        &Minter::default(),
        &table.headings(),
        &table.records(),
        &[],
        STATION,
    );
    let graph = Minter::default().cossmic_graph();
    let parsed: Dataset = parse_turtle(&text, None, &graph)
        .unwrap()
        .quads
        .iter()
        .collect();
    assert_eq!(parsed.quads(), expected.quads());
}

#[test]
fn header_only_csv_gives_network_node() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    std::fs::write(&csv, "utc_timestamp\n").unwrap();
    ok(hecp(&["--out", path(dir.path()), "uplift", path(&csv)]));
    let text = std::fs::read_to_string(dir.path().join("cossmic.ttl")).unwrap();
    let ds = load_files(&[&dir.path().join("cossmic.ttl")]);
    assert_eq!(ds.len(), 2, "{text}");
    assert!(text.contains("<resource/cossmic/DE_KN_COSSMIC>"));
    assert!(text.contains("seas:ElectricPowerDistributionNetwork"));
}

#[test]
fn bad_heading_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    std::fs::write(
        &csv,
        "utc_timestamp,not_a_heading\n2016-05-01T00:00:00Z,1\n",
    )
    .unwrap();
    let out = hecp(&["--out", path(dir.path()), "uplift", path(&csv)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn climate_quad_counts() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    std::fs::write(
        &one,
        "station,date,datatype,value\nGHCND:GME00102404,2016-05-01,TMAX,14.2\n",
    )
    .unwrap();
    ok(hecp(&["--out", path(dir.path()), "climate", path(&one)]));
    assert_eq!(load_files(&[&dir.path().join("climate.ttl")]).len(), 6);

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "station,date,datatype,value\n").unwrap();
    ok(hecp(&["--out", path(dir.path()), "climate", path(&empty)]));
    let text = std::fs::read_to_string(dir.path().join("climate.ttl")).unwrap();
    assert!(
        text.lines().all(|l| l.is_empty() || l.starts_with('@')),
        "{text}"
    );

    let bad = dir.path().join("bad.csv");
    std::fs::write(
        &bad,
        "station,date,datatype,value\nGHCND:GME00102404,2016-13-01,TMAX,1\n",
    )
    .unwrap();
    assert_eq!(
        hecp(&["--out", path(dir.path()), "climate", path(&bad)])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn climate_scale_factor_applies() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.json");
    std::fs::write(
        &one,
        r#"[{"station":"GHCND:GME00102404","date":"2016-05-01","datatype":"TMAX","value":142}]"#,
    )
    .unwrap();
    ok(hecp(&[
        "--out",
        path(dir.path()),
        "--scale",
        "0.1",
        "climate",
        path(&one),
    ]));
    let text = std::fs::read_to_string(dir.path().join("climate.ttl")).unwrap();
    assert!(text.contains("\"14.2"), "{text}");
}

#[test]
fn query_tsv_matches_reference() {
    let dir = tempfile::tempdir().unwrap();
    let (c, w) = three_day_files(dir.path());
    let q = fixture_path("weather_join.rq");
    let tsv = ok(hecp(&["query", path(&c), path(&w), "-f", path(&q)]));
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines[0], "?eval\t?val\t?maxTprt\t?date");
    let expected = naive_query(&load_files(&[&c, &w]), &read_fixture("weather_join.rq"));
    assert_eq!(lines.len(), 1 + expected.len());
    assert_eq!(expected.len(), 3);
    for (line, row) in lines[1..].iter().zip(&expected) {
        let cells: Vec<String> = row
            .iter()
            .map(|t| t.as_ref().map(Term::to_string).unwrap_or_default())
            .collect();
        assert_eq!(*line, cells.join("\t"));
    }
}

#[test]
fn query_json_has_results_shape() {
    let dir = tempfile::tempdir().unwrap();
    let (c, w) = three_day_files(dir.path());
    let json = ok(hecp(&[
        "--format",
        "json",
        "query",
        path(&c),
        path(&w),
        "-f",
        path(&fixture_path("weather_join.rq")),
    ]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(
        v["head"]["vars"],
        serde_json::json!(["eval", "val", "maxTprt", "date"])
    );
    let bindings = v["results"]["bindings"].as_array().unwrap();
    assert_eq!(bindings.len(), 3);
    for b in bindings {
        assert_eq!(b["eval"]["type"], "uri");
        assert_eq!(b["val"]["type"], "literal");
        assert_eq!(
            b["val"]["datatype"],
            "http://www.w3.org/2001/XMLSchema#decimal"
        );
        assert_eq!(
            b["date"]["datatype"],
            "http://www.w3.org/2001/XMLSchema#dateTime"
        );
    }
}

#[test]
fn query_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.ttl");
    let out = hecp(&["query", path(&missing), "-e", "SELECT * WHERE { ?s ?p ?o }"]);
    assert_eq!(out.status.code(), Some(1));
    let (c, _) = three_day_files(dir.path());
    let out = hecp(&["query", path(&c), "-e", "SELEC * WHERE { ?s ?p ?o }"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hecp(&["query", path(&c)]);
    assert_eq!(out.status.code(), Some(1));
}

fn free_port() -> u16 {
    TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port()
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn spawn_server(files: &[&Path]) -> (Server, String) {
    let port = free_port();
    let bind = format!("127.0.0.1:{port}");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hecp"));
    cmd.env_clear().args(["--bind", &bind, "serve"]);
    for f in files {
        cmd.arg(f);
    }
    let child = cmd
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let server = Server(child);
    let url = format!("http://{bind}");
    let start = Instant::now();
    while reqwest::blocking::get(format!("{url}/health")).is_err() {
        assert!(
            start.elapsed() < Duration::from_secs(20),
            "server did not start"
        );
        std::thread::sleep(Duration::from_millis(50));
    }
    (server, url)
}

#[test]
fn serve_answers_like_query() {
    let dir = tempfile::tempdir().unwrap();
    let (c, w) = three_day_files(dir.path());
    let (_server, url) = spawn_server(&[&c, &w]);
    let health = reqwest::blocking::get(format!("{url}/health"))
        .unwrap()
        .text()
        .unwrap();
    assert_eq!(health, "ok");

    let q = read_fixture("weather_join.rq");
    let http = reqwest::blocking::Client::new()
        .post(format!("{url}/sparql"))
        .header("content-type", "application/sparql-query")
        .body(q.clone())
        .send()
        .unwrap();
    assert_eq!(http.status(), 200);
    let http_body = http.text().unwrap();
    let cli_body = ok(hecp(&[
        "--format",
        "json",
        "query",
        path(&c),
        path(&w),
        "-e",
        &q,
    ]));
    assert_eq!(http_body, cli_body);
}

#[test]
fn serve_bind_conflict_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let (c, _) = three_day_files(dir.path());
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let bind = taken.local_addr().unwrap().to_string();
    let out = hecp(&["--bind", &bind, "serve", path(&c)]);
    assert_eq!(out.status.code(), Some(1));
}

/// Writes the fixture's CoSSMic graph and default graph as two Turtle files.
fn write_store(ds: &Dataset, dir: &Path) -> (PathBuf, PathBuf) {
    let minter = Minter::default();
    let prefixes = PrefixMap::standard(Some(minter.base().clone()));
    let cossmic = dir.join("energy.ttl");
    let mut text = graph_comment(minter.cossmic_graph_iri());
    text.push_str(&serialize_turtle(ds, &minter.cossmic_graph(), &prefixes));
    std::fs::write(&cossmic, text).unwrap();
    let climate = dir.join("weather.ttl");
    std::fs::write(
        &climate,
        serialize_turtle(ds, &GraphName::Default, &prefixes),
    )
    .unwrap();
    (cossmic, climate)
}

#[test]
fn analyze_reports_linear_device() {
    let f = linear_fixture(30, 0.5, 3.0, 9);
    let dir = tempfile::tempdir().unwrap();
    let (c, w) = write_store(&f.dataset, dir.path());
    let out_dir = dir.path().join("report");
    let stdout = ok(hecp(&[
        "--out",
        path(&out_dir),
        "analyze",
        path(&c),
        path(&w),
    ]));
    assert_eq!(
        stdout,
        "device\tclimate_code\tpcc\tn\nDE_KN_residential1_heat_pump\tTMAX\t1.00\t30\n"
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("correlation.json")).unwrap())
            .unwrap();
    let entries = report["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert!((entries[0]["pcc"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    for name in [
        "scatter_pv.csv",
        "scatter_refrigerator_freezer.csv",
        "scatter_grid_import.csv",
    ] {
        assert!(out_dir.join(name).exists(), "{name}");
    }
    let freezer =
        std::fs::read_to_string(out_dir.join("scatter_refrigerator_freezer.csv")).unwrap();
    assert_eq!(freezer.lines().count(), 31);
    assert!(freezer.starts_with("device,date,energy_kwh,TMAX,prcp\n"));
}

#[test]
fn analyze_rejects_threshold_above_one() {
    let f = linear_fixture(5, 0.5, 3.0, 9);
    let dir = tempfile::tempdir().unwrap();
    let (c, w) = write_store(&f.dataset, dir.path());
    let out = hecp(&[
        "--out",
        path(dir.path()),
        "--threshold",
        "1.01",
        "analyze",
        path(&c),
        path(&w),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("threshold"));
}

#[test]
fn environment_and_config_file_precedence() {
    let f = linear_fixture(10, 0.5, 3.0, 9);
    let dir = tempfile::tempdir().unwrap();
    let (c, w) = write_store(&f.dataset, dir.path());
    let conf = dir.path().join("hecp.conf");
    std::fs::write(&conf, "threshold = 0.0\n").unwrap();
    let run = |env: &[(&str, &str)], extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_hecp"));
        cmd.env_clear().envs(env.iter().copied());
        cmd.args(["--config", path(&conf), "--out", path(dir.path())]);
        cmd.args(extra).args(["analyze", path(&c), path(&w)]);
        ok(cmd.output().unwrap()).lines().count()
    };
    // config file alone: both devices
    assert_eq!(run(&[], &[]), 3);
    // environment beats the file
    assert_eq!(run(&[("HECP_THRESHOLD", "0.9")], &[]), 2);
    // flag beats the environment
    assert_eq!(run(&[("HECP_THRESHOLD", "0.9")], &["--threshold", "0"]), 3);
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let (c, w) = three_day_files(dir);
        ok(hecp(&[
            "--out",
            path(&dir.join("r")),
            "--threshold",
            "0",
            "analyze",
            path(&c),
            path(&w),
        ]));
    }
    for name in [
        "cossmic.ttl",
        "climate.ttl",
        "r/correlation.tsv",
        "r/correlation.json",
        "r/categories.json",
        "r/scatter_pv.csv",
    ] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}
