//! Command-line driver: kicked-Ising sweeps over `θ_h` and oracle
//! cross-checks.
//!
//! Settings come from three layers, later ones winning: built-in defaults
//! and the selected panel preset, a `key=value` config file (`--config`),
//! and command-line flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{build_circuit, observable_preset, parse_observable, KickedIsingSpec, LatticeSpec};
use crate::clifford::{fold_with, FoldOptions, FoldedCircuit, RotationGate};
use crate::error::Error;
use crate::oracle;
use crate::pauli::{Pauli, PauliString};
use crate::spd::{run, run_sum, RunStats, SpdConfig};

/// Largest qubit count `verify` accepts.
pub const VERIFY_MAX_QUBITS: usize = 12;
/// `verify` passes when the untruncated run is this close to the oracle.
pub const VERIFY_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "spd", version, about = "Sparse Pauli dynamics for kicked-Ising circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep θ_h and write one row per point.
    Run(ConfigArgs),
    /// Compare truncated and untruncated runs against the statevector
    /// simulator (n <= 12).
    Verify(ConfigArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// key=value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Panel preset: a (Mz), b (weight-10), c (weight-17), d (weight-17,
    /// extra R_X layer), e (Z_62, 20 steps).
    #[arg(long)]
    pub preset: Option<String>,
    /// eagle127, chain:<n>, ring:<n>, heavy-hex:<d>, or a lattice file path.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Trotter steps.
    #[arg(long)]
    pub t: Option<String>,
    /// "k*pi/32:0..16" or a comma list such as "0.1,pi/4,3*pi/8".
    #[arg(long = "theta-grid")]
    pub theta_grid: Option<String>,
    /// Mz, Z_q:<index>, custom:<pauli>, or file:<path>.
    #[arg(long)]
    pub observable: Option<String>,
    /// Truncation order, or "inf".
    #[arg(long = "K")]
    pub k: Option<String>,
    /// on/off: fold the nearest quarter turn out of every angle.
    #[arg(long = "angle-transform")]
    pub angle_transform: Option<String>,
    /// on/off: append an R_X layer after the last step.
    #[arg(long = "extra-rx")]
    pub extra_rx: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Sweep points evaluated concurrently; each point is single-threaded.
    #[arg(long)]
    pub threads: Option<String>,
    /// Seed for the random observables used by `verify`.
    #[arg(long)]
    pub seed: Option<String>,
    /// Drop terms below this magnitude (0 disables).
    #[arg(long = "prune-threshold")]
    pub prune_threshold: Option<String>,
    /// Fail a point instead of letting it grow past this many terms.
    #[arg(long = "max-terms")]
    pub max_terms: Option<String>,
    /// Negate the non-Clifford angles on the sparse side only (negative
    /// control for `verify`).
    #[arg(long = "corrupt-phase", hide = true)]
    pub corrupt_phase: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub lattice: LatticeSpec,
    pub t: usize,
    pub thetas: Vec<f64>,
    pub observable_name: String,
    pub observable: Vec<(f64, PauliString)>,
    pub max_order: Option<u32>,
    pub angle_transform: bool,
    pub extra_rx: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: usize,
    pub seed: u64,
    pub prune_threshold: f64,
    pub max_terms: Option<usize>,
    pub corrupt_phase: bool,
}

struct Preset {
    t: usize,
    k: u32,
    extra_rx: bool,
    /// The quarter-turn angle transform is only used for the panels whose
    /// observables it reduces to single-qubit operators.
    angle_transform: bool,
    observable: Option<&'static str>,
}

fn preset_settings(name: &str) -> Result<Preset, CliError> {
    let p = |t, k, extra_rx, angle_transform, observable| Preset {
        t,
        k,
        extra_rx,
        angle_transform,
        observable,
    };
    Ok(match name {
        "a" => p(5, 10, false, false, Some("Mz")),
        "b" => p(5, 10, false, true, None),
        "c" => p(5, 6, false, true, None),
        "d" => p(5, 6, true, true, None),
        "e" => p(20, 10, false, false, Some("Z_q:62")),
        other => return Err(config_err(format!("unknown preset {other:?} (expected a-e)"))),
    })
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("config line {}: expected key=value", i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

const KNOWN_KEYS: &[&str] = &[
    "preset",
    "lattice",
    "t",
    "theta-grid",
    "observable",
    "K",
    "angle-transform",
    "extra-rx",
    "out",
    "format",
    "threads",
    "seed",
    "prune-threshold",
    "max-terms",
];

impl ConfigArgs {
    fn settings(&self) -> Result<BTreeMap<String, String>, CliError> {
        let mut map = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
                parse_config_file(&text)?
            }
            None => BTreeMap::new(),
        };
        if let Some(bad) = map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(config_err(format!("unknown config key {bad:?}")));
        }
        let flags = [
            ("preset", self.preset.clone()),
            ("lattice", self.lattice.clone()),
            ("t", self.t.clone()),
            ("theta-grid", self.theta_grid.clone()),
            ("observable", self.observable.clone()),
            ("K", self.k.clone()),
            ("angle-transform", self.angle_transform.clone()),
            ("extra-rx", self.extra_rx.clone()),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("format", self.format.clone()),
            ("threads", self.threads.clone()),
            ("seed", self.seed.clone()),
            ("prune-threshold", self.prune_threshold.clone()),
            ("max-terms", self.max_terms.clone()),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        }
        Ok(map)
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let map = self.settings()?;
        let get = |k: &str| map.get(k).map(String::as_str);

        let (mut t, mut k, mut extra, mut transform, mut obs) = (5usize, Some(10u32), false, true, Some("Mz"));
        if let Some(name) = get("preset") {
            let p = preset_settings(name)?;
            (t, k, extra, transform, obs) = (p.t, Some(p.k), p.extra_rx, p.angle_transform, p.observable);
        }
        if let Some(v) = get("t") {
            t = v.parse().map_err(|_| config_err(format!("bad t {v:?}")))?;
        }
        if let Some(v) = get("K") {
            k = parse_order(v)?;
        }
        if let Some(v) = get("extra-rx") {
            extra = parse_switch("extra-rx", v)?;
        }
        let angle_transform = match get("angle-transform") {
            Some(v) => parse_switch("angle-transform", v)?,
            None => transform,
        };
        let lattice = parse_lattice(get("lattice").unwrap_or("eagle127"))?;
        let observable_name = match get("observable").or(obs) {
            Some(o) => o.to_string(),
            None => {
                return Err(config_err(format!(
                    "preset {} needs --observable (the operator's site list is an input)",
                    get("preset").unwrap_or("?")
                )))
            }
        };
        let observable = parse_observable_spec(&observable_name, &lattice)?;
        let thetas = parse_theta_grid(get("theta-grid").unwrap_or("k*pi/32:0..16"))?;
        let format = match get("format").unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(config_err(format!("unknown format {other:?}"))),
        };
        let threads = match get("threads") {
            Some(v) => v
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| config_err(format!("bad thread count {v:?}")))?,
            None => 1,
        };
        let seed = match get("seed") {
            Some(v) => v.parse().map_err(|_| config_err(format!("bad seed {v:?}")))?,
            None => 0,
        };
        let prune_threshold = match get("prune-threshold") {
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite() && *x >= 0.0)
                .ok_or_else(|| config_err(format!("bad prune threshold {v:?}")))?,
            None => 0.0,
        };
        let max_terms = match get("max-terms") {
            Some(v) => Some(
                v.parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| config_err(format!("bad term budget {v:?}")))?,
            ),
            None => None,
        };
        Ok(RunConfig {
            lattice,
            t,
            thetas,
            observable_name,
            observable,
            max_order: k,
            angle_transform,
            extra_rx: extra,
            out: get("out").map(PathBuf::from),
            format,
            threads,
            seed,
            prune_threshold,
            max_terms,
            corrupt_phase: self.corrupt_phase,
        })
    }
}

fn parse_switch(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "on" | "true" | "1" | "yes" => Ok(true),
        "off" | "false" | "0" | "no" => Ok(false),
        _ => Err(config_err(format!("{key} expects on/off, got {v:?}"))),
    }
}

pub fn parse_order(v: &str) -> Result<Option<u32>, CliError> {
    match v {
        "inf" | "none" | "\u{221e}" => Ok(None),
        _ => v
            .parse()
            .map(Some)
            .map_err(|_| config_err(format!("bad truncation order {v:?}"))),
    }
}

pub fn parse_lattice(v: &str) -> Result<LatticeSpec, CliError> {
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| config_err(format!("bad lattice size in {v:?}")))
    };
    let lat = if v == "eagle127" {
        LatticeSpec::eagle127()
    } else if let Some(n) = v.strip_prefix("chain:") {
        LatticeSpec::chain(num(n)?).map_err(config_err)?
    } else if let Some(n) = v.strip_prefix("ring:") {
        LatticeSpec::ring(num(n)?).map_err(config_err)?
    } else if let Some(d) = v.strip_prefix("heavy-hex:") {
        LatticeSpec::heavy_hex(num(d)?).map_err(config_err)?
    } else {
        let path = v.strip_prefix("file:").unwrap_or(v);
        LatticeSpec::from_file(path).map_err(|e| config_err(format!("{path}: {e}")))?
    };
    Ok(lat)
}

pub fn parse_observable_spec(v: &str, lattice: &LatticeSpec) -> Result<Vec<(f64, PauliString)>, CliError> {
    if let Some(path) = v.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{path}: {e}")))?;
        parse_observable(&text, lattice.n()).map_err(config_err)
    } else {
        observable_preset(v, lattice).map_err(config_err)
    }
}

/// One angle: a number, `pi`, `pi/<d>`, `<m>*pi` or `<m>*pi/<d>`.
pub fn parse_angle(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || config_err(format!("bad angle {s:?}"));
    if let Ok(x) = s.parse::<f64>() {
        return if x.is_finite() { Ok(x) } else { Err(bad()) };
    }
    let (mult, rest) = match s.split_once("*pi") {
        Some((m, rest)) => (m.trim().parse::<f64>().map_err(|_| bad())?, rest),
        None => (1.0, s.strip_prefix("pi").ok_or_else(bad)?),
    };
    let div = match rest.trim() {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .and_then(|d| d.trim().parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(bad)?,
    };
    Ok(mult * PI / div)
}

/// `k*pi/<d>:<a>..<b>` (inclusive) or a comma-separated list of angles.
pub fn parse_theta_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("k*pi/") {
        let bad = || config_err(format!("bad theta grid {spec:?}"));
        let (div, range) = rest.split_once(':').ok_or_else(bad)?;
        let div: f64 = div.trim().parse().map_err(|_| bad())?;
        let (a, b) = range.split_once("..").ok_or_else(bad)?;
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b < a || div == 0.0 {
            return Err(bad());
        }
        return Ok((a..=b).map(|k| k as f64 * PI / div).collect());
    }
    let thetas: Vec<f64> = spec.split(',').map(parse_angle).collect::<Result<_, _>>()?;
    if thetas.is_empty() {
        return Err(config_err("empty theta grid"));
    }
    Ok(thetas)
}

/// One output row per sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub theta_h: f64,
    pub value: f64,
    #[serde(rename = "K")]
    pub k: Option<u32>,
    pub peak_terms: usize,
    pub gate_count: usize,
    pub wall_time_seconds: f64,
}

impl RunConfig {
    pub fn spd_config(&self) -> SpdConfig {
        SpdConfig {
            max_order: self.max_order,
            prune_threshold: self.prune_threshold,
            max_terms: self.max_terms,
        }
    }

    pub fn circuit(&self, theta_h: f64) -> Result<Vec<RotationGate>, Error> {
        build_circuit(&KickedIsingSpec {
            lattice: self.lattice.clone(),
            t: self.t,
            theta_h,
            extra_rx_layer: self.extra_rx,
        })
    }

    pub fn fold(&self, theta_h: f64, observable: &[(f64, PauliString)]) -> Result<FoldedCircuit, Error> {
        let circuit = self.circuit(theta_h)?;
        let mut folded = fold_with(
            &circuit,
            observable,
            FoldOptions {
                angle_transform: self.angle_transform,
            },
        )?;
        if self.corrupt_phase {
            folded.rotations = folded
                .rotations
                .into_iter()
                .map(|g| RotationGate::new(g.generator().clone(), -g.angle()))
                .collect::<Result<_, _>>()?;
        }
        Ok(folded)
    }
}

/// Evaluates `observable` at one angle. Multi-term observables run each term
/// separately and sum.
pub fn evaluate(
    cfg: &RunConfig,
    theta_h: f64,
    observable: &[(f64, PauliString)],
    spd: &SpdConfig,
) -> Result<(f64, RunStats), Error> {
    let folded = cfg.fold(theta_h, observable)?;
    if folded.observable_terms.len() == 1 {
        run(&folded, spd)
    } else {
        run_sum(&folded.split_terms(), spd)
    }
}

fn evaluate_row(cfg: &RunConfig, theta_h: f64) -> Result<Row, Error> {
    let (value, stats) = evaluate(cfg, theta_h, &cfg.observable, &cfg.spd_config())?;
    if cfg.observable_name == "Mz" && value.abs() > 1.0 + 1e-9 {
        return Err(Error::Contract(format!(
            "magnetization {value} outside [-1, 1] at theta_h = {theta_h}"
        )));
    }
    info!(
        "theta_h={theta_h:.6} value={value:.10} peak_terms={} gates={} wall={:.3}s",
        stats.peak_terms, stats.gate_count, stats.wall_time_seconds
    );
    Ok(Row {
        theta_h,
        // Normalise -0.0 so output files do not depend on the sign of zero.
        value: value + 0.0,
        k: cfg.max_order,
        peak_terms: stats.peak_terms,
        gate_count: stats.gate_count,
        wall_time_seconds: stats.wall_time_seconds,
    })
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(config_err)?;
    Ok(pool.install(f))
}

/// Runs the sweep and writes the result file (or stdout).
pub fn cmd_run(cfg: &RunConfig) -> Result<Vec<Row>, CliError> {
    let rows = in_pool(cfg.threads, || {
        cfg.thetas
            .par_iter()
            .map(|&th| evaluate_row(cfg, th))
            .collect::<Result<Vec<_>, _>>()
    })??;
    match &cfg.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(Error::from)?;
            write_rows(&rows, cfg.format, file)?;
        }
        None => write_rows(&rows, cfg.format, std::io::stdout().lock())?,
    }
    Ok(rows)
}

pub fn write_rows(rows: &[Row], format: Format, mut out: impl Write) -> Result<(), Error> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(e.into()))?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Io(e.into()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn read_rows_csv(text: &str) -> Result<Vec<Row>, Error> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Io(e.into()))
}

pub fn read_rows_json(text: &str) -> Result<Vec<Row>, Error> {
    serde_json::from_str(text).map_err(|e| Error::Io(e.into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyPoint {
    pub theta_h: f64,
    pub observable: String,
    pub oracle: f64,
    pub truncated: f64,
    pub exact: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub points: Vec<VerifyPoint>,
    pub max_dev_truncated: f64,
    pub max_dev_exact: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.max_dev_exact < VERIFY_TOL
    }
}

/// Random Hermitian strings of weight 1 to 3, deterministic in `seed`.
pub fn random_observables(n: usize, count: usize, seed: u64) -> Vec<(f64, PauliString)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qubits: Vec<usize> = (0..n).collect();
    (0..count)
        .map(|_| {
            let w = rng.gen_range(1..=3.min(n));
            let mut p = PauliString::identity(n);
            for &q in qubits.choose_multiple(&mut rng, w) {
                let l = [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)];
                p.set(q, l).expect("qubit in range");
            }
            (1.0, p)
        })
        .collect()
}

/// Cross-checks the configured observable and a few seeded random ones
/// against the statevector simulator at every grid angle.
pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let n = cfg.lattice.n();
    if n > VERIFY_MAX_QUBITS {
        return Err(config_err(format!(
            "verify is limited to {VERIFY_MAX_QUBITS} qubits, lattice has {n}"
        )));
    }
    let mut observables = vec![(cfg.observable_name.clone(), cfg.observable.clone())];
    for (c, p) in random_observables(n, 4, cfg.seed) {
        observables.push((p.to_sparse_string(), vec![(c, p)]));
    }
    let truncated = cfg.spd_config();
    let exact = SpdConfig {
        max_order: None,
        ..truncated
    };
    let mut points = Vec::new();
    for &theta_h in &cfg.thetas {
        let circuit = cfg.circuit(theta_h)?;
        for (name, obs) in &observables {
            let reference = oracle::expectation(&circuit, obs)?;
            let (tv, _) = evaluate(cfg, theta_h, obs, &truncated)?;
            let (ev, _) = evaluate(cfg, theta_h, obs, &exact)?;
            points.push(VerifyPoint {
                theta_h,
                observable: name.clone(),
                oracle: reference,
                truncated: tv,
                exact: ev,
            });
        }
    }
    let max_dev = |f: fn(&VerifyPoint) -> f64| {
        points
            .iter()
            .map(|p| (f(p) - p.oracle).abs())
            .fold(0.0, f64::max)
    };
    Ok(VerifyReport {
        max_dev_truncated: max_dev(|p| p.truncated),
        max_dev_exact: max_dev(|p| p.exact),
        points,
    })
}

fn print_verify(report: &VerifyReport, k: Option<u32>) {
    let k = k.map_or("inf".to_string(), |k| k.to_string());
    println!("theta_h,observable,oracle,spd_K{k},spd_Kinf");
    for p in &report.points {
        println!(
            "{},{},{},{},{}",
            p.theta_h, p.observable, p.oracle, p.truncated, p.exact
        );
    }
    println!("max |SPD(K={k}) - oracle| = {:e}", report.max_dev_truncated);
    println!("max |SPD(K=inf) - oracle| = {:e}", report.max_dev_exact);
    println!(
        "{} (tolerance {VERIFY_TOL:e})",
        if report.passed() { "PASS" } else { "FAIL" }
    );
}

/// Entry point shared by the binary and tests; returns the process exit code.
pub fn main_with(cli: Cli) -> u8 {
    let (args, verify) = match cli.command {
        Command::Run(a) => (a, false),
        Command::Verify(a) => (a, true),
    };
    let result = args.resolve().and_then(|cfg| {
        if verify {
            let report = cmd_verify(&cfg)?;
            print_verify(&report, cfg.max_order);
            Ok(if report.passed() { 0 } else { 1 })
        } else {
            cmd_run(&cfg).map(|_| 0)
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("spd: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(main_with(Cli::parse()))
}
