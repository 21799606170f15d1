//! Seeded benchmark sweeps over embedders, written as CSV.
//!
//! One row per `(method, m, n, chip, fault seed)`. Deterministic methods report
//! `success` as 0 or 1. The heuristic baseline runs `trials` seeded attempts and
//! reports the success fraction, with chain statistics pooled over the
//! successful attempts and `steps` averaged over all attempts.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chimera::{ChimeraSpec, HardwareGraph};
use crate::cpcg::{bus_plan_on, required_size};
use crate::embedding::{chain_stats, Embedding};
use crate::error::{input, Error, Result};
use crate::fault_tolerant::{ft_cpcg_embed, FtConfig};
use crate::heuristic::{heuristic_embed, HeuristicParams};
use crate::io::write_atomic;
use crate::problem::{complete_graph, complete_product};
use crate::triangular::triangular_embed;
use crate::validate::validate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Cpcg,
    Triangular,
    Baseline,
    Ft,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Cpcg,
        Method::Triangular,
        Method::Baseline,
        Method::Ft,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cpcg => "cpcg",
            Method::Triangular => "triangular",
            Method::Baseline => "baseline",
            Method::Ft => "ft",
        }
    }

    /// Human-readable name for legends and summaries.
    pub fn title(self) -> &'static str {
        match self {
            Method::Cpcg => "CPCG",
            Method::Triangular => "triangular clique",
            Method::Baseline => "CMR-style baseline",
            Method::Ft => "fault-tolerant CPCG",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                Error::Input(format!(
                    "unknown method {s:?}; expected cpcg, triangular, baseline or ft"
                ))
            })
    }
}

/// One CSV record. Field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: String,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub chip_rows: usize,
    pub fault_seed: u64,
    pub dead_count: usize,
    pub success: f64,
    pub qubits: f64,
    pub chain_min: usize,
    pub chain_mean: f64,
    pub chain_max: usize,
    pub chain_stddev: f64,
    pub steps: u64,
    pub wall_ms: f64,
}

pub const CSV_COLUMNS: [&str; 15] = [
    "method",
    "m",
    "n",
    "L",
    "chip_rows",
    "fault_seed",
    "dead_count",
    "success",
    "qubits",
    "chain_min",
    "chain_mean",
    "chain_max",
    "chain_stddev",
    "steps",
    "wall_ms",
];

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub m: usize,
    pub ns: Vec<usize>,
    pub l: usize,
    /// Fixed chip side; `None` uses the product construction's size for each `n`.
    pub chip: Option<usize>,
    pub trials: u64,
    pub dead: usize,
    /// One sweep per fault seed; ignored when `dead == 0`.
    pub fault_seeds: Vec<u64>,
    pub heuristic: HeuristicParams,
    pub ft: FtConfig,
}

impl BenchConfig {
    pub fn new(methods: Vec<Method>, m: usize, ns: Vec<usize>, l: usize) -> Self {
        Self {
            methods,
            m,
            ns,
            l,
            chip: None,
            trials: 1,
            dead: 0,
            fault_seeds: vec![0],
            heuristic: HeuristicParams::default(),
            ft: FtConfig::default(),
        }
    }
}

/// Pooled chain statistics over several embeddings.
#[derive(Default)]
struct Pool {
    lengths: Vec<usize>,
    qubits: Vec<usize>,
}

impl Pool {
    fn add(&mut self, emb: &Embedding) {
        self.lengths.extend(emb.iter().map(|(_, c)| c.len()));
        self.qubits.push(emb.qubit_total());
    }

    fn fill(&self, row: &mut BenchRow) {
        if self.qubits.is_empty() {
            return;
        }
        let count = self.lengths.len() as f64;
        let mean = self.lengths.iter().sum::<usize>() as f64 / count;
        let var = self
            .lengths
            .iter()
            .map(|&l| (l as f64 - mean).powi(2))
            .sum::<f64>()
            / count;
        row.qubits = self.qubits.iter().sum::<usize>() as f64 / self.qubits.len() as f64;
        row.chain_min = self.lengths.iter().copied().min().unwrap_or(0);
        row.chain_max = self.lengths.iter().copied().max().unwrap_or(0);
        row.chain_mean = mean;
        row.chain_stddev = var.sqrt();
    }
}

fn blank(
    method: Method,
    cfg: &BenchConfig,
    n: usize,
    chip: usize,
    seed: u64,
    dead: usize,
) -> BenchRow {
    BenchRow {
        method: method.to_string(),
        m: cfg.m,
        n,
        l: cfg.l,
        chip_rows: chip,
        fault_seed: seed,
        dead_count: dead,
        success: 0.0,
        qubits: 0.0,
        chain_min: 0,
        chain_mean: 0.0,
        chain_max: 0,
        chain_stddev: 0.0,
        steps: 0,
        wall_ms: 0.0,
    }
}

fn single(row: &mut BenchRow, emb: Option<Embedding>, steps: u64) {
    if let Some(e) = emb {
        let s = chain_stats(&e);
        row.success = 1.0;
        row.qubits = s.qubit_total as f64;
        row.chain_min = s.chain_min;
        row.chain_max = s.chain_max;
        row.chain_mean = s.chain_mean;
        row.chain_stddev = s.chain_stddev;
    }
    row.steps = steps;
}

fn run_method(
    method: Method,
    cfg: &BenchConfig,
    n: usize,
    hw: &HardwareGraph,
    row: &mut BenchRow,
) -> Result<()> {
    let (m, spec) = (cfg.m, hw.spec());
    let product = complete_product(m, n)?;
    match method {
        Method::Cpcg => {
            // the ideal construction ignores faults; the validator decides success
            let built = bus_plan_on(spec, m, n).and_then(|p| Ok((p.embedding()?, p.steps)));
            match built {
                Ok((e, steps)) if validate(&product, hw, &e).is_valid() => {
                    single(row, Some(e), steps)
                }
                Ok((_, steps)) => single(row, None, steps),
                Err(_) => single(row, None, 0),
            }
        }
        Method::Triangular => {
            let clique = complete_graph(m * n)?;
            match triangular_embed(m * n, spec, (0, 0)) {
                Ok(e) if validate(&clique, hw, &e).is_valid() => {
                    let steps = e.qubit_total() as u64;
                    single(row, Some(e), steps)
                }
                _ => single(row, None, 0),
            }
        }
        Method::Ft => match ft_cpcg_embed(hw, m, n, &cfg.ft) {
            Ok(ft) => {
                let steps = (ft.embedding.qubit_total() + ft.wire_retries) as u64;
                single(row, Some(ft.embedding), steps)
            }
            Err(_) => single(row, None, 0),
        },
        Method::Baseline => {
            use rayon::prelude::*;
            let trials = cfg.trials.max(1);
            let outcomes: Vec<_> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let p = HeuristicParams {
                        seed: cfg.heuristic.seed.wrapping_add(t),
                        ..cfg.heuristic.clone()
                    };
                    heuristic_embed(&product, hw, &p)
                })
                .collect();
            let mut pool = Pool::default();
            for o in &outcomes {
                if let Some(e) = &o.embedding {
                    pool.add(e);
                }
            }
            row.success = pool.qubits.len() as f64 / trials as f64;
            row.steps = (outcomes.iter().map(|o| o.steps).sum::<u64>() as f64 / trials as f64)
                .round() as u64;
            pool.fill(row);
        }
    }
    Ok(())
}

/// Run every configured `(n, fault seed, method)` combination in that order.
pub fn bench_sweep(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.m == 0 || cfg.ns.is_empty() || cfg.methods.is_empty() {
        return input("bench needs m > 0, at least one n and one method");
    }
    let seeds: Vec<u64> = if cfg.dead == 0 {
        vec![0]
    } else {
        cfg.fault_seeds.clone()
    };
    let mut rows = Vec::new();
    for &n in &cfg.ns {
        let chip = cfg.chip.unwrap_or_else(|| required_size(cfg.m, n, cfg.l));
        let spec = ChimeraSpec::square(chip, cfg.l)?;
        for &seed in &seeds {
            let hw = HardwareGraph::with_random_faults(spec, cfg.dead, seed)?;
            for &method in &cfg.methods {
                let mut row = blank(method, cfg, n, chip, seed, cfg.dead);
                let start = Instant::now();
                run_method(method, cfg, n, &hw, &mut row)?;
                row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if headers != CSV_COLUMNS {
        return input(format!("unexpected CSV columns {}", headers.join(",")));
    }
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn write_csv(path: &Path, rows: &[BenchRow]) -> Result<()> {
    write_atomic(path, rows_to_csv(rows)?.as_bytes())
}

/// Parse `a..b` (inclusive), `a,b,c`, or a single value.
pub fn parse_range(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Input(format!("bad range {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect()
}
