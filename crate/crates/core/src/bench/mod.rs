// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Benchmark harness: routes every (circuit, router) pair over a fixed set of seeds and reports
//! mean statistics as CSV rows, plus a geometric-mean summary per router.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::circuit::qasm::parse_qasm;
use crate::circuit::{Circuit, GateKind};
use crate::routing::{full_pipeline, Algorithm, DistanceKind, RouterConfig};
use crate::topology::{load_coupling, CouplingMap, NoiseProfile, TopologyError};
use crate::Error;

/// CX error assumed by [`run_bench`] when a router has no noise profile.
pub const DEFAULT_CX_ERROR: f64 = 0.01;

fn default_trials() -> usize {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub circuits: Vec<PathBuf>,
    pub topology: String,
    pub routers: Vec<RouterConfig>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub output: PathBuf,
}

impl BenchSpec {
    /// Read a spec; relative paths are taken relative to the spec file.
    pub fn load(path: &Path) -> Result<BenchSpec, Error> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut spec: BenchSpec = serde_json::from_str(&text).map_err(|e| Error::Format {
            what: "bench spec".into(),
            reason: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for c in &mut spec.circuits {
            if c.is_relative() {
                *c = base.join(&*c);
            }
        }
        if spec.output.is_relative() {
            spec.output = base.join(&spec.output);
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |reason: &str| Error::Format {
            what: "bench spec".into(),
            reason: reason.to_string(),
        };
        if self.trials == 0 {
            return Err(bad("trials must be at least 1"));
        }
        if self.circuits.is_empty() {
            return Err(bad("no circuits"));
        }
        if self.routers.is_empty() {
            return Err(bad("no routers"));
        }
        Ok(())
    }
}

/// One CSV row: the mean over trials for one circuit and router, or a geometric-mean summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    pub router: String,
    pub qubits: Option<usize>,
    pub cnot_total_orig: Option<f64>,
    pub cnot_total: Option<f64>,
    pub cnot_add: Option<f64>,
    pub depth_total: Option<f64>,
    pub depth_add: Option<f64>,
    pub wall_time_s: Option<f64>,
    pub delta_cnot_total: Option<f64>,
    pub delta_cnot_add: Option<f64>,
    pub swaps_opt_fraction_2q: Option<f64>,
    pub swaps_opt_fraction_commute: Option<f64>,
    pub est_fidelity: Option<f64>,
    pub error: Option<String>,
}

impl BenchRow {
    fn empty(name: String, router: String) -> BenchRow {
        BenchRow {
            name,
            router,
            qubits: None,
            cnot_total_orig: None,
            cnot_total: None,
            cnot_add: None,
            depth_total: None,
            depth_add: None,
            wall_time_s: None,
            delta_cnot_total: None,
            delta_cnot_add: None,
            swaps_opt_fraction_2q: None,
            swaps_opt_fraction_commute: None,
            est_fidelity: None,
            error: None,
        }
    }

    pub fn is_summary(&self) -> bool {
        self.name == SUMMARY_NAME
    }
}

pub const SUMMARY_NAME: &str = "geomean";

/// Short router name used in the `router` column.
pub fn router_label(cfg: &RouterConfig) -> String {
    let mut s = match cfg.algorithm {
        Algorithm::Sabre => "sabre".to_string(),
        Algorithm::Nassc => {
            let o = cfg.opts;
            let on: Vec<&str> = [(o.b_2q, "2q"), (o.b_commute1, "c1"), (o.b_commute2, "c2")]
                .iter()
                .filter(|(b, _)| *b)
                .map(|(_, n)| *n)
                .collect();
            if on.len() == 3 {
                "nassc".to_string()
            } else {
                format!("nassc[{}]", on.join("+"))
            }
        }
    };
    if matches!(cfg.distance, DistanceKind::Noise { .. }) {
        s.push_str("+ha");
    }
    s
}

/// Product of `1 - ε` over the CX gates of a physical circuit.
pub fn estimate_fidelity(c: &Circuit, profile: &NoiseProfile) -> Result<f64, TopologyError> {
    let table = profile.edge_table();
    let mut f = 1.0;
    for g in c.gates().iter().filter(|g| g.kind == GateKind::CX) {
        let (a, b) = (g.qubits[0], g.qubits[1]);
        let e = table
            .get(&(a.min(b), a.max(b)))
            .ok_or(TopologyError::MissingEdgeData(a, b))?;
        f *= 1.0 - e.cx_error;
    }
    Ok(f)
}

#[derive(Clone, Debug, Default)]
struct Totals {
    cnot_total_orig: f64,
    cnot_total: f64,
    cnot_add: f64,
    depth_total: f64,
    depth_add: f64,
    wall: f64,
    frac_2q: f64,
    frac_commute: f64,
    fidelity: f64,
}

fn run_one(
    c: &Circuit,
    map: &CouplingMap,
    cfg: &RouterConfig,
    trials: usize,
    uniform: &NoiseProfile,
) -> Result<Totals, Error> {
    let profile = match &cfg.distance {
        DistanceKind::Noise { profile } => profile,
        DistanceKind::Hops => uniform,
    };
    let mut t = Totals::default();
    for seed in 0..trials as u64 {
        let r = full_pipeline(c, map, &RouterConfig { seed, ..cfg.clone() })?;
        let s = &r.stats;
        let frac = |k: usize| if s.swaps_inserted == 0 { 0.0 } else { k as f64 / s.swaps_inserted as f64 };
        t.cnot_total_orig += s.cnot_total_orig as f64;
        t.cnot_total += s.cnot_total as f64;
        t.cnot_add += s.cnot_add as f64;
        t.depth_total += s.depth_total as f64;
        t.depth_add += s.depth_add as f64;
        t.wall += s.wall_time_s;
        t.frac_2q += frac(s.swaps_opt_by_2q);
        t.frac_commute += frac(s.swaps_opt_by_commute);
        t.fidelity += estimate_fidelity(&r.circuit, profile)?;
    }
    let k = trials as f64;
    for v in [
        &mut t.cnot_total_orig,
        &mut t.cnot_total,
        &mut t.cnot_add,
        &mut t.depth_total,
        &mut t.depth_add,
        &mut t.wall,
        &mut t.frac_2q,
        &mut t.frac_commute,
        &mut t.fidelity,
    ] {
        *v /= k;
    }
    Ok(t)
}

fn circuit_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn ratio_delta(nassc: Option<f64>, sabre: Option<f64>) -> Option<f64> {
    match (nassc, sabre) {
        (Some(n), Some(s)) if s > 0.0 => Some(1.0 - n / s),
        _ => None,
    }
}

/// `1 - geomean(1 - δ)`, skipping missing or non-positive ratios.
pub fn geomean_delta(deltas: impl IntoIterator<Item = Option<f64>>) -> Option<f64> {
    let logs: Vec<f64> = deltas
        .into_iter()
        .flatten()
        .map(|d| 1.0 - d)
        .filter(|r| *r > 0.0)
        .map(f64::ln)
        .collect();
    if logs.is_empty() {
        return None;
    }
    Some(1.0 - (logs.iter().sum::<f64>() / logs.len() as f64).exp())
}

fn baseline_of(routers: &[RouterConfig], i: usize) -> Option<usize> {
    routers
        .iter()
        .position(|r| r.algorithm == Algorithm::Sabre && r.distance == routers[i].distance)
        .filter(|&b| b != i)
}

/// Route every circuit with every router over seeds `0..trials`. Failures become rows with the
/// `error` column set. Rows are ordered by circuit, then router, then one summary row per router
/// that has a SABRE baseline.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>, Error> {
    spec.validate()?;
    let map = load_coupling(&spec.topology)?;
    run_bench_on(spec, &map)
}

/// [`run_bench`] with an already-loaded coupling map.
pub fn run_bench_on(spec: &BenchSpec, map: &CouplingMap) -> Result<Vec<BenchRow>, Error> {
    let uniform = NoiseProfile::uniform(map, DEFAULT_CX_ERROR, 1.0);
    let circuits: Vec<(String, Result<Circuit, Error>)> = spec
        .circuits
        .iter()
        .map(|p| {
            let c = std::fs::read_to_string(p)
                .map_err(|source| Error::Io {
                    path: p.display().to_string(),
                    source,
                })
                .and_then(|t| Ok(parse_qasm(&t)?));
            (circuit_name(p), c)
        })
        .collect();
    let nr = spec.routers.len();
    let jobs = circuits.len() * nr;
    let results: Mutex<Vec<Option<Result<Totals, String>>>> = Mutex::new(vec![None; jobs]);
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                if j >= jobs {
                    break;
                }
                let (ci, ri) = (j / nr, j % nr);
                let out = match &circuits[ci].1 {
                    Ok(c) => run_one(c, map, &spec.routers[ri], spec.trials, &uniform)
                        .map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                };
                results.lock().unwrap()[j] = Some(out);
            });
        }
    });
    let results: Vec<Result<Totals, String>> =
        results.into_inner().unwrap().into_iter().map(|r| r.unwrap()).collect();

    let mut rows = Vec::with_capacity(jobs + nr);
    for (ci, (name, c)) in circuits.iter().enumerate() {
        for (ri, cfg) in spec.routers.iter().enumerate() {
            let mut row = BenchRow::empty(name.clone(), router_label(cfg));
            row.qubits = c.as_ref().ok().map(|c| c.num_qubits);
            match &results[ci * nr + ri] {
                Ok(t) => {
                    row.cnot_total_orig = Some(t.cnot_total_orig);
                    row.cnot_total = Some(t.cnot_total);
                    row.cnot_add = Some(t.cnot_add);
                    row.depth_total = Some(t.depth_total);
                    row.depth_add = Some(t.depth_add);
                    row.wall_time_s = Some(t.wall);
                    row.swaps_opt_fraction_2q = Some(t.frac_2q);
                    row.swaps_opt_fraction_commute = Some(t.frac_commute);
                    row.est_fidelity = Some(t.fidelity);
                }
                Err(e) => row.error = Some(e.clone()),
            }
            rows.push(row);
        }
        for ri in 0..nr {
            if let Some(b) = baseline_of(&spec.routers, ri) {
                let (i, bi) = (rows.len() - nr + ri, rows.len() - nr + b);
                let (nrow, brow) = (&rows[i], &rows[bi]);
                let d_total = ratio_delta(nrow.cnot_total, brow.cnot_total);
                let d_add = ratio_delta(nrow.cnot_add, brow.cnot_add);
                rows[i].delta_cnot_total = d_total;
                rows[i].delta_cnot_add = d_add;
            }
        }
    }
    for (ri, cfg) in spec.routers.iter().enumerate() {
        if baseline_of(&spec.routers, ri).is_none() {
            continue;
        }
        let label = router_label(cfg);
        let mine: Vec<&BenchRow> = rows
            .iter()
            .skip(ri)
            .step_by(nr)
            .take(circuits.len())
            .collect();
        let mut row = BenchRow::empty(SUMMARY_NAME.to_string(), label);
        row.delta_cnot_total = geomean_delta(mine.iter().map(|r| r.delta_cnot_total));
        row.delta_cnot_add = geomean_delta(mine.iter().map(|r| r.delta_cnot_add));
        rows.push(row);
    }
    Ok(rows)
}

/// Serialize rows as CSV with a fixed header.
pub fn to_csv(rows: &[BenchRow]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format {
            what: "csv".into(),
            reason: e.to_string(),
        })?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format {
        what: "csv".into(),
        reason: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_csv(rows: &[BenchRow], path: &Path) -> Result<(), Error> {
    std::fs::write(path, to_csv(rows)?).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_csv(text: &str) -> Result<Vec<BenchRow>, Error> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<BenchRow>, _>>()
        .map_err(|e| Error::Format {
            what: "csv".into(),
            reason: e.to_string(),
        })
}
