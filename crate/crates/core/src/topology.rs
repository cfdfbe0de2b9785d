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

//! Device connectivity and distance matrices.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

const MONTREAL_JSON: &str = include_str!("../fixtures/montreal.json");

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TopologyError {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("coupling graph is disconnected")]
    DisconnectedGraph,
    #[error("no noise data for edge ({0}, {1})")]
    MissingEdgeData(usize, usize),
    #[error("self-loop on qubit {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) references a qubit outside the device")]
    EdgeOutOfRange(usize, usize),
    #[error("unknown coupling map `{0}`")]
    UnknownMap(String),
    #[error("bad topology file: {0}")]
    Json(String),
}

/// Undirected coupling graph over `num_physical_qubits` wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingMap {
    num_physical_qubits: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct CouplingFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl CouplingMap {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, TopologyError> {
        if n < 2 {
            return Err(TopologyError::InvalidSize(format!("{n} qubits")));
        }
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(TopologyError::SelfLoop(a));
            }
            if a >= n || b >= n {
                return Err(TopologyError::EdgeOutOfRange(a, b));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(TopologyError::DuplicateEdge(a, b));
            }
        }
        let edges: Vec<_> = seen.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(CouplingMap {
            num_physical_qubits: n,
            edges,
            adjacency,
        })
    }

    pub fn num_physical_qubits(&self) -> usize {
        self.num_physical_qubits
    }

    /// Edges as `(low, high)` pairs in sorted order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.num_physical_qubits && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        bfs(self, 0).iter().all(|d| d.is_some())
    }

    pub fn from_json(text: &str) -> Result<Self, TopologyError> {
        let f: CouplingFile =
            serde_json::from_str(text).map_err(|e| TopologyError::Json(e.to_string()))?;
        CouplingMap::new(f.n, f.edges.into_iter().map(|[a, b]| (a, b)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CouplingFile {
            n: self.num_physical_qubits,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        })
        .expect("coupling map serializes")
    }

    pub fn linear(n: usize) -> Result<Self, TopologyError> {
        builtin_map(Builtin::Linear(n))
    }

    pub fn grid(rows: usize, cols: usize) -> Result<Self, TopologyError> {
        builtin_map(Builtin::Grid(rows, cols))
    }

    pub fn montreal() -> Self {
        builtin_map(Builtin::Montreal).expect("montreal fixture is valid")
    }
}

/// Named device topologies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// The 27-qubit heavy-hex montreal layout.
    Montreal,
    Linear(usize),
    Grid(usize, usize),
}

impl FromStr for Builtin {
    type Err = TopologyError;

    /// Accepts `montreal`, `montreal_heavy_hex_27`, `linear(n)`, `linear:n`, `grid(r,c)`,
    /// `grid:r,c` and `grid:rxc`.
    fn from_str(s: &str) -> Result<Self, TopologyError> {
        let unknown = || TopologyError::UnknownMap(s.to_string());
        let s_trim = s.trim();
        if s_trim == "montreal" || s_trim == "montreal_heavy_hex_27" {
            return Ok(Builtin::Montreal);
        }
        let (name, args) = if let Some((n, rest)) = s_trim.split_once('(') {
            (n, rest.strip_suffix(')').ok_or_else(unknown)?)
        } else if let Some((n, rest)) = s_trim.split_once(':') {
            (n, rest)
        } else {
            return Err(unknown());
        };
        let nums: Vec<usize> = args
            .split([',', 'x'])
            .map(|t| t.trim().parse().map_err(|_| unknown()))
            .collect::<Result<_, _>>()?;
        match (name.trim(), nums.as_slice()) {
            ("linear", [n]) => Ok(Builtin::Linear(*n)),
            ("grid", [r, c]) => Ok(Builtin::Grid(*r, *c)),
            _ => Err(unknown()),
        }
    }
}

pub fn builtin_map(name: Builtin) -> Result<CouplingMap, TopologyError> {
    match name {
        Builtin::Montreal => CouplingMap::from_json(MONTREAL_JSON),
        Builtin::Linear(n) => {
            if n < 2 {
                return Err(TopologyError::InvalidSize(format!("linear({n})")));
            }
            CouplingMap::new(n, (0..n - 1).map(|i| (i, i + 1)))
        }
        Builtin::Grid(r, c) => {
            if r * c < 2 {
                return Err(TopologyError::InvalidSize(format!("grid({r},{c})")));
            }
            let id = |i: usize, j: usize| i * c + j;
            let mut edges = Vec::new();
            for i in 0..r {
                for j in 0..c {
                    if j + 1 < c {
                        edges.push((id(i, j), id(i, j + 1)));
                    }
                    if i + 1 < r {
                        edges.push((id(i, j), id(i + 1, j)));
                    }
                }
            }
            CouplingMap::new(r * c, edges)
        }
    }
}

/// Resolve a builtin name or a path to a coupling JSON file.
pub fn load_coupling(spec: &str) -> Result<CouplingMap, crate::Error> {
    if let Ok(b) = spec.parse::<Builtin>() {
        return Ok(builtin_map(b)?);
    }
    let text = std::fs::read_to_string(spec).map_err(|source| crate::Error::Io {
        path: spec.to_string(),
        source,
    })?;
    Ok(CouplingMap::from_json(&text)?)
}

/// Symmetric all-pairs distances.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }
}

fn bfs(m: &CouplingMap, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; m.num_physical_qubits];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in m.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Hop counts between every pair of physical qubits.
pub fn all_pairs_distance(m: &CouplingMap) -> Result<DistanceMatrix, TopologyError> {
    let n = m.num_physical_qubits;
    let mut d = Vec::with_capacity(n * n);
    for src in 0..n {
        for x in bfs(m, src) {
            d.push(x.ok_or(TopologyError::DisconnectedGraph)? as f64);
        }
    }
    Ok(DistanceMatrix { n, d })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeNoise {
    pub a: usize,
    pub b: usize,
    pub cx_error: f64,
    #[serde(default)]
    pub swap_time: f64,
}

/// Per-edge calibration data plus the weights of the noise-aware distance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseProfile {
    pub edges: Vec<EdgeNoise>,
    #[serde(default = "default_alphas")]
    pub alphas: [f64; 3],
}

fn default_alphas() -> [f64; 3] {
    [0.5, 0.0, 0.5]
}

impl NoiseProfile {
    /// Same error and SWAP time on every edge of `m`.
    pub fn uniform(m: &CouplingMap, cx_error: f64, swap_time: f64) -> NoiseProfile {
        NoiseProfile {
            edges: m
                .edges()
                .iter()
                .map(|&(a, b)| EdgeNoise {
                    a,
                    b,
                    cx_error,
                    swap_time,
                })
                .collect(),
            alphas: default_alphas(),
        }
    }

    pub fn from_json(text: &str) -> Result<NoiseProfile, TopologyError> {
        let p: NoiseProfile =
            serde_json::from_str(text).map_err(|e| TopologyError::Json(e.to_string()))?;
        if p.alphas.iter().any(|&a| a < 0.0 || !a.is_finite()) {
            return Err(TopologyError::Json("alphas must be nonnegative".into()));
        }
        Ok(p)
    }

    pub fn load(path: &str) -> Result<NoiseProfile, crate::Error> {
        let text = std::fs::read_to_string(path).map_err(|source| crate::Error::Io {
            path: path.to_string(),
            source,
        })?;
        Ok(NoiseProfile::from_json(&text)?)
    }

    /// Lookup keyed by the unordered pair.
    pub fn edge_table(&self) -> HashMap<(usize, usize), &EdgeNoise> {
        self.edges
            .iter()
            .map(|e| ((e.a.min(e.b), e.a.max(e.b)), e))
            .collect()
    }

    pub fn cx_error(&self, a: usize, b: usize) -> Option<f64> {
        self.edges
            .iter()
            .find(|e| (e.a, e.b) == (a, b) || (e.a, e.b) == (b, a))
            .map(|e| e.cx_error)
    }
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Weighted shortest paths with edge weight `a1*cx_error + a2*swap_time + a3`.
pub fn noise_distance(m: &CouplingMap, p: &NoiseProfile) -> Result<DistanceMatrix, TopologyError> {
    let table = p.edge_table();
    let [a1, a2, a3] = p.alphas;
    let n = m.num_physical_qubits;
    let mut weight = HashMap::new();
    for &(a, b) in m.edges() {
        let e = table.get(&(a, b)).ok_or(TopologyError::MissingEdgeData(a, b))?;
        weight.insert((a, b), a1 * e.cx_error + a2 * e.swap_time + a3);
    }
    let w = |u: usize, v: usize| weight[&(u.min(v), u.max(v))];
    let mut d = vec![f64::INFINITY; n * n];
    for src in 0..n {
        let row = &mut d[src * n..(src + 1) * n];
        row[src] = 0.0;
        let mut heap = BinaryHeap::from([Entry(0.0, src)]);
        while let Some(Entry(du, u)) = heap.pop() {
            if du > row[u] {
                continue;
            }
            for &v in m.neighbors(u) {
                let nd = du + w(u, v);
                if nd < row[v] {
                    row[v] = nd;
                    heap.push(Entry(nd, v));
                }
            }
        }
        if row.iter().any(|x| x.is_infinite()) {
            return Err(TopologyError::DisconnectedGraph);
        }
    }
    Ok(DistanceMatrix { n, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shapes() {
        let l = CouplingMap::linear(3).unwrap();
        assert_eq!(l.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(CouplingMap::grid(2, 2).unwrap().edges().len(), 4);
        assert_eq!(CouplingMap::grid(5, 5).unwrap().edges().len(), 40);
        assert!(matches!(CouplingMap::linear(1), Err(TopologyError::InvalidSize(_))));
        assert!(matches!(CouplingMap::grid(1, 1), Err(TopologyError::InvalidSize(_))));
    }

    #[test]
    fn montreal_fixture() {
        let m = CouplingMap::montreal();
        assert_eq!(m.num_physical_qubits(), 27);
        assert_eq!(m.edges().len(), 28);
        let mut hist = [0usize; 4];
        for q in 0..27 {
            hist[m.degree(q)] += 1;
        }
        // heavy-hex: 6 leaves, 13 chain links, 8 junctions
        assert_eq!(hist, [0, 6, 13, 8]);
        assert!(m.is_connected());
    }

    #[test]
    fn parse_names() {
        assert_eq!("montreal".parse::<Builtin>().unwrap(), Builtin::Montreal);
        assert_eq!("linear(25)".parse::<Builtin>().unwrap(), Builtin::Linear(25));
        assert_eq!("linear:4".parse::<Builtin>().unwrap(), Builtin::Linear(4));
        assert_eq!("grid(5,5)".parse::<Builtin>().unwrap(), Builtin::Grid(5, 5));
        assert_eq!("grid:3x4".parse::<Builtin>().unwrap(), Builtin::Grid(3, 4));
        assert!("ring(4)".parse::<Builtin>().is_err());
    }

    #[test]
    fn invalid_edges() {
        assert_eq!(CouplingMap::new(3, [(1, 1)]), Err(TopologyError::SelfLoop(1)));
        assert_eq!(
            CouplingMap::new(3, [(0, 1), (1, 0)]),
            Err(TopologyError::DuplicateEdge(1, 0))
        );
        assert_eq!(CouplingMap::new(3, [(0, 3)]), Err(TopologyError::EdgeOutOfRange(0, 3)));
    }

    #[test]
    fn hop_distances() {
        let d = all_pairs_distance(&CouplingMap::linear(3).unwrap()).unwrap();
        assert_eq!(d.get(0, 2), 2.0);
        let d = all_pairs_distance(&CouplingMap::grid(2, 2).unwrap()).unwrap();
        assert_eq!(d.get(0, 3), 2.0);
        let d = all_pairs_distance(&CouplingMap::linear(25).unwrap()).unwrap();
        assert_eq!(d.get(0, 24), 24.0);
        let m = CouplingMap::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(all_pairs_distance(&m), Err(TopologyError::DisconnectedGraph));
    }

    #[test]
    fn noise_weighted() {
        let m = CouplingMap::linear(3).unwrap();
        let d = noise_distance(&m, &NoiseProfile::uniform(&m, 0.0, 0.0)).unwrap();
        assert!((d.get(0, 2) - 1.0).abs() < 1e-15);
        let mut p = NoiseProfile::uniform(&m, 0.0, 0.0);
        p.edges[0].cx_error = 0.1;
        p.edges[1].cx_error = 0.3;
        let d = noise_distance(&m, &p).unwrap();
        assert!((d.get(0, 2) - 1.20).abs() < 1e-12);
        assert!((d.get(2, 0) - 1.20).abs() < 1e-12);
    }

    #[test]
    fn noise_prefers_cheap_detour() {
        // square 0-1-2-3-0 with one very noisy edge (0,1)
        let m = CouplingMap::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut p = NoiseProfile::uniform(&m, 0.0, 0.0);
        p.alphas = [1.0, 0.0, 1.0];
        for e in &mut p.edges {
            if (e.a, e.b) == (0, 1) {
                e.cx_error = 5.0;
            }
        }
        let d = noise_distance(&m, &p).unwrap();
        assert!((d.get(0, 1) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn missing_edge_data() {
        let m = CouplingMap::linear(3).unwrap();
        let mut p = NoiseProfile::uniform(&m, 0.0, 0.0);
        p.edges.pop();
        assert_eq!(noise_distance(&m, &p), Err(TopologyError::MissingEdgeData(1, 2)));
    }

    #[test]
    fn json_round_trip() {
        let m = CouplingMap::grid(2, 3).unwrap();
        assert_eq!(CouplingMap::from_json(&m.to_json()).unwrap(), m);
        let p = NoiseProfile::from_json(r#"{"edges":[{"a":0,"b":1,"cx_error":0.01,"swap_time":3}]}"#)
            .unwrap();
        assert_eq!(p.alphas, [0.5, 0.0, 0.5]);
        assert_eq!(p.cx_error(1, 0), Some(0.01));
    }
}
