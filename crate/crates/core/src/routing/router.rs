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

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CircuitDag, Gate, GateKind, NodeId};
use crate::commutation::{
    commutation_analysis, gates_commute, DecompositionLabel, LabelReason, COMMUTE_SET_CAP,
};
use crate::synthesis::{collect_blocks, cx_cost, pair_unitary, predict_c2q};
use crate::topology::{CouplingMap, DistanceMatrix};

use super::{OptFlags, QubitMapping, RouterConfig, RoutingError};

const TIE_TOL: f64 = 1e-10;

/// A SWAP on a coupling edge considered for insertion, with its predicted CX reductions.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapCandidate {
    pub edge: (usize, usize),
    pub c2q: usize,
    pub ccommute1: usize,
    pub ccommute2: usize,
    pub label: DecompositionLabel,
    pub cost: f64,
    /// Earlier SWAP that shares the label when `ccommute2` applies.
    sandwich: Option<usize>,
}

impl SwapCandidate {
    fn plain(edge: (usize, usize)) -> SwapCandidate {
        SwapCandidate {
            edge,
            c2q: 0,
            ccommute1: 0,
            ccommute2: 0,
            label: DecompositionLabel::UNLABELED,
            cost: 0.0,
            sandwich: None,
        }
    }

    /// `Σ b_k C_k` under `opts`.
    pub fn reduction(&self, opts: OptFlags) -> usize {
        opts.b_2q as usize * self.c2q
            + opts.b_commute1 as usize * self.ccommute1
            + opts.b_commute2 as usize * self.ccommute2
    }
}

#[derive(Clone, Debug)]
struct Emitted {
    gate: Gate,
    node: Option<NodeId>,
    label: DecompositionLabel,
    removed: bool,
}

/// Physical circuit produced by [`route`], with SWAPs still present.
#[derive(Clone, Debug, PartialEq)]
pub struct RoutedCircuit {
    pub circuit: Circuit,
    /// Decomposition label per gate of `circuit`; unlabeled for everything but SWAPs.
    pub labels: Vec<DecompositionLabel>,
    pub initial_mapping: QubitMapping,
    pub final_mapping: QubitMapping,
    pub swaps_inserted: usize,
    pub swaps_opt_by_2q: usize,
    pub swaps_opt_by_commute: usize,
}

/// Mutable state of one routing pass.
pub struct RoutingState<'a> {
    dag: &'a CircuitDag,
    map: &'a CouplingMap,
    dist: &'a DistanceMatrix,
    resolved: Vec<Emitted>,
    hist: Vec<Vec<usize>>,
    remaining: Vec<usize>,
    pub front: Vec<NodeId>,
    pub extended: Vec<NodeId>,
    pub mapping: QubitMapping,
    c2q_cache: HashMap<(usize, usize), usize>,
}

impl<'a> RoutingState<'a> {
    /// Fresh state; `dag` must already carry block and commute-set annotations when the NASSC
    /// predictors are used.
    pub fn new(
        dag: &'a CircuitDag,
        map: &'a CouplingMap,
        dist: &'a DistanceMatrix,
        mapping: QubitMapping,
    ) -> RoutingState<'a> {
        let n_ops = dag.num_ops();
        let remaining: Vec<usize> = (0..n_ops).map(|i| dag.predecessors(i).len()).collect();
        let front = (0..n_ops).filter(|&i| remaining[i] == 0).collect();
        RoutingState {
            dag,
            map,
            dist,
            resolved: Vec::new(),
            hist: vec![Vec::new(); map.num_physical_qubits()],
            remaining,
            front,
            extended: Vec::new(),
            mapping,
            c2q_cache: HashMap::new(),
        }
    }

    /// Gates emitted so far, in order.
    pub fn resolved(&self) -> impl Iterator<Item = &Gate> {
        self.resolved.iter().filter(|e| !e.removed).map(|e| &e.gate)
    }

    fn physical_pair(&self, id: NodeId) -> (usize, usize) {
        let g = self.dag.gate(id);
        (self.mapping.phys(g.qubits[0]), self.mapping.phys(g.qubits[1]))
    }

    fn executable(&self, id: NodeId) -> bool {
        if !self.dag.gate(id).is_2q() {
            return true;
        }
        let (a, b) = self.physical_pair(id);
        self.map.contains(a, b)
    }

    fn emit(&mut self, gate: Gate, node: Option<NodeId>, label: DecompositionLabel) -> usize {
        let idx = self.resolved.len();
        for &q in &gate.qubits {
            self.hist[q].push(idx);
        }
        self.resolved.push(Emitted {
            gate,
            node,
            label,
            removed: false,
        });
        idx
    }

    /// Move every executable front gate to the resolved list. Returns the number executed.
    pub fn execute_ready(&mut self) -> usize {
        let mut done = 0;
        loop {
            let (ready, blocked): (Vec<NodeId>, Vec<NodeId>) =
                self.front.iter().partition(|&&id| self.executable(id));
            if ready.is_empty() {
                break;
            }
            self.front = blocked;
            for id in ready {
                let g = self.dag.gate(id).remap(|q| self.mapping.phys(q));
                self.emit(g, Some(id), DecompositionLabel::UNLABELED);
                done += 1;
                for s in self.dag.successors(id) {
                    self.remaining[s] -= 1;
                    if self.remaining[s] == 0 {
                        self.front.push(s);
                    }
                }
            }
            self.front.sort_unstable();
        }
        done
    }

    /// Up to `size` two-qubit successors of the front layer, nearest first.
    pub fn refill_extended(&mut self, size: usize) {
        self.extended.clear();
        if size == 0 {
            return;
        }
        let mut seen: HashMap<NodeId, ()> = self.front.iter().map(|&f| (f, ())).collect();
        let mut queue: VecDeque<NodeId> = VecDeque::new();
        for &f in &self.front {
            for s in self.dag.successors(f) {
                if seen.insert(s, ()).is_none() {
                    queue.push_back(s);
                }
            }
        }
        while let Some(id) = queue.pop_front() {
            if self.dag.gate(id).is_2q() {
                self.extended.push(id);
                if self.extended.len() == size {
                    break;
                }
            }
            for s in self.dag.successors(id) {
                if seen.insert(s, ()).is_none() {
                    queue.push_back(s);
                }
            }
        }
        self.extended.sort_unstable();
    }

    fn swap_distance(&self, ids: &[NodeId], edge: (usize, usize)) -> f64 {
        let t = |p: usize| {
            if p == edge.0 {
                edge.1
            } else if p == edge.1 {
                edge.0
            } else {
                p
            }
        };
        ids.iter()
            .map(|&id| {
                let (a, b) = self.physical_pair(id);
                self.dist.get(t(a), t(b))
            })
            .sum()
    }

    /// Trailing single-qubit entries of a wire, and the entry before them.
    fn trailing(&self, w: usize) -> (usize, Option<usize>) {
        let h = &self.hist[w];
        let k = h
            .iter()
            .rev()
            .take_while(|&&i| self.resolved[i].gate.is_1q())
            .count();
        (k, h.len().checked_sub(k + 1).map(|j| h[j]))
    }

    fn block_of(&self, idx: usize) -> Option<usize> {
        self.resolved[idx].node.and_then(|n| self.dag.node(n).block_id)
    }

    fn predict_2q(&mut self, (p, q): (usize, usize)) -> usize {
        let (Some(&lp), Some(&lq)) = (self.hist[p].last(), self.hist[q].last()) else {
            return 0;
        };
        let Some(b) = self.block_of(lp) else {
            return 0;
        };
        if self.block_of(lq) != Some(b) {
            return 0;
        }
        let mut members: Vec<usize> = Vec::new();
        for w in [p, q] {
            members.extend(
                self.hist[w]
                    .iter()
                    .rev()
                    .take_while(|&&i| self.block_of(i) == Some(b))
                    .copied(),
            );
        }
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&i| {
            let g = &self.resolved[i].gate;
            g.qubits.iter().any(|&x| x != p && x != q)
        }) {
            return 0;
        }
        let key = (b, members.len());
        if let Some(&v) = self.c2q_cache.get(&key) {
            return v;
        }
        let gates: Vec<&Gate> = members.iter().map(|&i| &self.resolved[i].gate).collect();
        let before = gates.iter().map(|g| cx_cost(g.kind)).sum();
        let u = pair_unitary(gates.iter().copied(), p, q);
        let v = predict_c2q(&u, before).unwrap_or(0);
        self.c2q_cache.insert(key, v);
        v
    }

    fn commute_set_of(&self, idx: usize, wire: usize) -> Option<usize> {
        let n = self.resolved[idx].node?;
        let l = self.mapping.logical(wire);
        let node = self.dag.node(n);
        let k = node.gate.qubits.iter().position(|&x| x == l)?;
        node.commute_sets[k]
    }

    /// CX entries on `(p, q)` inside the commute set that ends the wire, skipping trailing 1q gates.
    fn cancellable_cx(&self, w: usize, (p, q): (usize, usize)) -> Vec<usize> {
        let (skip, Some(first)) = self.trailing(w) else {
            return Vec::new();
        };
        let Some(set) = self.commute_set_of(first, w) else {
            return Vec::new();
        };
        let mut found = Vec::new();
        for &i in self.hist[w].iter().rev().skip(skip).take(COMMUTE_SET_CAP) {
            if self.commute_set_of(i, w) != Some(set) {
                break;
            }
            let g = &self.resolved[i].gate;
            if g.kind == GateKind::CX && (g.qubits[..] == [p, q] || g.qubits[..] == [q, p]) {
                found.push(i);
            }
        }
        found
    }

    fn predict_commute1(&self, edge: (usize, usize)) -> Option<DecompositionLabel> {
        let on_p = self.cancellable_cx(edge.0, edge);
        if on_p.is_empty() {
            return None;
        }
        let on_q = self.cancellable_cx(edge.1, edge);
        let hit = on_p.iter().filter(|i| on_q.contains(i)).max()?;
        let control = self.resolved[*hit].gate.qubits[0];
        Some(DecompositionLabel::with_control(
            edge.0,
            control,
            LabelReason::Commute1,
        ))
    }

    fn predict_commute2(&self, edge: (usize, usize)) -> Option<(DecompositionLabel, usize)> {
        for (w1, w2) in [(edge.0, edge.1), (edge.1, edge.0)] {
            let (_, Some(s1)) = self.trailing(w1) else {
                continue;
            };
            let g1 = &self.resolved[s1].gate;
            if g1.kind != GateKind::Swap || !(g1.qubits.contains(&w2)) {
                continue;
            }
            let (skip, _) = self.trailing(w2);
            let middle: Vec<&Gate> = self.hist[w2]
                .iter()
                .rev()
                .skip(skip)
                .take(COMMUTE_SET_CAP + 1)
                .take_while(|&&i| i != s1)
                .map(|&i| &self.resolved[i].gate)
                .collect();
            if middle.len() > COMMUTE_SET_CAP {
                continue;
            }
            let prior = self.resolved[s1].label;
            let controls = match prior.orientation {
                crate::commutation::Orientation::Unlabeled => vec![w2, w1],
                _ => vec![prior.first_control(g1.qubits[0], g1.qubits[1])],
            };
            for c in controls {
                let t = if c == w1 { w2 } else { w1 };
                let cx = Gate::cx(c, t);
                if middle.iter().all(|m| gates_commute(m, &cx)) {
                    let label = DecompositionLabel::with_control(edge.0, c, LabelReason::Commute2);
                    return Some((label, s1));
                }
            }
        }
        None
    }

    /// All coupling edges touching a physical qubit of a blocked front gate, sorted.
    pub fn candidate_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &id in &self.front {
            if !self.dag.gate(id).is_2q() {
                continue;
            }
            let (a, b) = self.physical_pair(id);
            for p in [a, b] {
                for &n in self.map.neighbors(p) {
                    out.push((p.min(n), p.max(n)));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn evaluate(&mut self, edge: (usize, usize), cfg: &RouterConfig) -> SwapCandidate {
        let opts = cfg.effective_opts();
        let mut cand = SwapCandidate::plain(edge);
        if opts.b_2q {
            cand.c2q = self.predict_2q(edge);
        }
        if opts.b_commute1 {
            if let Some(label) = self.predict_commute1(edge) {
                cand.ccommute1 = 2;
                cand.label = label;
            }
        }
        if opts.b_commute2 && cand.ccommute1 == 0 {
            if let Some((label, s1)) = self.predict_commute2(edge) {
                cand.ccommute2 = 2;
                cand.label = label;
                cand.sandwich = Some(s1);
            }
        }
        cand.cost = self.cost_with(edge, cand.reduction(opts), cfg);
        cand
    }

    fn cost_with(&self, edge: (usize, usize), reduction: usize, cfg: &RouterConfig) -> f64 {
        let f = self.front.iter().filter(|&&id| self.dag.gate(id).is_2q()).count().max(1);
        let front: Vec<NodeId> =
            self.front.iter().copied().filter(|&id| self.dag.gate(id).is_2q()).collect();
        let mut h = (3.0 * self.swap_distance(&front, edge) - reduction as f64) / f as f64;
        if !self.extended.is_empty() {
            h += cfg.extended_weight / self.extended.len() as f64
                * self.swap_distance(&self.extended, edge);
        }
        h
    }

    /// Insert a SWAP, moving trailing single-qubit gates through it when its label asks for
    /// cancellation.
    fn apply(&mut self, cand: &SwapCandidate) {
        let (p, q) = cand.edge;
        let mut moved: Vec<Gate> = Vec::new();
        if cand.label.rationale != LabelReason::None {
            for (w, other) in [(p, q), (q, p)] {
                let (k, _) = self.trailing(w);
                let start = self.hist[w].len() - k;
                for i in self.hist[w].split_off(start) {
                    self.resolved[i].removed = true;
                    moved.push(self.resolved[i].gate.remap(|_| other));
                }
            }
        }
        if let Some(s1) = cand.sandwich {
            self.resolved[s1].label = DecompositionLabel::with_control(
                self.resolved[s1].gate.qubits[0],
                cand.label.first_control(p, q),
                LabelReason::Commute2,
            );
        }
        self.emit(Gate::swap(p, q), None, cand.label);
        self.mapping.swap_physical(p, q);
        for g in moved {
            self.emit(g, None, DecompositionLabel::UNLABELED);
        }
    }

    fn release_valve(&mut self) {
        let id = *self
            .front
            .iter()
            .filter(|&&id| self.dag.gate(id).is_2q())
            .min_by(|&&x, &&y| {
                let (a, b) = self.physical_pair(x);
                let (c, d) = self.physical_pair(y);
                self.dist.get(a, b).total_cmp(&self.dist.get(c, d))
            })
            .expect("blocked front gate");
        let (a, b) = self.physical_pair(id);
        let path = shortest_path(self.map, a, b);
        for w in path.windows(2).take(path.len().saturating_sub(2)) {
            self.emit(Gate::swap(w[0], w[1]), None, DecompositionLabel::UNLABELED);
            self.mapping.swap_physical(w[0], w[1]);
        }
    }

    fn into_circuit(self, num_clbits: usize) -> (Circuit, Vec<DecompositionLabel>) {
        let mut c = Circuit::new(self.map.num_physical_qubits(), num_clbits);
        let mut labels = Vec::new();
        for e in self.resolved.into_iter().filter(|e| !e.removed) {
            labels.push(e.label);
            c.push_unchecked(e.gate);
        }
        (c, labels)
    }
}

fn shortest_path(map: &CouplingMap, from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; map.num_physical_qubits()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &v in map.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

/// Candidate SWAPs for the current front layer.
pub fn enumerate_candidates(state: &RoutingState) -> Result<Vec<(usize, usize)>, RoutingError> {
    let edges = state.candidate_edges();
    if edges.is_empty() {
        return Err(RoutingError::EmptyFront);
    }
    Ok(edges)
}

/// Heuristic cost of inserting a SWAP on `edge`, with the predicted reductions the config enables.
pub fn cost(state: &mut RoutingState, edge: (usize, usize), cfg: &RouterConfig) -> SwapCandidate {
    state.evaluate(edge, cfg)
}

/// Annotate a logical DAG with block ids and commute sets.
pub fn annotate(dag: &mut CircuitDag) {
    collect_blocks(dag);
    commutation_analysis(dag);
}

/// Route `circuit` on `map` starting from `initial`.
///
/// The output acts on all physical qubits of `map` and still contains SWAP gates; their
/// decomposition labels are returned alongside.
pub fn route(
    circuit: &Circuit,
    map: &CouplingMap,
    dist: &DistanceMatrix,
    initial: &QubitMapping,
    cfg: &RouterConfig,
    rng: &mut ChaCha8Rng,
) -> Result<RoutedCircuit, RoutingError> {
    let n = map.num_physical_qubits();
    if circuit.num_qubits > n {
        return Err(RoutingError::TooFewPhysicalQubits {
            needed: circuit.num_qubits,
            available: n,
        });
    }
    let mut dag = CircuitDag::new(&circuit.widened(n));
    if cfg.effective_opts().any() {
        annotate(&mut dag);
    }
    let cap = 10 * n * circuit.len().max(1);
    let stall_limit = 10 * n;
    let mut state = RoutingState::new(&dag, map, dist, initial.clone());
    let (mut swaps, mut by_2q, mut by_commute) = (0, 0, 0);
    let mut since_progress = 0;
    let mut iterations = 0;
    loop {
        if state.execute_ready() > 0 {
            since_progress = 0;
        }
        if state.front.is_empty() {
            break;
        }
        iterations += 1;
        if iterations > cap {
            return Err(RoutingError::NonTermination(cap));
        }
        if since_progress >= stall_limit {
            let before = state.resolved.len();
            state.release_valve();
            swaps += state.resolved.len() - before;
            since_progress = 0;
            continue;
        }
        state.refill_extended(cfg.extended_size);
        let edges = enumerate_candidates(&state)?;
        let cands: Vec<SwapCandidate> = edges.into_iter().map(|e| state.evaluate(e, cfg)).collect();
        let best = cands.iter().map(|c| c.cost).fold(f64::INFINITY, f64::min);
        let ties: Vec<&SwapCandidate> =
            cands.iter().filter(|c| c.cost <= best + TIE_TOL).collect();
        let pick = ties[if ties.len() == 1 { 0 } else { rng.random_range(0..ties.len()) }].clone();
        if pick.c2q > 0 {
            by_2q += 1;
        }
        if pick.ccommute1 > 0 || pick.ccommute2 > 0 {
            by_commute += 1;
        }
        state.apply(&pick);
        swaps += 1;
        since_progress += 1;
    }
    let final_mapping = state.mapping.clone();
    let (out, labels) = state.into_circuit(circuit.num_clbits);
    Ok(RoutedCircuit {
        circuit: out,
        labels,
        initial_mapping: initial.clone(),
        final_mapping,
        swaps_inserted: swaps,
        swaps_opt_by_2q: by_2q,
        swaps_opt_by_commute: by_commute,
    })
}

/// Seeded random bijection of `n` qubits.
pub(crate) fn random_mapping(n: usize, rng: &mut ChaCha8Rng) -> QubitMapping {
    use rand::seq::SliceRandom;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    QubitMapping::from_log_to_phys(perm).expect("shuffle is a permutation")
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
