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

//! Commutation analysis, commutative cancellation and SWAP decomposition labels.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitDag, Gate, GateKind, NodeId, Statevector};
use crate::linalg::{C64, ZERO};

/// Largest commute set built, and the deepest a predictor searches into one.
pub const COMMUTE_SET_CAP: usize = 20;
const COMMUTATOR_TOL: f64 = 1e-9;

/// A contiguous group of pairwise-commuting operations on one wire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommuteSet {
    pub set_id: usize,
    pub wire: usize,
    pub members: Vec<NodeId>,
}

/// Which qubit of a SWAP `(a, b)` controls the first CX of its 3-CX expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Orientation {
    FirstCxControlOnA,
    FirstCxControlOnB,
    #[default]
    Unlabeled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum LabelReason {
    Commute1,
    Commute2,
    #[default]
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct DecompositionLabel {
    pub orientation: Orientation,
    pub rationale: LabelReason,
}

impl DecompositionLabel {
    pub const UNLABELED: DecompositionLabel = DecompositionLabel {
        orientation: Orientation::Unlabeled,
        rationale: LabelReason::None,
    };

    /// Label for SWAP `(a, b)` whose first CX is `CX(control, ·)`.
    pub fn with_control(a: usize, control: usize, rationale: LabelReason) -> DecompositionLabel {
        DecompositionLabel {
            orientation: if control == a {
                Orientation::FirstCxControlOnA
            } else {
                Orientation::FirstCxControlOnB
            },
            rationale,
        }
    }

    /// Control qubit of the first CX when decomposing SWAP `(a, b)`.
    pub fn first_control(&self, a: usize, b: usize) -> usize {
        match self.orientation {
            Orientation::FirstCxControlOnA => a,
            Orientation::FirstCxControlOnB => b,
            Orientation::Unlabeled => a.min(b),
        }
    }
}

fn is_diagonal_1q(g: &Gate) -> bool {
    match g.kind {
        GateKind::Id | GateKind::Z | GateKind::RZ => true,
        GateKind::U3 => g.params[0].abs() < 1e-12,
        _ => false,
    }
}

fn is_x_like_1q(g: &Gate) -> bool {
    match g.kind {
        GateKind::Id | GateKind::X | GateKind::SX => true,
        GateKind::U3 => {
            let (p, l) = (g.params[1], g.params[2]);
            let r = |x: f64| crate::circuit::wrap(x);
            (r(p + std::f64::consts::FRAC_PI_2).abs() < 1e-12 && r(l - std::f64::consts::FRAC_PI_2).abs() < 1e-12)
                || g.params[0].abs() < 1e-12 && r(p + l).abs() < 1e-12
        }
        _ => false,
    }
}

/// Rule table for the common cases; `None` defers to the matrix check.
fn commute_by_rule(a: &Gate, b: &Gate) -> Option<bool> {
    if !a.qubits.iter().any(|q| b.qubits.contains(q)) {
        return Some(true);
    }
    if !a.is_unitary() || !b.is_unitary() {
        return Some(false);
    }
    if a == b {
        return Some(true);
    }
    match (a.kind, b.kind) {
        (GateKind::CX, GateKind::CX) => {
            Some(a.qubits[0] != b.qubits[1] && a.qubits[1] != b.qubits[0])
        }
        (GateKind::CX, _) if b.is_1q() => one_vs_cx(b, a),
        (_, GateKind::CX) if a.is_1q() => one_vs_cx(a, b),
        (GateKind::CZ, _) if b.is_1q() && is_diagonal_1q(b) => Some(true),
        (_, GateKind::CZ) if a.is_1q() && is_diagonal_1q(a) => Some(true),
        _ => None,
    }
}

fn one_vs_cx(one: &Gate, cx: &Gate) -> Option<bool> {
    let q = one.qubits[0];
    if q == cx.qubits[0] && is_diagonal_1q(one) || q == cx.qubits[1] && is_x_like_1q(one) {
        Some(true)
    } else {
        None
    }
}

fn embed(g: &Gate, support: &[usize]) -> DMatrix<C64> {
    let k = support.len();
    let local = g.remap(|q| support.iter().position(|&s| s == q).unwrap());
    let dim = 1usize << k;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for col in 0..dim {
        let mut s = Statevector::basis(k, col).expect("support is small");
        s.apply_gate(&local).expect("unitary gate");
        for (row, a) in s.amplitudes().iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    m
}

/// True when the two gates commute on their joint support.
pub fn gates_commute(a: &Gate, b: &Gate) -> bool {
    if let Some(r) = commute_by_rule(a, b) {
        return r;
    }
    let mut support: Vec<usize> = a.qubits.iter().chain(b.qubits.iter()).copied().collect();
    support.sort_unstable();
    support.dedup();
    let (ma, mb) = (embed(a, &support), embed(b, &support));
    let comm = &ma * &mb - &mb * &ma;
    comm.iter().all(|z| z.norm() < COMMUTATOR_TOL)
}

/// Greedy per-wire grouping of consecutive commuting operations.
///
/// A node joins the open set on a wire when it commutes with every member and the set holds fewer
/// than [`COMMUTE_SET_CAP`] nodes. Set ids are written to each node's `commute_sets`.
pub fn commutation_analysis(dag: &mut CircuitDag) -> Vec<CommuteSet> {
    let mut sets: Vec<CommuteSet> = Vec::new();
    for q in 0..dag.num_qubits {
        let wire: Vec<NodeId> = dag.wire(q).collect();
        let mut open: Option<usize> = None;
        for id in wire {
            let joins = open.is_some_and(|s| {
                let set = &sets[s];
                set.members.len() < COMMUTE_SET_CAP
                    && set.members.iter().all(|&m| gates_commute(dag.gate(m), dag.gate(id)))
            });
            let s = if joins {
                open.unwrap()
            } else {
                sets.push(CommuteSet {
                    set_id: sets.len(),
                    wire: q,
                    members: Vec::new(),
                });
                sets.len() - 1
            };
            sets[s].members.push(id);
            open = Some(s);
            let k = dag.gate(id).qubits.iter().position(|&x| x == q).unwrap();
            dag.node_mut(id).commute_sets[k] = Some(s);
        }
    }
    sets
}

fn cancel_once(c: &Circuit) -> Option<Circuit> {
    let mut dag = CircuitDag::new(c);
    commutation_analysis(&mut dag);
    let mut groups: HashMap<(GateKind, Vec<usize>, Vec<Option<usize>>), Vec<NodeId>> =
        HashMap::new();
    for (id, node) in dag.nodes().iter().enumerate() {
        if node.gate.kind.is_self_inverse() {
            let key = (
                node.gate.kind,
                node.gate.qubits.to_vec(),
                node.commute_sets.to_vec(),
            );
            groups.entry(key).or_default().push(id);
        }
    }
    let mut drop = vec![false; dag.num_ops()];
    let mut any = false;
    for nodes in groups.values() {
        for &id in &nodes[..nodes.len() / 2 * 2] {
            drop[id] = true;
            any = true;
        }
    }
    if !any {
        return None;
    }
    let mut out = c.empty_like();
    for (id, node) in dag.nodes().iter().enumerate() {
        if !drop[id] {
            out.push_unchecked(node.gate.clone());
        }
    }
    Some(out)
}

/// Remove pairs of identical self-inverse gates that share a commute set on every wire, repeated
/// until nothing changes.
pub fn commutative_cancellation(c: &Circuit) -> Circuit {
    let mut cur = c.clone();
    while let Some(next) = cancel_once(&cur) {
        cur = next;
    }
    cur
}

/// Move the single-qubit gates directly before the SWAP at `swap_index` to just after it, on the
/// opposite wire.
pub fn move_1q_through_swap(c: &Circuit, swap_index: usize) -> Circuit {
    let gates = c.gates();
    let sw = &gates[swap_index];
    assert_eq!(sw.kind, GateKind::Swap);
    let (a, b) = (sw.qubits[0], sw.qubits[1]);
    let mut moved = vec![false; gates.len()];
    for &w in &[a, b] {
        for i in (0..swap_index).rev() {
            let g = &gates[i];
            if !g.qubits.contains(&w) {
                continue;
            }
            if !g.is_1q() {
                break;
            }
            moved[i] = true;
        }
    }
    let mut out = c.empty_like();
    for (i, g) in gates.iter().enumerate() {
        if moved[i] {
            continue;
        }
        out.push_unchecked(g.clone());
        if i == swap_index {
            for (j, m) in gates[..swap_index].iter().enumerate() {
                if moved[j] {
                    out.push_unchecked(m.remap(|q| if q == a { b } else { a }));
                }
            }
        }
    }
    out
}
