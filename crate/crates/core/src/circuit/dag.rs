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

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use smallvec::SmallVec;

use super::{Circuit, Gate};

pub type NodeId = usize;

/// Per-wire neighbour of an operation: another operation or a wire sentinel.
pub type WireLink = Option<NodeId>;

#[derive(Clone, Debug, PartialEq)]
pub struct DagNode {
    pub gate: Gate,
    /// Two-qubit block membership, written by block collection.
    pub block_id: Option<usize>,
    /// Commute set per entry of `gate.qubits`, written by commutation analysis.
    pub commute_sets: SmallVec<[Option<usize>; 2]>,
}

/// Dependency DAG of a circuit.
///
/// Operation nodes are numbered `0..num_ops()` in program order; the input sentinel of wire `q`
/// is `num_ops() + q` and its output sentinel is `num_ops() + num_qubits + q`.
#[derive(Clone, Debug)]
pub struct CircuitDag {
    pub num_qubits: usize,
    pub num_clbits: usize,
    nodes: Vec<DagNode>,
    preds: Vec<SmallVec<[WireLink; 2]>>,
    succs: Vec<SmallVec<[WireLink; 2]>>,
    first: Vec<WireLink>,
    last: Vec<WireLink>,
}

impl CircuitDag {
    pub fn new(c: &Circuit) -> CircuitDag {
        let g = c.len();
        let mut dag = CircuitDag {
            num_qubits: c.num_qubits,
            num_clbits: c.num_clbits,
            nodes: Vec::with_capacity(g),
            preds: Vec::with_capacity(g),
            succs: Vec::with_capacity(g),
            first: vec![None; c.num_qubits],
            last: vec![None; c.num_qubits],
        };
        for gate in c.gates() {
            dag.push(gate.clone());
        }
        dag
    }

    /// Append an operation after everything currently on its wires.
    pub fn push(&mut self, gate: Gate) -> NodeId {
        let id = self.nodes.len();
        let mut preds = SmallVec::new();
        for &q in &gate.qubits {
            let prev = self.last[q];
            match prev {
                Some(p) => {
                    let k = self.nodes[p].gate.qubits.iter().position(|&x| x == q).unwrap();
                    self.succs[p][k] = Some(id);
                }
                None => self.first[q] = Some(id),
            }
            self.last[q] = Some(id);
            preds.push(prev);
        }
        let width = gate.qubits.len();
        self.preds.push(preds);
        self.succs.push(SmallVec::from_elem(None, width));
        self.nodes.push(DagNode {
            gate,
            block_id: None,
            commute_sets: SmallVec::from_elem(None, width),
        });
        id
    }

    pub fn num_ops(&self) -> usize {
        self.nodes.len()
    }

    /// Operations plus the two sentinels per wire.
    pub fn node_count(&self) -> usize {
        self.nodes.len() + 2 * self.num_qubits
    }

    pub fn input_node(&self, q: usize) -> NodeId {
        self.nodes.len() + q
    }

    pub fn output_node(&self, q: usize) -> NodeId {
        self.nodes.len() + self.num_qubits + q
    }

    pub fn node(&self, id: NodeId) -> &DagNode {
        &self.nodes[id]
    }

    pub fn node_mut(&mut self, id: NodeId) -> &mut DagNode {
        &mut self.nodes[id]
    }

    pub fn nodes(&self) -> &[DagNode] {
        &self.nodes
    }

    pub fn gate(&self, id: NodeId) -> &Gate {
        &self.nodes[id].gate
    }

    /// Previous operation on each wire of `id`, in `gate.qubits` order.
    pub fn wire_preds(&self, id: NodeId) -> &[WireLink] {
        &self.preds[id]
    }

    pub fn wire_succs(&self, id: NodeId) -> &[WireLink] {
        &self.succs[id]
    }

    pub fn pred_on(&self, id: NodeId, q: usize) -> WireLink {
        let k = self.nodes[id].gate.qubits.iter().position(|&x| x == q)?;
        self.preds[id][k]
    }

    pub fn succ_on(&self, id: NodeId, q: usize) -> WireLink {
        let k = self.nodes[id].gate.qubits.iter().position(|&x| x == q)?;
        self.succs[id][k]
    }

    /// Distinct operation predecessors.
    pub fn predecessors(&self, id: NodeId) -> SmallVec<[NodeId; 2]> {
        dedup(self.preds[id].iter().flatten().copied())
    }

    /// Distinct operation successors.
    pub fn successors(&self, id: NodeId) -> SmallVec<[NodeId; 2]> {
        dedup(self.succs[id].iter().flatten().copied())
    }

    pub fn first_on(&self, q: usize) -> WireLink {
        self.first[q]
    }

    pub fn last_on(&self, q: usize) -> WireLink {
        self.last[q]
    }

    /// Operations on wire `q` in order.
    pub fn wire(&self, q: usize) -> WireIter<'_> {
        WireIter {
            dag: self,
            q,
            next: self.first[q],
        }
    }

    /// All edges `(from, to, wire)` including sentinel edges.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, usize)> {
        let mut out = Vec::new();
        for q in 0..self.num_qubits {
            let mut prev = self.input_node(q);
            for id in self.wire(q) {
                out.push((prev, id, q));
                prev = id;
            }
            out.push((prev, self.output_node(q), q));
        }
        out
    }

    /// Operations whose predecessors are all in `done`, excluding those already done.
    pub fn front_layer(&self, done: &[bool]) -> Vec<NodeId> {
        (0..self.nodes.len())
            .filter(|&id| !done[id] && self.predecessors(id).iter().all(|&p| done[p]))
            .collect()
    }

    /// Kahn linearization, always taking the lowest ready node id.
    pub fn topological_order(&self) -> Vec<NodeId> {
        let n = self.nodes.len();
        let mut indeg: Vec<usize> = (0..n).map(|i| self.predecessors(i).len()).collect();
        let mut heap: BinaryHeap<Reverse<NodeId>> =
            (0..n).filter(|&i| indeg[i] == 0).map(Reverse).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(Reverse(id)) = heap.pop() {
            out.push(id);
            for s in self.successors(id) {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    heap.push(Reverse(s));
                }
            }
        }
        out
    }

    pub fn to_circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.num_qubits, self.num_clbits);
        for id in self.topological_order() {
            c.push_unchecked(self.nodes[id].gate.clone());
        }
        c
    }
}

fn dedup(it: impl Iterator<Item = NodeId>) -> SmallVec<[NodeId; 2]> {
    let mut out: SmallVec<[NodeId; 2]> = SmallVec::new();
    for x in it {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub struct WireIter<'a> {
    dag: &'a CircuitDag,
    q: usize,
    next: WireLink,
}

impl Iterator for WireIter<'_> {
    type Item = NodeId;
    fn next(&mut self) -> Option<NodeId> {
        let cur = self.next?;
        self.next = self.dag.succ_on(cur, self.q);
        Some(cur)
    }
}
