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

//! Two-qubit block collection and block re-synthesis.

use std::collections::HashMap;

use super::unitary::{cx_count, min_cnot_count, pair_unitary, synthesize_gates};
use super::SynthesisError;
use crate::circuit::{Circuit, CircuitDag, Gate, NodeId};
use crate::linalg::{swap4, Mat4};

/// A maximal uninterrupted run of gates on one qubit pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoQubitBlock {
    pub block_id: usize,
    /// Orientation of the block's matrix: `qubits.0` is the low bit.
    pub qubits: (usize, usize),
    pub nodes: Vec<NodeId>,
}

impl TwoQubitBlock {
    pub fn contains(&self, q: usize) -> bool {
        self.qubits.0 == q || self.qubits.1 == q
    }
}

/// Group the DAG into two-qubit blocks and record `block_id` on every member node.
///
/// Single-qubit gates waiting on a wire join the next block that starts on that wire.
pub fn collect_blocks(dag: &mut CircuitDag) -> Vec<TwoQubitBlock> {
    let n = dag.num_qubits;
    let mut blocks: Vec<TwoQubitBlock> = Vec::new();
    let mut open: Vec<Option<usize>> = vec![None; n];
    let mut pending: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for id in 0..dag.num_ops() {
        dag.node_mut(id).block_id = None;
    }
    let close = |open: &mut Vec<Option<usize>>, blocks: &Vec<TwoQubitBlock>, q: usize| {
        if let Some(b) = open[q] {
            let (x, y) = blocks[b].qubits;
            open[x] = None;
            open[y] = None;
        }
    };
    for id in 0..dag.num_ops() {
        let g = dag.gate(id).clone();
        if g.is_1q() {
            let q = g.qubits[0];
            match open[q] {
                Some(b) => blocks[b].nodes.push(id),
                None => pending[q].push(id),
            }
        } else if g.is_2q() {
            let (x, y) = (g.qubits[0], g.qubits[1]);
            if let (Some(bx), Some(by)) = (open[x], open[y]) {
                if bx == by {
                    blocks[bx].nodes.push(id);
                    continue;
                }
            }
            close(&mut open, &blocks, x);
            close(&mut open, &blocks, y);
            let mut nodes = std::mem::take(&mut pending[x]);
            nodes.append(&mut pending[y]);
            nodes.sort_unstable();
            nodes.push(id);
            let b = blocks.len();
            blocks.push(TwoQubitBlock {
                block_id: b,
                qubits: (x, y),
                nodes,
            });
            open[x] = Some(b);
            open[y] = Some(b);
        } else {
            for &q in &g.qubits {
                close(&mut open, &blocks, q);
                pending[q].clear();
            }
        }
    }
    for b in &blocks {
        for &id in &b.nodes {
            dag.node_mut(id).block_id = Some(b.block_id);
        }
    }
    blocks
}

/// Ordered product of the block's gates, little-endian on `b.qubits`.
pub fn block_unitary(dag: &CircuitDag, b: &TwoQubitBlock) -> Mat4 {
    pair_unitary(b.nodes.iter().map(|&id| dag.gate(id)), b.qubits.0, b.qubits.1)
}

/// CX-count reduction when a SWAP is appended to a block with unitary `u` that currently
/// uses `c_before` CX gates.
pub fn predict_c2q(u: &Mat4, c_before: usize) -> Result<usize, SynthesisError> {
    let c_after = min_cnot_count(&(swap4() * u))?;
    Ok((c_before + 3).saturating_sub(c_after).min(3))
}

/// Replace each block by its KAK synthesis when that lowers the CX count. Gates other than CX are
/// priced by [`cx_count`].
pub fn resynthesize_blocks(c: &Circuit) -> Result<Circuit, SynthesisError> {
    let mut dag = CircuitDag::new(c);
    let blocks = collect_blocks(&mut dag);
    let mut replace: HashMap<NodeId, Vec<Gate>> = HashMap::new();
    let mut skip = vec![false; dag.num_ops()];
    for b in &blocks {
        let gates: Vec<Gate> = b.nodes.iter().map(|&id| dag.gate(id).clone()).collect();
        let before = cx_count(&gates);
        let u = block_unitary(&dag, b);
        if min_cnot_count(&u)? >= before {
            continue;
        }
        let new = synthesize_gates(&u, b.qubits.0, b.qubits.1)?;
        if cx_count(&new) >= before {
            continue;
        }
        for &id in &b.nodes {
            skip[id] = true;
        }
        replace.insert(*b.nodes.last().unwrap(), new);
    }
    let mut out = c.empty_like();
    for id in 0..dag.num_ops() {
        if let Some(gs) = replace.remove(&id) {
            for g in gs {
                out.push_unchecked(g);
            }
        } else if !skip[id] {
            out.push_unchecked(dag.gate(id).clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{equivalent_up_to_permutation, GateKind, Layouts};
    use crate::linalg::{max_abs_diff, phase_distance};

    fn blocks_of(n: usize, gates: Vec<Gate>) -> (CircuitDag, Vec<TwoQubitBlock>) {
        let mut dag = CircuitDag::new(&Circuit::from_gates(n, gates).unwrap());
        let b = collect_blocks(&mut dag);
        (dag, b)
    }

    #[test]
    fn uninterrupted_pair_is_one_block() {
        let (dag, b) = blocks_of(2, vec![Gate::cx(0, 1), Gate::rz(0.2, 1), Gate::cx(0, 1)]);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].nodes, vec![0, 1, 2]);
        assert!(dag.nodes().iter().all(|n| n.block_id == Some(0)));
    }

    #[test]
    fn interruption_splits_blocks() {
        let (_, b) = blocks_of(3, vec![Gate::cx(0, 1), Gate::cx(1, 2), Gate::cx(0, 1)]);
        let nodes: Vec<_> = b.iter().map(|b| b.nodes.clone()).collect();
        assert_eq!(nodes, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn leading_single_qubit_gates_join() {
        // V1, V3 on each wire, CX, V2, V4, then SWAP: all six in one block
        let (_, b) = blocks_of(
            2,
            vec![
                Gate::u3(0.1, 0.2, 0.3, 0),
                Gate::u3(0.4, 0.5, 0.6, 1),
                Gate::cx(0, 1),
                Gate::u3(0.7, 0.8, 0.9, 0),
                Gate::u3(1.0, 1.1, 1.2, 1),
                Gate::swap(0, 1),
            ],
        );
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].nodes.len(), 6);
    }

    #[test]
    fn measure_closes_block() {
        let mut c = Circuit::new(2, 1);
        for g in [Gate::cx(0, 1), Gate::measure(0, 0), Gate::cx(0, 1)] {
            c.push(g).unwrap();
        }
        let mut dag = CircuitDag::new(&c);
        let b = collect_blocks(&mut dag);
        assert_eq!(b.len(), 2);
        assert_eq!(dag.node(1).block_id, None);
    }

    #[test]
    fn block_unitaries() {
        let (dag, b) = blocks_of(2, vec![Gate::cx(0, 1), Gate::cx(0, 1)]);
        assert!(max_abs_diff(&block_unitary(&dag, &b[0]), &Mat4::identity()) < 1e-15);
        let (dag, b) = blocks_of(2, vec![Gate::swap(0, 1)]);
        assert!(max_abs_diff(&block_unitary(&dag, &b[0]), &swap4()) < 1e-15);
        let (dag, b) = blocks_of(2, vec![Gate::cx(0, 1), Gate::swap(0, 1)]);
        let want = swap4() * Gate::cx(0, 1).matrix2().unwrap();
        assert!(max_abs_diff(&block_unitary(&dag, &b[0]), &want) < 1e-15);
    }

    #[test]
    fn c2q_values() {
        let cx = Gate::cx(0, 1).matrix2().unwrap();
        let dressed = pair_unitary(
            &[Gate::u3(0.3, 0.1, 0.2, 0), Gate::cx(0, 1), Gate::u3(1.3, 0.4, 0.2, 1)],
            0,
            1,
        );
        assert_eq!(predict_c2q(&dressed, 1).unwrap(), 2);
        assert_eq!(predict_c2q(&cx, 1).unwrap(), 2);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let u = crate::linalg::haar_unitary4(&mut rng);
        assert_eq!(predict_c2q(&u, 3).unwrap(), 3);
        // an identity block gains nothing from a SWAP
        assert_eq!(predict_c2q(&Mat4::identity(), 0).unwrap(), 0);
    }

    #[test]
    fn resynthesis_absorbs_swap() {
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::h(0),
                Gate::cx(0, 1),
                Gate::rz(0.3, 1),
                Gate::cx(0, 1),
                Gate::cx(0, 1),
                Gate::cx(1, 0),
                Gate::cx(0, 1),
                Gate::cx(1, 2),
            ],
        )
        .unwrap();
        let out = resynthesize_blocks(&c).unwrap();
        // five CX on the pair collapse to three; CX(1,2) is untouched
        assert_eq!(out.count(GateKind::CX), 4);
        assert!(equivalent_up_to_permutation(&c, &out, &Layouts::identity(3)).unwrap());
        // the SWAP-free 1-CX block stays as written
        let plain = Circuit::from_gates(2, vec![Gate::h(0), Gate::cx(0, 1)]).unwrap();
        assert_eq!(resynthesize_blocks(&plain).unwrap(), plain);
        let u = pair_unitary(out.gates().iter().filter(|g| !g.qubits.contains(&2)), 0, 1);
        let v = pair_unitary(c.gates().iter().filter(|g| !g.qubits.contains(&2)), 0, 1);
        assert!(phase_distance(&u, &v) < 1e-8);
    }
}
