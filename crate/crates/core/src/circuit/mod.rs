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

//! Circuit intermediate representation.

mod dag;
mod equiv;
mod gate;
mod metrics;
pub mod qasm;
mod sim;

pub use dag::{CircuitDag, DagNode, NodeId};
pub use equiv::{equivalence_report, equivalent_up_to_permutation, EquivalenceReport, Layouts};
pub use gate::{rotation_angle, u3_matrix, wrap, zyz_angles, Gate, GateError, GateKind};
pub use metrics::{metrics, Metrics};
pub use sim::{simulate, SimError, Statevector, MAX_DENSE_QUBITS};

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CircuitError {
    #[error("gate {gate} uses qubit {qubit} but the circuit has {num_qubits}")]
    QubitOutOfRange {
        gate: String,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("measure targets clbit {clbit} but the circuit has {num_clbits}")]
    ClbitOutOfRange { clbit: usize, num_clbits: usize },
}

/// An ordered gate list over `num_qubits` wires.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub num_clbits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Circuit {
        Circuit {
            num_qubits,
            num_clbits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(
        num_qubits: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Circuit, CircuitError> {
        let mut out = Circuit::new(num_qubits, 0);
        for g in gates {
            if let Some(cb) = g.clbit {
                out.num_clbits = out.num_clbits.max(cb + 1);
            }
            out.push(g)?;
        }
        Ok(out)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        if let Some(&q) = gate.qubits.iter().find(|&&q| q >= self.num_qubits) {
            return Err(CircuitError::QubitOutOfRange {
                gate: gate.to_string(),
                qubit: q,
                num_qubits: self.num_qubits,
            });
        }
        if let Some(cb) = gate.clbit {
            if cb >= self.num_clbits {
                return Err(CircuitError::ClbitOutOfRange {
                    clbit: cb,
                    num_clbits: self.num_clbits,
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Push without validation; for internal passes that only reorder or relabel valid gates.
    pub(crate) fn push_unchecked(&mut self, gate: Gate) {
        debug_assert!(gate.qubits.iter().all(|&q| q < self.num_qubits));
        self.gates.push(gate);
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_2q()).count()
    }

    /// Empty circuit with the same registers.
    pub fn empty_like(&self) -> Circuit {
        Circuit::new(self.num_qubits, self.num_clbits)
    }

    /// The adjoint circuit: reversed order, each gate inverted. Measurements are dropped.
    pub fn inverse(&self) -> Circuit {
        let mut out = self.empty_like();
        for g in self.gates.iter().rev() {
            if g.kind != GateKind::Measure {
                out.gates.push(g.inverse());
            }
        }
        out
    }

    /// Copy of the circuit widened to `num_qubits` wires.
    pub fn widened(&self, num_qubits: usize) -> Circuit {
        assert!(num_qubits >= self.num_qubits);
        Circuit {
            num_qubits,
            num_clbits: self.num_clbits,
            gates: self.gates.clone(),
        }
    }
}
