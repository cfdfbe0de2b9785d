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

use serde::{Deserialize, Serialize};

use super::{Circuit, GateKind};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub cnot_count: usize,
    pub depth: usize,
    pub gate_count: usize,
}

/// CX count, depth (every non-barrier gate is one layer) and gate count.
pub fn metrics(c: &Circuit) -> Result<Metrics, Error> {
    let mut level = vec![0usize; c.num_qubits];
    let mut m = Metrics::default();
    for g in c.gates() {
        match g.kind {
            GateKind::Swap => return Err(Error::UndecomposedSwap),
            GateKind::Barrier => continue,
            GateKind::CX => m.cnot_count += 1,
            _ => {}
        }
        m.gate_count += 1;
        let l = g.qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for &q in &g.qubits {
            level[q] = l;
        }
        m.depth = m.depth.max(l);
    }
    Ok(m)
}
