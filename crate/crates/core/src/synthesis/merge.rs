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

use crate::circuit::{zyz_angles, Circuit, Gate};
use crate::linalg::{phase_distance, Mat2};

const IDENTITY_TOL: f64 = 1e-10;

struct Run {
    m: Mat2,
    gates: Vec<Gate>,
}

fn flush(run: Option<Run>, q: usize, out: &mut Circuit) {
    let Some(run) = run else { return };
    if phase_distance(&run.m, &Mat2::identity()) < IDENTITY_TOL {
        return;
    }
    if run.gates.len() == 1 {
        out.push_unchecked(run.gates.into_iter().next().unwrap());
        return;
    }
    let (t, p, l, _) = zyz_angles(&run.m);
    out.push_unchecked(Gate::u3(t, p, l, q));
}

/// Collapse each maximal run of single-qubit gates on a wire into one gate.
///
/// Runs that reduce to the identity are removed; a run of one gate is kept as written.
pub fn merge_1q_runs(c: &Circuit) -> Circuit {
    let mut out = c.empty_like();
    let mut runs: Vec<Option<Run>> = (0..c.num_qubits).map(|_| None).collect();
    for g in c.gates() {
        if g.is_1q() {
            let run = runs[g.qubits[0]].get_or_insert_with(|| Run {
                m: Mat2::identity(),
                gates: Vec::new(),
            });
            run.m = g.matrix1().unwrap() * run.m;
            run.gates.push(g.clone());
        } else {
            for &q in &g.qubits {
                flush(runs[q].take(), q, &mut out);
            }
            out.push_unchecked(g.clone());
        }
    }
    for (q, run) in runs.into_iter().enumerate() {
        flush(run, q, &mut out);
    }
    out
}
