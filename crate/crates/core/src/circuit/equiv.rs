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

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sim::random_product_factors;
use super::{simulate, Circuit, Gate, GateKind, SimError, Statevector, MAX_DENSE_QUBITS};
use crate::linalg::{Mat2, Mat4, C64, ZERO};

/// Number of random product-state inputs checked besides all-zeros.
pub const RANDOM_INPUTS: usize = 20;
const INPUT_SEED: u64 = 0x5eed_e0e0;
/// Widest register the physical-side simulator will hold at once.
const MAX_SLOTS: usize = 24;

/// Logical-to-physical placement before and after a routed circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layouts {
    #[serde(default)]
    pub initial: Option<Vec<usize>>,
    #[serde(rename = "final")]
    pub final_layout: Vec<usize>,
}

impl Layouts {
    pub fn new(initial: Vec<usize>, final_layout: Vec<usize>) -> Layouts {
        Layouts {
            initial: Some(initial),
            final_layout,
        }
    }

    /// Only a final permutation; the circuit starts with logical `i` on physical `i`.
    pub fn final_only(final_layout: Vec<usize>) -> Layouts {
        Layouts {
            initial: None,
            final_layout,
        }
    }

    pub fn identity(n: usize) -> Layouts {
        Layouts::final_only((0..n).collect())
    }

    fn initial_or_identity(&self) -> Vec<usize> {
        self.initial
            .clone()
            .unwrap_or_else(|| (0..self.final_layout.len()).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    /// Largest amplitude deviation after phase alignment, over all inputs.
    pub max_deviation: f64,
    pub inputs_checked: usize,
}

impl EquivalenceReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Check that `b` (on physical wires) implements `a` (on logical wires) under `layouts`,
/// up to one global phase per input, at amplitude tolerance 1e-8.
pub fn equivalent_up_to_permutation(
    a: &Circuit,
    b: &Circuit,
    layouts: &Layouts,
) -> Result<bool, SimError> {
    Ok(equivalence_report(a, b, layouts)?.holds(1e-8))
}

pub fn equivalence_report(
    a: &Circuit,
    b: &Circuit,
    layouts: &Layouts,
) -> Result<EquivalenceReport, SimError> {
    let n = a.num_qubits;
    if n > MAX_DENSE_QUBITS {
        return Err(SimError::TooManyQubits(n));
    }
    let initial = layouts.initial_or_identity();
    let fin = &layouts.final_layout;
    if initial.len() < n || fin.len() < n {
        return Err(SimError::WidthMismatch {
            expected: n,
            got: initial.len().min(fin.len()),
        });
    }
    if b.gates().iter().any(|g| g.kind == GateKind::Measure) {
        return Err(SimError::MeasurementUnsupported);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(INPUT_SEED);
    let mut inputs = vec![vec![[crate::linalg::ONE, ZERO]; n]];
    for _ in 0..RANDOM_INPUTS {
        inputs.push(random_product_factors(n, &mut rng));
    }
    let mut worst: f64 = 0.0;
    for factors in &inputs {
        let expected = simulate(a, &Statevector::product(factors)?)?;
        let mut phys = SlotState::new(b.num_qubits.max(n), &initial[..n], factors)?;
        for g in b.gates() {
            phys.apply(g)?;
        }
        worst = worst.max(compare(&phys, &expected, &fin[..n]));
    }
    Ok(EquivalenceReport {
        max_deviation: worst,
        inputs_checked: inputs.len(),
    })
}

/// Align phases on the largest expected amplitude and return the worst deviation.
fn compare(phys: &SlotState, expected: &Statevector, fin: &[usize]) -> f64 {
    let exp = expected.amplitudes();
    let mut logical = vec![ZERO; exp.len()];
    let mut garbage: f64 = 0.0;
    let slot_to_logical: Vec<Option<usize>> = phys
        .slots
        .iter()
        .map(|&p| fin.iter().position(|&f| f == p))
        .collect();
    for (i, &amp) in phys.amps.iter().enumerate() {
        let mut j = 0usize;
        let mut stray = false;
        for (s, l) in slot_to_logical.iter().enumerate() {
            if (i >> s) & 1 == 1 {
                match l {
                    Some(l) => j |= 1 << l,
                    None => stray = true,
                }
            }
        }
        if stray {
            garbage = garbage.max(amp.norm());
        } else {
            logical[j] = amp;
        }
    }
    let pivot = (0..exp.len())
        .max_by(|&x, &y| exp[x].norm().total_cmp(&exp[y].norm()))
        .unwrap_or(0);
    let ratio = logical[pivot] / exp[pivot];
    let phase = if ratio.norm() > 0.0 {
        ratio / ratio.norm()
    } else {
        crate::linalg::ONE
    };
    let dev = exp
        .iter()
        .zip(&logical)
        .map(|(e, l)| (l - e * phase).norm())
        .fold(0.0, f64::max);
    dev.max(garbage)
}

/// Dense amplitudes over the physical wires that may hold data; every other wire is |0>.
struct SlotState {
    slots: Vec<usize>,
    slot_of: Vec<Option<usize>>,
    amps: Vec<C64>,
}

impl SlotState {
    fn new(num_physical: usize, initial: &[usize], factors: &[[C64; 2]]) -> Result<Self, SimError> {
        let mut slot_of = vec![None; num_physical];
        for (l, &p) in initial.iter().enumerate() {
            slot_of[p] = Some(l);
        }
        Ok(SlotState {
            slots: initial.to_vec(),
            slot_of,
            amps: Statevector::product(factors)?.amplitudes().to_vec(),
        })
    }

    fn slot(&mut self, p: usize) -> Result<usize, SimError> {
        if let Some(s) = self.slot_of[p] {
            return Ok(s);
        }
        if self.slots.len() >= MAX_SLOTS {
            return Err(SimError::TooManyQubits(self.slots.len() + 1));
        }
        let s = self.slots.len();
        self.slots.push(p);
        self.slot_of[p] = Some(s);
        self.amps.resize(self.amps.len() * 2, ZERO);
        Ok(s)
    }

    /// Drop slot `s` when its wire is back in |0>.
    fn release_if_zero(&mut self, s: usize) {
        let bit = 1usize << s;
        let leaked: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if leaked > 1e-26 {
            return;
        }
        let low = bit - 1;
        let amps = (0..self.amps.len() / 2)
            .map(|i| self.amps[(i & low) | ((i & !low) << 1)])
            .collect();
        self.amps = amps;
        let p = self.slots.remove(s);
        self.slot_of[p] = None;
        for (k, &q) in self.slots.iter().enumerate().skip(s) {
            self.slot_of[q] = Some(k);
        }
    }

    fn apply(&mut self, g: &Gate) -> Result<(), SimError> {
        match g.kind {
            GateKind::Barrier | GateKind::Id => {}
            GateKind::Measure => return Err(SimError::MeasurementUnsupported),
            _ if g.is_2q() => {
                let m = g.matrix2().unwrap();
                let (p0, p1) = (g.qubits[0], g.qubits[1]);
                // controlled gates do nothing when the control wire is known |0>
                if self.slot_of[p0].is_none() && is_controlled(g.kind) {
                    return Ok(());
                }
                let s0 = self.slot(p0)?;
                let s1 = self.slot(p1)?;
                apply_2q(&mut self.amps, s0, s1, &m);
                let (hi, lo) = if s0 > s1 { (s0, s1) } else { (s1, s0) };
                self.release_if_zero(hi);
                self.release_if_zero(lo);
            }
            _ => {
                let m = g.matrix1().unwrap();
                let s = self.slot(g.qubits[0])?;
                apply_1q(&mut self.amps, s, &m);
                self.release_if_zero(s);
            }
        }
        Ok(())
    }
}

fn is_controlled(k: GateKind) -> bool {
    matches!(k, GateKind::CX | GateKind::CY | GateKind::CZ | GateKind::CRX)
}

fn apply_1q(amps: &mut [C64], q: usize, m: &Mat2) {
    let bit = 1usize << q;
    for i in 0..amps.len() {
        if i & bit == 0 {
            let (a0, a1) = (amps[i], amps[i | bit]);
            amps[i] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            amps[i | bit] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
    }
}

fn apply_2q(amps: &mut [C64], q0: usize, q1: usize, m: &Mat4) {
    let (b0, b1) = (1usize << q0, 1usize << q1);
    for i in 0..amps.len() {
        if i & (b0 | b1) == 0 {
            let idx = [i, i | b0, i | b1, i | b0 | b1];
            let v = idx.map(|k| amps[k]);
            for (r, &k) in idx.iter().enumerate() {
                amps[k] = m[(r, 0)] * v[0] + m[(r, 1)] * v[1] + m[(r, 2)] * v[2] + m[(r, 3)] * v[3];
            }
        }
    }
}
