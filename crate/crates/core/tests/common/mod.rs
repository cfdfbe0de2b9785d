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

#![allow(dead_code)]

use nassc::circuit::{Circuit, Gate, GateKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random circuit of CX, CRX, CZ and single-qubit rotations.
pub fn random_circuit(n: usize, two_qubit: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n, 0);
    let mut placed = 0;
    while placed < two_qubit {
        let a = rng.random_range(0..n);
        match rng.random_range(0..6) {
            0 => c.push(Gate::u3(rng.random(), rng.random(), rng.random(), a)).unwrap(),
            1 => c.push(Gate::h(a)).unwrap(),
            k => {
                let mut b = rng.random_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                let g = match k {
                    2 => Gate::crx(rng.random_range(-3.0..3.0), a, b),
                    3 => Gate::two(GateKind::CZ, a, b),
                    _ => Gate::cx(a, b),
                };
                c.push(g).unwrap();
                placed += 1;
            }
        }
    }
    c
}

/// Three controlled rotations on pairs (1,2), (0,1), (0,2).
pub fn three_rotations() -> Circuit {
    Circuit::from_gates(
        3,
        vec![Gate::crx(0.7, 1, 2), Gate::crx(1.3, 0, 1), Gate::crx(-0.4, 0, 2)],
    )
    .unwrap()
}

/// Six gates on four wires whose third layer needs a SWAP on linear(4).
pub fn lookahead_circuit() -> Circuit {
    Circuit::from_gates(
        4,
        vec![
            Gate::cx(2, 1),
            Gate::crx(0.9, 0, 1),
            Gate::cx(2, 3),
            Gate::cx(0, 2),
            Gate::crx(0.5, 1, 2),
            Gate::cx(0, 1),
        ],
    )
    .unwrap()
}

/// A commuting pair of CX on a shared target, a U3, then a gate that forces SWAP(0,1) on the
/// path 2-0-1-3.
pub fn cx_before_swap() -> (Circuit, nassc::topology::CouplingMap) {
    let c = Circuit::from_gates(
        4,
        vec![Gate::cx(1, 0), Gate::cx(2, 0), Gate::u3(0.4, 0.3, -0.2, 0), Gate::cx(0, 3)],
    )
    .unwrap();
    let map = nassc::topology::CouplingMap::new(4, [(0, 1), (0, 2), (1, 3)]).unwrap();
    (c, map)
}

/// Three controlled rotations sharing a control, sandwiched by two SWAPs on (0,1) over the star
/// centred on physical 1.
pub fn swap_sandwich() -> (Circuit, nassc::topology::CouplingMap) {
    let c = Circuit::from_gates(
        4,
        vec![
            Gate::crx(0.6, 0, 2),
            Gate::crx(-1.2, 0, 3),
            Gate::crx(0.25, 0, 2),
            Gate::cx(1, 3),
        ],
    )
    .unwrap();
    let map = nassc::topology::CouplingMap::new(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
    (c, map)
}
