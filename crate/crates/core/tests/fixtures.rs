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

use std::f64::consts::PI;
use std::path::PathBuf;

use nassc::circuit::qasm::parse_qasm;
use nassc::circuit::{simulate, Circuit, GateKind, Statevector};
use nassc::synthesis::cx_count;
use nassc::linalg::expi;

fn fixture(name: &str) -> Circuit {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    parse_qasm(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn run(name: &str) -> Statevector {
    let c = fixture(name);
    simulate(&c, &Statevector::zero(c.num_qubits).unwrap()).unwrap()
}

fn probability(s: &Statevector, pred: impl Fn(usize) -> bool) -> f64 {
    s.amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| pred(*i))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

#[test]
fn grover_finds_marked_state() {
    for (name, data, marked, floor) in [
        ("bench/grover_4.qasm", 4, 0b1011, 0.95),
        ("bench/grover_6.qasm", 4, 0b0110, 0.95),
        ("bench/grover_8.qasm", 5, 0b10011, 0.99),
    ] {
        let c = fixture(name);
        let s = simulate(&c, &Statevector::zero(c.num_qubits).unwrap()).unwrap();
        // ancillas come back to |0>
        assert!(probability(&s, |i| i >> data == 0) > 1.0 - 1e-9, "{name}");
        let p = probability(&s, |i| i == marked);
        assert!(p > floor, "{name}: {p}");
    }
}

#[test]
fn bernstein_vazirani_queries_every_bit() {
    let c = fixture("bench/bv_19.qasm");
    let cx: Vec<_> = c.gates().iter().filter(|g| g.kind == GateKind::CX).collect();
    assert_eq!(cx.len(), 18);
    for (i, g) in cx.iter().enumerate() {
        assert_eq!(g.qubits.as_slice(), &[i, 18]);
    }
}

#[test]
fn qft_without_reversal() {
    // the gates after the last one touching wire 12 or above form the 12-qubit transform
    let n = 12;
    let full = fixture("bench/qft_15.qasm");
    let start = full.gates().iter().rposition(|g| g.qubits.iter().any(|&q| q >= n)).unwrap() + 1;
    let c = Circuit::from_gates(n, full.gates()[start..].to_vec()).unwrap();
    let x = 2345usize;
    let s = simulate(&c, &Statevector::basis(n, x).unwrap()).unwrap();
    let dim = 1usize << n;
    let rev = |y: usize| (0..n).fold(0, |acc, b| acc | ((y >> b) & 1) << (n - 1 - b));
    let norm = (dim as f64).sqrt();
    let mut worst: f64 = 0.0;
    for (y, a) in s.amplitudes().iter().enumerate() {
        let want = expi(2.0 * PI * ((x * rev(y)) % dim) as f64 / dim as f64) / norm;
        worst = worst.max((a - want).norm());
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn phase_estimation_is_exact() {
    let s = run("bench/qpe_9.qasm");
    // eigenphase 0.3125 = 80/256, target qubit left in |1>
    let p = probability(&s, |i| i == 80 | 1 << 8);
    assert!((p - 1.0).abs() < 1e-9, "{p}");
}

#[test]
fn cuccaro_adds() {
    let c = fixture("bench/adder_10.qasm");
    let encode = |a: usize, b: usize, cin: usize| {
        let mut idx = cin;
        for i in 0..4 {
            idx |= (b >> i & 1) << (1 + 2 * i);
            idx |= (a >> i & 1) << (2 + 2 * i);
        }
        idx
    };
    for (a, b, cin) in [(11, 6, 0), (3, 4, 1), (15, 15, 1), (0, 0, 0)] {
        let s = simulate(&c, &Statevector::basis(10, encode(a, b, cin)).unwrap()).unwrap();
        let sum = a + b + cin;
        let want = encode(a, sum & 15, cin) | (sum >> 4) << 9;
        assert!((probability(&s, |i| i == want) - 1.0).abs() < 1e-9, "{a}+{b}+{cin}");
    }
}

#[test]
fn suite_sizes() {
    for (name, qubits, cx) in [
        ("bench/grover_4.qasm", 4, 84),
        ("bench/grover_6.qasm", 6, 6 * (4 * 6 + 1)),
        ("bench/grover_8.qasm", 8, 8 * (6 * 6 + 1)),
        ("bench/vqe_8.qasm", 8, 84),
        ("bench/vqe_12.qasm", 12, 198),
        ("bench/bv_19.qasm", 19, 18),
        ("bench/qft_15.qasm", 15, 210),
        ("bench/qft_20.qasm", 20, 380),
        ("bench/qpe_9.qasm", 9, 72),
        ("bench/adder_10.qasm", 10, 65),
    ] {
        let c = fixture(name);
        assert_eq!(c.num_qubits, qubits, "{name}");
        assert_eq!(cx_count(c.gates()), cx, "{name}");
    }
}
