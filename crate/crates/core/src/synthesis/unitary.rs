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

//! Minimal-CNOT analysis and re-synthesis of two-qubit unitaries.

use std::f64::consts::FRAC_PI_2;

use super::kak::{check_unitary, kak_decompose, KakDecomposition};
use super::SynthesisError;
use crate::circuit::{zyz_angles, Circuit, Gate, GateKind};
use crate::linalg::{expi, kron, pauli_y, phase_distance, swap4, Mat2, Mat4};

const INVARIANT_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-8;

/// Unitary of a gate sequence acting only on `(a, b)`; `a` is the low bit.
pub fn pair_unitary<'g>(gates: impl IntoIterator<Item = &'g Gate>, a: usize, b: usize) -> Mat4 {
    let id = Mat2::identity();
    let mut u = Mat4::identity();
    for g in gates {
        let m = if g.is_1q() {
            let m1 = g.matrix1().unwrap();
            if g.qubits[0] == a {
                kron(&id, &m1)
            } else {
                debug_assert_eq!(g.qubits[0], b);
                kron(&m1, &id)
            }
        } else if g.is_2q() {
            let m2 = g.matrix2().unwrap();
            if g.qubits[0] == a {
                m2
            } else {
                swap4() * m2 * swap4()
            }
        } else {
            continue;
        };
        u = m * u;
    }
    u
}

/// Fewest CX gates that implement `u` with free single-qubit gates.
pub fn min_cnot_count(u: &Mat4) -> Result<usize, SynthesisError> {
    check_unitary(u)?;
    let su = u * expi(-u.determinant().arg() / 4.0);
    let yy = kron(&pauli_y(), &pauli_y());
    let gamma = su * yy * su.transpose() * yy;
    let id = Mat4::identity();
    let near = |a: &Mat4, b: &Mat4| crate::linalg::max_abs_diff(a, b) < INVARIANT_TOL;
    if near(&gamma, &id) || near(&gamma, &-id) {
        return Ok(0);
    }
    let tr = gamma.trace();
    if tr.norm() < INVARIANT_TOL && near(&(gamma * gamma), &-id) {
        return Ok(1);
    }
    if tr.im.abs() < INVARIANT_TOL {
        return Ok(2);
    }
    Ok(3)
}

/// Fixed CX skeleton whose interaction coordinates equal `w`.
fn template(count: usize, w: (f64, f64, f64), a: usize, b: usize) -> Vec<Gate> {
    let (x, y, z) = w;
    match count {
        0 => vec![],
        1 => vec![Gate::cx(a, b)],
        2 => vec![
            Gate::cx(a, b),
            Gate::u3(-2.0 * x, -FRAC_PI_2, FRAC_PI_2, a),
            Gate::rz(-2.0 * y, b),
            Gate::cx(a, b),
        ],
        _ => vec![
            Gate::rz(FRAC_PI_2, b),
            Gate::cx(b, a),
            Gate::rz(-2.0 * z - FRAC_PI_2, a),
            Gate::u3(FRAC_PI_2 - 2.0 * x, 0.0, 0.0, b),
            Gate::cx(a, b),
            Gate::u3(2.0 * y - FRAC_PI_2, 0.0, 0.0, b),
            Gate::cx(b, a),
            Gate::rz(-FRAC_PI_2, a),
        ],
    }
}

fn local(m: &Mat2, q: usize, out: &mut Vec<Gate>) {
    if phase_distance(m, &Mat2::identity()) < 1e-12 {
        return;
    }
    let (t, p, l, _) = zyz_angles(m);
    out.push(Gate::u3(t, p, l, q));
}

fn assemble(u: &Mat4, k: &KakDecomposition, count: usize, a: usize, b: usize) -> Result<Vec<Gate>, SynthesisError> {
    let body = template(count, k.weyl, a, b);
    let t = kak_decompose(&pair_unitary(&body, a, b))?;
    let mut out = Vec::with_capacity(body.len() + 4);
    local(&(t.pre_a.adjoint() * k.pre_a), a, &mut out);
    local(&(t.pre_b.adjoint() * k.pre_b), b, &mut out);
    out.extend(body);
    local(&(k.post_a * t.post_a.adjoint()), a, &mut out);
    local(&(k.post_b * t.post_b.adjoint()), b, &mut out);
    let err = phase_distance(&pair_unitary(&out, a, b), u);
    if err > RESIDUAL_TOL {
        return Err(SynthesisError::SynthesisResidual(err));
    }
    Ok(out)
}

/// Gates on `(a, b)` implementing `u` up to global phase with `min_cnot_count(u)` CX gates.
/// A cheaper skeleton that misses the residual tolerance falls back to the 3-CX one.
pub fn synthesize_gates(u: &Mat4, a: usize, b: usize) -> Result<Vec<Gate>, SynthesisError> {
    check_unitary(u)?;
    if phase_distance(u, &swap4()) < 1e-12 {
        return Ok(vec![Gate::cx(a, b), Gate::cx(b, a), Gate::cx(a, b)]);
    }
    let count = min_cnot_count(u)?;
    let k = kak_decompose(u)?;
    match assemble(u, &k, count, a, b) {
        Ok(g) => Ok(g),
        Err(SynthesisError::SynthesisResidual(_)) if count < 3 => assemble(u, &k, 3, a, b),
        Err(e) => Err(e),
    }
}

/// Circuit over `max(a, b) + 1` wires implementing `u` on the pair.
pub fn kak_synthesize(u: &Mat4, pair: (usize, usize)) -> Result<Circuit, SynthesisError> {
    let gates = synthesize_gates(u, pair.0, pair.1)?;
    let mut c = Circuit::new(pair.0.max(pair.1) + 1, 0);
    for g in gates {
        c.push_unchecked(g);
    }
    Ok(c)
}

/// CX gates used once every two-qubit gate takes its standard expansion.
pub fn cx_count(gates: &[Gate]) -> usize {
    gates.iter().map(|g| cx_cost(g.kind)).sum()
}

pub fn cx_cost(kind: GateKind) -> usize {
    match kind {
        GateKind::CX | GateKind::CY | GateKind::CZ => 1,
        GateKind::CRX => 2,
        GateKind::Swap => 3,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_unitary2, haar_unitary4};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    fn cx() -> Mat4 {
        Gate::cx(0, 1).matrix2().unwrap()
    }

    #[test]
    fn named_counts() {
        assert_eq!(min_cnot_count(&Mat4::identity()).unwrap(), 0);
        assert_eq!(min_cnot_count(&swap4()).unwrap(), 3);
        assert_eq!(min_cnot_count(&cx()).unwrap(), 1);
        assert_eq!(min_cnot_count(&(swap4() * cx())).unwrap(), 2);
        assert_eq!(min_cnot_count(&(cx() * cx())).unwrap(), 0);
        let cz = Gate::two(GateKind::CZ, 0, 1).matrix2().unwrap();
        assert_eq!(min_cnot_count(&cz).unwrap(), 1);
    }

    #[test]
    fn every_template_count_reassembles() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for count in 0..4 {
            for _ in 0..50 {
                let mut gates = vec![];
                for k in 0..=count {
                    let u0 = haar_unitary2(&mut rng);
                    let u1 = haar_unitary2(&mut rng);
                    let (t0, p0, l0, _) = zyz_angles(&u0);
                    let (t1, p1, l1, _) = zyz_angles(&u1);
                    gates.push(Gate::u3(t0, p0, l0, 0));
                    gates.push(Gate::u3(t1, p1, l1, 1));
                    if k < count {
                        gates.push(if k % 2 == 0 { Gate::cx(0, 1) } else { Gate::cx(1, 0) });
                    }
                }
                let u = pair_unitary(&gates, 0, 1);
                let want = if count == 3 { 3 } else { count };
                assert_eq!(min_cnot_count(&u).unwrap(), want);
                let out = synthesize_gates(&u, 0, 1).unwrap();
                assert_eq!(cx_count(&out), want);
            }
        }
    }

    #[test]
    fn haar_needs_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let u = haar_unitary4(&mut rng);
            let c = kak_synthesize(&u, (0, 1)).unwrap();
            assert_eq!(c.count(GateKind::CX), 3);
            assert!(phase_distance(&pair_unitary(c.gates(), 0, 1), &u) < 1e-8);
        }
    }

    #[test]
    fn swap_ladder_and_reversed_pair() {
        let out = synthesize_gates(&swap4(), 3, 1).unwrap();
        assert_eq!(out, vec![Gate::cx(3, 1), Gate::cx(1, 3), Gate::cx(3, 1)]);
        let u = pair_unitary(&[Gate::cx(1, 0), Gate::h(0)], 0, 1);
        let g = synthesize_gates(&u, 0, 1).unwrap();
        assert_eq!(cx_count(&g), 1);
        assert!(phase_distance(&pair_unitary(&g, 0, 1), &u) < 1e-8);
    }

    #[test]
    fn chamber_face_points() {
        for &(x, y, z) in &[
            (FRAC_PI_4, FRAC_PI_4, 0.1),
            (FRAC_PI_4, 0.2, -0.2),
            (0.3, 0.3, 0.3),
            (0.3, 0.3, -0.3),
            (FRAC_PI_4, 1e-10, 0.0),
            (0.2, 0.0, 0.0),
        ] {
            let u = super::super::kak::canonical_gate(x, y, z);
            let g = synthesize_gates(&u, 0, 1).unwrap();
            assert_eq!(cx_count(&g), min_cnot_count(&u).unwrap());
        }
    }

    #[test]
    fn not_unitary() {
        assert_eq!(min_cnot_count(&(Mat4::identity() * crate::linalg::c(2.0, 0.0))), Err(SynthesisError::NotUnitary));
        assert!(kak_synthesize(&Mat4::zeros(), (0, 1)).is_err());
    }
}
