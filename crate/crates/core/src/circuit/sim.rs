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

use rand::Rng;

use super::{Circuit, Gate, GateKind};
use crate::linalg::{haar_unitary2, Mat2, Mat4, C64, ONE, ZERO};

/// Largest register the dense oracle accepts.
pub const MAX_DENSE_QUBITS: usize = 14;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SimError {
    #[error("{0} qubits exceed the simulator limit of {MAX_DENSE_QUBITS}")]
    TooManyQubits(usize),
    #[error("measurement is not supported by the statevector oracle")]
    MeasurementUnsupported,
    #[error("state has {got} qubits, circuit needs {expected}")]
    WidthMismatch { expected: usize, got: usize },
}

/// Dense state over `num_qubits` wires. Qubit 0 is the least significant bit of the index.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl Statevector {
    pub fn zero(num_qubits: usize) -> Result<Statevector, SimError> {
        if num_qubits > MAX_DENSE_QUBITS {
            return Err(SimError::TooManyQubits(num_qubits));
        }
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[0] = ONE;
        Ok(Statevector { num_qubits, amps })
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Statevector, SimError> {
        let mut s = Statevector::zero(num_qubits)?;
        s.amps[0] = ZERO;
        s.amps[index] = ONE;
        Ok(s)
    }

    /// Tensor product of single-qubit states, `factors[q]` for qubit `q`.
    pub fn product(factors: &[[C64; 2]]) -> Result<Statevector, SimError> {
        let n = factors.len();
        if n > MAX_DENSE_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        let amps = (0..1usize << n)
            .map(|idx| {
                factors
                    .iter()
                    .enumerate()
                    .map(|(q, f)| f[(idx >> q) & 1])
                    .product()
            })
            .collect();
        Ok(Statevector { num_qubits: n, amps })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Statevector {
        assert!(amps.len().is_power_of_two());
        Statevector {
            num_qubits: amps.len().trailing_zeros() as usize,
            amps,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_1q(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
                self.amps[i | bit] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
            }
        }
    }

    /// Apply a 4x4 matrix whose low index bit is `q0` and high bit is `q1`.
    pub fn apply_2q(&mut self, q0: usize, q1: usize, m: &Mat4) {
        let (b0, b1) = (1usize << q0, 1usize << q1);
        for i in 0..self.amps.len() {
            if i & (b0 | b1) == 0 {
                let idx = [i, i | b0, i | b1, i | b0 | b1];
                let v = idx.map(|k| self.amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    self.amps[k] = (0..4).map(|col| m[(r, col)] * v[col]).sum();
                }
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<(), SimError> {
        match g.kind {
            GateKind::Barrier | GateKind::Id => Ok(()),
            GateKind::Measure => Err(SimError::MeasurementUnsupported),
            _ if g.is_2q() => {
                self.apply_2q(g.qubits[0], g.qubits[1], &g.matrix2().unwrap());
                Ok(())
            }
            _ => {
                self.apply_1q(g.qubits[0], &g.matrix1().unwrap());
                Ok(())
            }
        }
    }

    /// Haar-random product state.
    pub fn random_product<R: Rng + ?Sized>(
        num_qubits: usize,
        rng: &mut R,
    ) -> Result<Statevector, SimError> {
        let factors = random_product_factors(num_qubits, rng);
        Statevector::product(&factors)
    }
}

pub(crate) fn random_product_factors<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<[C64; 2]> {
    (0..n)
        .map(|_| {
            let u = haar_unitary2(rng);
            [u[(0, 0)], u[(1, 0)]]
        })
        .collect()
}

/// Run `c` on `initial` and return the final state.
pub fn simulate(c: &Circuit, initial: &Statevector) -> Result<Statevector, SimError> {
    if c.num_qubits > MAX_DENSE_QUBITS {
        return Err(SimError::TooManyQubits(c.num_qubits));
    }
    if initial.num_qubits != c.num_qubits {
        return Err(SimError::WidthMismatch {
            expected: c.num_qubits,
            got: initial.num_qubits,
        });
    }
    if c.gates().iter().any(|g| g.kind == GateKind::Measure) {
        return Err(SimError::MeasurementUnsupported);
    }
    let mut s = initial.clone();
    for g in c.gates() {
        s.apply_gate(g)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary4;
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    #[test]
    fn x_flips_zero() {
        let c = Circuit::from_gates(1, [Gate::x(0)]).unwrap();
        let out = simulate(&c, &Statevector::zero(1).unwrap()).unwrap();
        assert!((out.amplitudes()[1] - ONE).norm() < 1e-15);
    }

    #[test]
    fn cx_fires_on_control() {
        // |01> with q0 = 1 is index 1; CX(0,1) -> |11>, index 3
        let c = Circuit::from_gates(2, [Gate::cx(0, 1)]).unwrap();
        let out = simulate(&c, &Statevector::basis(2, 1).unwrap()).unwrap();
        assert!((out.amplitudes()[3] - ONE).norm() < 1e-15);
    }

    #[test]
    fn bell_state() {
        let c = Circuit::from_gates(2, [Gate::h(0), Gate::cx(0, 1)]).unwrap();
        let out = simulate(&c, &Statevector::zero(2).unwrap()).unwrap();
        let a = out.amplitudes();
        assert!((a[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((a[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(a[1].norm() < 1e-15 && a[2].norm() < 1e-15);
    }

    #[test]
    fn rejects_measure_and_width() {
        let mut c = Circuit::new(1, 1);
        c.push(Gate::measure(0, 0)).unwrap();
        assert_eq!(
            simulate(&c, &Statevector::zero(1).unwrap()),
            Err(SimError::MeasurementUnsupported)
        );
        assert_eq!(Statevector::zero(15), Err(SimError::TooManyQubits(15)));
    }

    /// Dense reference: embed a gate matrix into a 3-qubit operator by explicit index algebra.
    fn dense_3q(g: &Gate) -> DMatrix<C64> {
        let dim = 8;
        DMatrix::from_fn(dim, dim, |r, col| {
            let qs = &g.qubits;
            let others_equal = (0..3)
                .filter(|q| !qs.contains(q))
                .all(|q| (r >> q) & 1 == (col >> q) & 1);
            if !others_equal {
                return ZERO;
            }
            let local = |i: usize| -> usize {
                qs.iter().enumerate().map(|(k, &q)| ((i >> q) & 1) << k).sum()
            };
            if g.is_2q() {
                g.matrix2().unwrap()[(local(r), local(col))]
            } else {
                g.matrix1().unwrap()[(local(r), local(col))]
            }
        })
    }

    #[test]
    fn every_gate_matches_dense_matrix_on_3_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let gates = vec![
            Gate::one(GateKind::Id, 1),
            Gate::x(2),
            Gate::one(GateKind::SX, 0),
            Gate::rz(0.37, 1),
            Gate::h(2),
            Gate::one(GateKind::Y, 0),
            Gate::one(GateKind::Z, 1),
            Gate::u3(0.3, -1.1, 2.2, 2),
            Gate::cx(2, 0),
            Gate::two(GateKind::CY, 0, 2),
            Gate::two(GateKind::CZ, 1, 2),
            Gate::crx(FRAC_PI_2, 1, 0),
            Gate::swap(0, 2),
        ];
        for g in gates {
            let s = Statevector::random_product(3, &mut rng).unwrap();
            // make it entangled as well
            let mut s2 = s.clone();
            s2.apply_2q(0, 1, &haar_unitary4(&mut rng));
            for st in [s, s2] {
                let mut out = st.clone();
                out.apply_gate(&g).unwrap();
                let v = nalgebra::DVector::from_column_slice(st.amplitudes());
                let expect = dense_3q(&g) * v;
                for (a, b) in out.amplitudes().iter().zip(expect.iter()) {
                    assert!((a - b).norm() < 1e-10, "{g}");
                }
                assert!((out.norm() - 1.0).abs() < 1e-10);
            }
        }
    }
}
