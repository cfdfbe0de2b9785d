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
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::linalg::{c, expi, hadamard, pauli_x, pauli_y, pauli_z, Mat2, Mat4, I, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    Id,
    X,
    SX,
    RZ,
    H,
    Y,
    Z,
    U3,
    CX,
    CY,
    CZ,
    CRX,
    Swap,
    Measure,
    Barrier,
}

impl GateKind {
    pub fn num_params(self) -> usize {
        match self {
            GateKind::RZ | GateKind::CRX => 1,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    /// Number of data qubits, or `None` for barriers which span any number of wires.
    pub fn num_qubits(self) -> Option<usize> {
        match self {
            GateKind::CX | GateKind::CY | GateKind::CZ | GateKind::CRX | GateKind::Swap => Some(2),
            GateKind::Barrier => None,
            _ => Some(1),
        }
    }

    /// Gates removed in pairs by commutative cancellation.
    pub fn is_self_inverse(self) -> bool {
        matches!(
            self,
            GateKind::H
                | GateKind::X
                | GateKind::Y
                | GateKind::Z
                | GateKind::CX
                | GateKind::CY
                | GateKind::CZ
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Id => "id",
            GateKind::X => "x",
            GateKind::SX => "sx",
            GateKind::RZ => "rz",
            GateKind::H => "h",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::U3 => "u3",
            GateKind::CX => "cx",
            GateKind::CY => "cy",
            GateKind::CZ => "cz",
            GateKind::CRX => "crx",
            GateKind::Swap => "swap",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GateError {
    #[error("{kind} expects {expected} qubit(s), got {got}")]
    QubitArity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{kind} expects {expected} parameter(s), got {got}")]
    ParamArity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("repeated qubit {0} in gate")]
    RepeatedQubit(usize),
    #[error("measure requires a classical bit")]
    MissingClbit,
}

/// One instruction. `qubits` is ordered: for controlled gates the control comes first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: SmallVec<[usize; 2]>,
    pub params: SmallVec<[f64; 3]>,
    /// Classical target of a `Measure`.
    pub clbit: Option<usize>,
}

impl Gate {
    pub fn try_new(kind: GateKind, qubits: &[usize], params: &[f64]) -> Result<Gate, GateError> {
        if let Some(expected) = kind.num_qubits() {
            if qubits.len() != expected {
                return Err(GateError::QubitArity {
                    kind: kind.name(),
                    expected,
                    got: qubits.len(),
                });
            }
        }
        if params.len() != kind.num_params() {
            return Err(GateError::ParamArity {
                kind: kind.name(),
                expected: kind.num_params(),
                got: params.len(),
            });
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(GateError::RepeatedQubit(*q));
            }
        }
        if kind == GateKind::Measure {
            return Err(GateError::MissingClbit);
        }
        Ok(Gate {
            kind,
            qubits: qubits.into(),
            params: params.into(),
            clbit: None,
        })
    }

    fn raw(kind: GateKind, qubits: SmallVec<[usize; 2]>, params: SmallVec<[f64; 3]>) -> Gate {
        Gate {
            kind,
            qubits,
            params,
            clbit: None,
        }
    }

    pub fn one(kind: GateKind, q: usize) -> Gate {
        debug_assert_eq!(kind.num_params(), 0);
        Gate::raw(kind, smallvec![q], SmallVec::new())
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Gate {
        assert_ne!(a, b, "two-qubit gate on a single wire");
        debug_assert_eq!(kind.num_params(), 0);
        Gate::raw(kind, smallvec![a, b], SmallVec::new())
    }

    pub fn x(q: usize) -> Gate {
        Gate::one(GateKind::X, q)
    }
    pub fn h(q: usize) -> Gate {
        Gate::one(GateKind::H, q)
    }
    pub fn rz(theta: f64, q: usize) -> Gate {
        Gate::raw(GateKind::RZ, smallvec![q], smallvec![theta])
    }
    pub fn u3(theta: f64, phi: f64, lambda: f64, q: usize) -> Gate {
        Gate::raw(GateKind::U3, smallvec![q], smallvec![theta, phi, lambda])
    }
    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::two(GateKind::CX, control, target)
    }
    pub fn crx(theta: f64, control: usize, target: usize) -> Gate {
        assert_ne!(control, target);
        Gate::raw(GateKind::CRX, smallvec![control, target], smallvec![theta])
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Swap, a, b)
    }
    pub fn measure(q: usize, clbit: usize) -> Gate {
        Gate {
            kind: GateKind::Measure,
            qubits: smallvec![q],
            params: SmallVec::new(),
            clbit: Some(clbit),
        }
    }
    pub fn barrier(qubits: &[usize]) -> Gate {
        Gate::raw(GateKind::Barrier, qubits.into(), SmallVec::new())
    }

    /// True for gates with a unitary action on exactly one qubit.
    pub fn is_1q(&self) -> bool {
        self.qubits.len() == 1 && !matches!(self.kind, GateKind::Measure | GateKind::Barrier)
    }

    pub fn is_2q(&self) -> bool {
        self.kind.num_qubits() == Some(2)
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self.kind, GateKind::Measure | GateKind::Barrier)
    }

    /// Same gate with its qubits relabelled through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| f(q)).collect(),
            params: self.params.clone(),
            clbit: self.clbit,
        }
    }

    /// 2x2 matrix of a single-qubit gate.
    pub fn matrix1(&self) -> Option<Mat2> {
        Some(match self.kind {
            GateKind::Id => Mat2::identity(),
            GateKind::X => pauli_x(),
            GateKind::Y => pauli_y(),
            GateKind::Z => pauli_z(),
            GateKind::H => hadamard(),
            GateKind::SX => Mat2::new(c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)),
            GateKind::RZ => {
                let t = self.params[0];
                Mat2::new(expi(-t / 2.0), ZERO, ZERO, expi(t / 2.0))
            }
            GateKind::U3 => u3_matrix(self.params[0], self.params[1], self.params[2]),
            _ => return None,
        })
    }

    /// 4x4 matrix of a two-qubit gate, little-endian: `qubits[0]` is the low bit.
    pub fn matrix2(&self) -> Option<Mat4> {
        let ctrl = |u: Mat2| {
            let mut m = Mat4::identity();
            // control (low bit) = 1 -> indices 1 and 3
            m[(1, 1)] = u[(0, 0)];
            m[(1, 3)] = u[(0, 1)];
            m[(3, 1)] = u[(1, 0)];
            m[(3, 3)] = u[(1, 1)];
            m
        };
        Some(match self.kind {
            GateKind::CX => ctrl(pauli_x()),
            GateKind::CY => ctrl(pauli_y()),
            GateKind::CZ => ctrl(pauli_z()),
            GateKind::CRX => {
                let t = self.params[0] / 2.0;
                ctrl(Mat2::new(
                    c(t.cos(), 0.0),
                    -I * t.sin(),
                    -I * t.sin(),
                    c(t.cos(), 0.0),
                ))
            }
            GateKind::Swap => crate::linalg::swap4(),
            _ => return None,
        })
    }

    /// Inverse gate; single-qubit inverses without a named counterpart become `U3`.
    pub fn inverse(&self) -> Gate {
        match self.kind {
            GateKind::RZ => Gate::rz(-self.params[0], self.qubits[0]),
            GateKind::CRX => Gate::crx(-self.params[0], self.qubits[0], self.qubits[1]),
            GateKind::U3 => {
                let (t, p, l) = (self.params[0], self.params[1], self.params[2]);
                Gate::u3(-t, -l, -p, self.qubits[0])
            }
            GateKind::SX => {
                let m = self.matrix1().unwrap().adjoint();
                let (t, p, l, _) = zyz_angles(&m);
                Gate::u3(t, p, l, self.qubits[0])
            }
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| format!("{p}")).collect();
            write!(f, "({})", ps.join(","))?;
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| format!("q[{q}]")).collect();
        write!(f, " {}", qs.join(","))?;
        if let Some(cb) = self.clbit {
            write!(f, " -> c[{cb}]")?;
        }
        Ok(())
    }
}

pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    Mat2::new(
        c(co, 0.0),
        -expi(lambda) * s,
        expi(phi) * s,
        expi(phi + lambda) * co,
    )
}

/// Euler angles with `u = e^{i alpha} U3(theta, phi, lambda)`; returns `(theta, phi, lambda, alpha)`.
pub fn zyz_angles(u: &Mat2) -> (f64, f64, f64, f64) {
    let a00 = u[(0, 0)].norm();
    let a10 = u[(1, 0)].norm();
    let theta = 2.0 * a10.atan2(a00);
    let eps = 1e-12;
    if a00 > eps {
        let alpha = u[(0, 0)].arg();
        let sum = u[(1, 1)].arg() - alpha;
        let phi = if a10 > eps { u[(1, 0)].arg() - alpha } else { 0.0 };
        (theta, wrap(phi), wrap(sum - phi), alpha)
    } else {
        let alpha = u[(1, 0)].arg();
        let lambda = (-u[(0, 1)]).arg() - alpha;
        (theta, 0.0, wrap(lambda), alpha)
    }
}

/// Wrap an angle into (-pi, pi].
pub fn wrap(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// The rotation angle (in (0, pi]) of a 2x2 unitary viewed as an element of SU(2) up to phase, 0
/// for identities.
pub fn rotation_angle(u: &Mat2) -> f64 {
    let det = u.determinant();
    let tr = (u[(0, 0)] + u[(1, 1)]) / det.sqrt();
    // tr = 2 cos(angle/2) up to sign
    2.0 * (tr.norm() / 2.0).min(1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_unitary2, phase_distance};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn arity_is_checked() {
        assert!(Gate::try_new(GateKind::CX, &[0], &[]).is_err());
        assert!(Gate::try_new(GateKind::RZ, &[0], &[]).is_err());
        assert_eq!(
            Gate::try_new(GateKind::CX, &[1, 1], &[]),
            Err(GateError::RepeatedQubit(1))
        );
        assert!(Gate::try_new(GateKind::U3, &[2], &[0.1, 0.2, 0.3]).is_ok());
    }

    #[test]
    fn zyz_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let u = haar_unitary2(&mut rng);
            let (t, p, l, a) = zyz_angles(&u);
            let back = u3_matrix(t, p, l) * expi(a);
            assert!(crate::linalg::max_abs_diff(&u, &back) < 1e-10);
        }
        // diagonal and anti-diagonal edge cases
        for m in [pauli_x(), pauli_z(), pauli_y(), Mat2::identity()] {
            let (t, p, l, a) = zyz_angles(&m);
            assert!(crate::linalg::max_abs_diff(&m, &(u3_matrix(t, p, l) * expi(a))) < 1e-12);
        }
    }

    #[test]
    fn inverses_multiply_to_identity() {
        let gates = [
            Gate::one(GateKind::SX, 0),
            Gate::rz(0.3, 0),
            Gate::u3(0.1, 0.2, 0.3, 0),
            Gate::h(0),
        ];
        for g in gates {
            let p = g.matrix1().unwrap() * g.inverse().matrix1().unwrap();
            assert!(phase_distance(&p, &Mat2::identity()) < 1e-12, "{g}");
        }
        let g = Gate::crx(0.7, 0, 1);
        let p = g.matrix2().unwrap() * g.inverse().matrix2().unwrap();
        assert!(crate::linalg::max_abs_diff(&p, &Mat4::identity()) < 1e-12);
    }

    #[test]
    fn sx_squares_to_x() {
        let sx = Gate::one(GateKind::SX, 0).matrix1().unwrap();
        assert!(crate::linalg::max_abs_diff(&(sx * sx), &pauli_x()) < 1e-15);
    }
}
