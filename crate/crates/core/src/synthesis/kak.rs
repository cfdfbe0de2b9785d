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

//! Cartan (KAK) decomposition of two-qubit unitaries.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use nalgebra::{Matrix4, SymmetricEigen};

use super::SynthesisError;
use crate::linalg::{
    c, expi, hadamard, kron, pauli_x, pauli_y, pauli_z, unitarity_error, Mat2, Mat4, C64, I, ONE,
    ZERO,
};

const UNITARY_TOL: f64 = 1e-9;
const CHAMBER_TOL: f64 = 1e-10;

/// `U = e^{i global_phase} (post_b ⊗ post_a) · exp(i(x XX + y YY + z ZZ)) · (pre_b ⊗ pre_a)`,
/// where `a` is the low (first) qubit of the pair.
#[derive(Clone, Debug, PartialEq)]
pub struct KakDecomposition {
    pub pre_a: Mat2,
    pub pre_b: Mat2,
    pub post_a: Mat2,
    pub post_b: Mat2,
    pub weyl: (f64, f64, f64),
    pub global_phase: f64,
}

impl KakDecomposition {
    pub fn to_matrix(&self) -> Mat4 {
        let (x, y, z) = self.weyl;
        kron(&self.post_b, &self.post_a)
            * canonical_gate(x, y, z)
            * kron(&self.pre_b, &self.pre_a)
            * expi(self.global_phase)
    }
}

/// `exp(i(x XX + y YY + z ZZ))`.
pub fn canonical_gate(x: f64, y: f64, z: f64) -> Mat4 {
    let b = magic();
    let (dx, dy, dz) = magic_diagonals();
    let d = Mat4::from_diagonal(&nalgebra::Vector4::from_fn(|k, _| {
        expi(x * dx[k] + y * dy[k] + z * dz[k])
    }));
    b * d * b.adjoint()
}

fn magic() -> Mat4 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix4::new(
        c(s, 0.0), ZERO, ZERO, c(0.0, s),
        ZERO, c(0.0, s), c(s, 0.0), ZERO,
        ZERO, c(0.0, s), c(-s, 0.0), ZERO,
        c(s, 0.0), ZERO, ZERO, c(0.0, -s),
    )
}

/// Diagonals of XX, YY and ZZ in the magic basis.
fn magic_diagonals() -> ([f64; 4], [f64; 4], [f64; 4]) {
    let b = magic();
    let diag = |p: Mat2| {
        let m = b.adjoint() * kron(&p, &p) * b;
        [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re]
    };
    (diag(pauli_x()), diag(pauli_y()), diag(pauli_z()))
}

/// Split a 4x4 tensor product into `(high, low)` factors with unit determinant.
fn tensor_factors(k: &Mat4) -> Option<(Mat2, Mat2)> {
    let (mut r0, mut c0, mut best) = (0, 0, 0.0);
    for r in 0..4 {
        for col in 0..4 {
            if k[(r, col)].norm() > best {
                best = k[(r, col)].norm();
                (r0, c0) = (r, col);
            }
        }
    }
    let (k_lo, l_lo) = (r0 % 2, c0 % 2);
    let (i0, j0) = (r0 / 2, c0 / 2);
    let mut hi = Mat2::from_fn(|i, j| k[(2 * i + k_lo, 2 * j + l_lo)]);
    let det = hi.determinant();
    if det.norm() < 1e-12 {
        return None;
    }
    hi /= det.sqrt();
    let lo = Mat2::from_fn(|kk, ll| k[(2 * i0 + kk, 2 * j0 + ll)] / hi[(i0, j0)]);
    Some((hi, lo))
}

pub fn check_unitary(u: &Mat4) -> Result<(), SynthesisError> {
    if !u.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || unitarity_error(u) > UNITARY_TOL {
        return Err(SynthesisError::NotUnitary);
    }
    Ok(())
}

/// Raw decomposition `U = e^{iφ} K1 · N(x,y,z) · K2` with coordinates not yet canonical.
fn raw_kak(u: &Mat4) -> Result<KakDecomposition, SynthesisError> {
    check_unitary(u)?;
    let det = u.determinant();
    let phase0 = det.arg() / 4.0;
    let su = u * expi(-phase0);
    let b = magic();
    let up = b.adjoint() * su * b;
    let m = up.transpose() * up;
    let re = m.map(|z| z.re);
    let im = m.map(|z| z.im);
    let mut found = None;
    for t in [0.0, 1.0, 0.618_033_988_7, -1.414_213_562, 2.718_281_828, -0.333_333_3, 3.141_59] {
        let eig = SymmetricEigen::new(re + im * t);
        let mut p = eig.eigenvectors;
        if p.determinant() < 0.0 {
            p.column_mut(0).neg_mut();
        }
        let pc = p.map(|x| c(x, 0.0));
        let dm = pc.transpose() * m * pc;
        let off = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| dm[(i, j)].norm())
            .fold(0.0, f64::max);
        if off < 1e-10 {
            found = Some((pc, dm));
            break;
        }
    }
    let (p, dm) = found.ok_or(SynthesisError::SynthesisResidual(f64::NAN))?;
    let mut dsqrt: [C64; 4] = std::array::from_fn(|k| dm[(k, k)].sqrt());
    let prod: C64 = dsqrt.iter().product();
    if prod.re < 0.0 {
        dsqrt[0] = -dsqrt[0];
    }
    let dinv = Mat4::from_diagonal(&nalgebra::Vector4::from_fn(|k, _| ONE / dsqrt[k]));
    let o1 = up * p * dinv;
    let k1 = b * o1 * b.adjoint();
    let k2 = b * p.transpose() * b.adjoint();
    let lam: [f64; 4] = std::array::from_fn(|k| dsqrt[k].arg());
    let (dx, dy, dz) = magic_diagonals();
    let dot = |v: [f64; 4]| (0..4).map(|k| v[k] * lam[k]).sum::<f64>() / 4.0;
    let g = lam.iter().sum::<f64>() / 4.0;
    let (post_b, post_a) = tensor_factors(&k1).ok_or(SynthesisError::SynthesisResidual(f64::NAN))?;
    let (pre_b, pre_a) = tensor_factors(&k2).ok_or(SynthesisError::SynthesisResidual(f64::NAN))?;
    Ok(KakDecomposition {
        pre_a,
        pre_b,
        post_a,
        post_b,
        weyl: (dot(dx), dot(dy), dot(dz)),
        global_phase: phase0 + g,
    })
}

fn s_gate() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, I)
}

fn sqrt_x() -> Mat2 {
    // exp(-i pi/4 X): Y -> Z, Z -> -Y under conjugation
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat2::new(c(s, 0.0), c(0.0, -s), c(0.0, -s), c(s, 0.0))
}

struct Canon {
    k: KakDecomposition,
    w: [f64; 3],
}

impl Canon {
    /// Move `N` by `(P⊗P)^n` so coordinate `i` drops by `n·π/2`.
    fn shift(&mut self, i: usize, n: i64) {
        self.w[i] -= n as f64 * FRAC_PI_2;
        self.k.global_phase += n as f64 * FRAC_PI_2;
        if n.rem_euclid(2) == 1 {
            let p = [pauli_x(), pauli_y(), pauli_z()][i];
            self.k.pre_a = p * self.k.pre_a;
            self.k.pre_b = p * self.k.pre_b;
        }
    }

    /// Negate the two coordinates other than `keep` by conjugating with a Pauli on one qubit.
    fn flip(&mut self, keep: usize) {
        let l = [pauli_x(), pauli_y(), pauli_z()][keep];
        for (i, w) in self.w.iter_mut().enumerate() {
            if i != keep {
                *w = -*w;
            }
        }
        self.k.post_b *= l;
        self.k.pre_b = l * self.k.pre_b;
    }

    /// Exchange coordinates `i < j`.
    fn swap(&mut self, i: usize, j: usize) {
        let v = match (i, j) {
            (0, 1) => s_gate(),
            (0, 2) => hadamard(),
            (1, 2) => sqrt_x(),
            _ => unreachable!(),
        };
        let vd = v.adjoint();
        self.w.swap(i, j);
        self.k.post_a *= vd;
        self.k.post_b *= vd;
        self.k.pre_a = v * self.k.pre_a;
        self.k.pre_b = v * self.k.pre_b;
    }

    fn canonicalize(&mut self) {
        for i in 0..3 {
            let mut n = (self.w[i] / FRAC_PI_2).round() as i64;
            if self.w[i] - n as f64 * FRAC_PI_2 <= -FRAC_PI_4 + CHAMBER_TOL {
                n -= 1;
            }
            self.shift(i, n);
        }
        for (i, j) in [(0, 1), (1, 2), (0, 1)] {
            if self.w[i].abs() < self.w[j].abs() {
                self.swap(i, j);
            }
        }
        if self.w[0] < 0.0 {
            self.flip(1);
        }
        if self.w[1] < 0.0 {
            self.flip(0);
        }
        if (self.w[0] - FRAC_PI_4).abs() < CHAMBER_TOL && self.w[2] < 0.0 {
            self.shift(0, 1);
            self.flip(1);
        }
        self.k.weyl = (self.w[0], self.w[1], self.w[2]);
    }
}

/// KAK decomposition with Weyl coordinates in the chamber `π/4 ≥ x ≥ y ≥ |z|`.
pub fn kak_decompose(u: &Mat4) -> Result<KakDecomposition, SynthesisError> {
    let k = raw_kak(u)?;
    let (x, y, z) = k.weyl;
    let mut cn = Canon { k, w: [x, y, z] };
    cn.canonicalize();
    let err = crate::linalg::phase_distance(&cn.k.to_matrix(), u);
    if err > 1e-9 {
        return Err(SynthesisError::SynthesisResidual(err));
    }
    Ok(cn.k)
}

/// Weyl coordinates only.
pub fn weyl_coordinates(u: &Mat4) -> Result<(f64, f64, f64), SynthesisError> {
    Ok(kak_decompose(u)?.weyl)
}
