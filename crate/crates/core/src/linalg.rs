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

//! Small dense complex matrix helpers shared by the simulator, synthesis and commutation code.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn expi(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

pub fn hadamard() -> Mat2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Mat2::new(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0))
}

/// `kron(high, low)`: `low` acts on the least significant bit of the 2-qubit index.
pub fn kron(high: &Mat2, low: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, col| high[(r >> 1, col >> 1)] * low[(r & 1, col & 1)])
}

pub fn swap4() -> Mat4 {
    let mut m = Mat4::zeros();
    m[(0, 0)] = ONE;
    m[(1, 2)] = ONE;
    m[(2, 1)] = ONE;
    m[(3, 3)] = ONE;
    m
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff<const N: usize>(
    a: &nalgebra::SMatrix<C64, N, N>,
    b: &nalgebra::SMatrix<C64, N, N>,
) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Distance between `a` and `b` after removing the best global phase, measured as the largest
/// entry-wise deviation.
pub fn phase_distance<const N: usize>(
    a: &nalgebra::SMatrix<C64, N, N>,
    b: &nalgebra::SMatrix<C64, N, N>,
) -> f64 {
    // <b, a> gives the optimal phase in the Frobenius sense.
    let overlap: C64 = b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum();
    if overlap.norm() < 1e-300 {
        return max_abs_diff(a, b).max(1.0);
    }
    let phase = overlap / overlap.norm();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

pub fn unitarity_error<const N: usize>(u: &nalgebra::SMatrix<C64, N, N>) -> f64 {
    let prod = u * u.adjoint();
    max_abs_diff(&prod, &nalgebra::SMatrix::<C64, N, N>::identity())
}

/// Haar-random unitary of dimension `N` via QR of a complex Ginibre matrix with the phase fix on
/// the diagonal of R.
pub fn haar_unitary<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> nalgebra::SMatrix<C64, N, N> {
    let g = nalgebra::DMatrix::<C64>::from_fn(N, N, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = nalgebra::SMatrix::<C64, N, N>::from_fn(|i, j| q[(i, j)]);
    for j in 0..N {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..N {
            out[(i, j)] *= ph;
        }
    }
    out
}

pub fn haar_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    haar_unitary::<2, R>(rng)
}

pub fn haar_unitary4<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    haar_unitary::<4, R>(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kron_is_little_endian() {
        // X on the low qubit maps |00> (index 0) to |01> (index 1).
        let m = kron(&Mat2::identity(), &pauli_x());
        assert_eq!(m[(1, 0)], ONE);
        let m = kron(&pauli_x(), &Mat2::identity());
        assert_eq!(m[(2, 0)], ONE);
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert!(unitarity_error(&haar_unitary4(&mut rng)) < 1e-12);
        }
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary4(&mut rng);
        let v = u * expi(1.234);
        assert!(phase_distance(&u, &v) < 1e-12);
        assert!(max_abs_diff(&u, &v) > 0.1);
    }
}
