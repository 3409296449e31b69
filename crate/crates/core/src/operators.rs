//! Two-sided rotations, twists, polarizer projectors and the relabelling
//! permutations acting on the two-qubit polarization space.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::linalg::{c, re, ComplexMatrix4, ComplexScalar, StateVector4};

/// Angle in radians. Any finite value is accepted.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct Angle(pub f64);

impl Angle {
    pub fn radians(r: f64) -> Self {
        Angle(r)
    }

    pub fn degrees(d: f64) -> Self {
        Angle(d.to_radians())
    }

    pub fn rad(self) -> f64 {
        self.0
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle(self.0 - rhs.0)
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle(-self.0)
    }
}

/// Rotation by `theta` on side A and `phi` on side B.
///
/// This is `R(θ) ⊗ R(φ)` with the single-qubit rotation `R(a) = [[cos a, sin a], [-sin a, cos a]]`.
pub fn rotation(theta: Angle, phi: Angle) -> ComplexMatrix4 {
    let (st, ct) = theta.0.sin_cos();
    let (sp, cp) = phi.0.sin_cos();
    ComplexMatrix4::from_real([
        [ct * cp, ct * sp, st * cp, st * sp],
        [-ct * sp, ct * cp, -st * sp, st * cp],
        [-st * cp, -st * sp, ct * cp, ct * sp],
        [st * sp, -st * cp, -ct * sp, ct * cp],
    ])
}

/// Equal rotation of both parties.
pub fn rotation_both(theta: Angle) -> ComplexMatrix4 {
    rotation(theta, theta)
}

/// Opposite rotations: `theta` on A, `-theta` on B.
pub fn twist(theta: Angle) -> ComplexMatrix4 {
    rotation(theta, -theta)
}

/// Linear polarizer on side A oriented at `alpha`.
pub fn polarizer_a(alpha: Angle) -> ComplexMatrix4 {
    let (s, co) = alpha.0.sin_cos();
    let (cc, cs, ss) = (co * co, co * s, s * s);
    ComplexMatrix4::from_real([
        [cc, 0.0, cs, 0.0],
        [0.0, cc, 0.0, cs],
        [cs, 0.0, ss, 0.0],
        [0.0, cs, 0.0, ss],
    ])
}

/// Linear polarizer on side B oriented at `alpha`.
pub fn polarizer_b(alpha: Angle) -> ComplexMatrix4 {
    let (s, co) = alpha.0.sin_cos();
    let (cc, cs, ss) = (co * co, co * s, s * s);
    ComplexMatrix4::from_real([
        [cc, cs, 0.0, 0.0],
        [cs, ss, 0.0, 0.0],
        [0.0, 0.0, cc, cs],
        [0.0, 0.0, cs, ss],
    ])
}

fn permute(m: &ComplexMatrix4, perm: [usize; 4]) -> ComplexMatrix4 {
    ComplexMatrix4::from_fn(|i, j| m[(perm[i], perm[j])])
}

/// Exchanges the roles of parties A and B (`|x_a y_b⟩ ↔ |y_a x_b⟩`).
pub fn swap_parties(m: &ComplexMatrix4) -> ComplexMatrix4 {
    permute(m, [0, 2, 1, 3])
}

/// Relabels the polarization axes `x ↔ y` on both parties.
pub fn swap_axes(m: &ComplexMatrix4) -> ComplexMatrix4 {
    permute(m, [3, 2, 1, 0])
}

/// Single-qubit circular polarization states, `|L⟩ = (|x⟩ + i|y⟩)/√2` and
/// `|R⟩ = (|x⟩ - i|y⟩)/√2`.
pub fn left_circular() -> [ComplexScalar; 2] {
    [re(FRAC_1_SQRT_2), c(0.0, FRAC_1_SQRT_2)]
}

pub fn right_circular() -> [ComplexScalar; 2] {
    [re(FRAC_1_SQRT_2), c(0.0, -FRAC_1_SQRT_2)]
}

fn kron2(a: &[ComplexScalar; 2], b: &[ComplexScalar; 2]) -> [ComplexScalar; 4] {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

/// Pure states written in the circular basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircularKind {
    /// `(|L_a R_b⟩ + |R_a L_b⟩)/√2`
    LrSym,
}

/// Expands a circular-basis state into the linear `x/y` basis.
pub fn circular_basis_vector(kind: CircularKind) -> StateVector4 {
    match kind {
        CircularKind::LrSym => {
            let lr = kron2(&left_circular(), &right_circular());
            let rl = kron2(&right_circular(), &left_circular());
            let amps = std::array::from_fn(|k| (lr[k] + rl[k]) * FRAC_1_SQRT_2);
            StateVector4::new(amps).expect("circular basis states are unit vectors")
        }
    }
}
