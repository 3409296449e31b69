//! Parametric state families, the atomic-symmetry condition and the
//! derivation of the four Bell states from it.
//!
//! States in the `ρ_aux` family are pinned down by four real numbers
//! `{c, d, f, g}`. Rotation invariance forces `g = 0, f = 2d - c - ½` and
//! twist invariance `g = 0, f = ½ - 2d - c`; in both families positivity
//! leaves an interval for `c` given `d`. The atomic symmetry then fixes `d`,
//! which collapses that interval to a single point.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::constraints::{angle_grid, validate_density, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{c, re, ComplexMatrix4, ComplexScalar, StateVector4, PSD_TOL};
use crate::operators::{polarizer_a, polarizer_b, Angle};

/// Tolerance on the consistency of the sampled atomic-symmetry equations.
const SOLVE_TOL: f64 = 1e-10;

/// Real parameters of the relabel-invariant family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParamSet {
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub g: f64,
}

/// Which classical invariance a family was built under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Rotational,
    Twist,
}

/// Angle substitution applied to the A-side polarizer on the two-sided
/// (right-hand) term of the atomic-symmetry condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomicMode {
    /// `α ↦ α`
    Parallel,
    /// `α ↦ α + π/2`
    Crossed,
    /// `α ↦ -α`
    Twist,
    /// `α ↦ -α + π/2`
    TwistCrossed,
}

impl AtomicMode {
    pub const ALL: [AtomicMode; 4] = [
        AtomicMode::Parallel,
        AtomicMode::Crossed,
        AtomicMode::Twist,
        AtomicMode::TwistCrossed,
    ];

    pub fn rhs_angle(self, alpha: Angle) -> Angle {
        match self {
            AtomicMode::Parallel => alpha,
            AtomicMode::Crossed => alpha + Angle(FRAC_PI_2),
            AtomicMode::Twist => -alpha,
            AtomicMode::TwistCrossed => -alpha + Angle(FRAC_PI_2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AtomicMode::Parallel => "parallel",
            AtomicMode::Crossed => "crossed",
            AtomicMode::Twist => "twist",
            AtomicMode::TwistCrossed => "twist-crossed",
        }
    }
}

impl fmt::Display for AtomicMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AtomicMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s || m.name().replace('-', "_") == s)
            .ok_or_else(|| Error::UnknownMode(s.to_string()))
    }
}

/// The four Bell states, each tied to one family and one atomic mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn family(self) -> Family {
        match self {
            BellKind::PhiPlus | BellKind::PsiMinus => Family::Rotational,
            BellKind::PhiMinus | BellKind::PsiPlus => Family::Twist,
        }
    }

    pub fn mode(self) -> AtomicMode {
        match self {
            BellKind::PhiPlus => AtomicMode::Parallel,
            BellKind::PsiMinus => AtomicMode::Crossed,
            BellKind::PhiMinus => AtomicMode::Twist,
            BellKind::PsiPlus => AtomicMode::TwistCrossed,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Relabel-invariant state with unpolarized reduced matrices.
pub fn build_rho_aux(p: ParamSet) -> ComplexMatrix4 {
    let ParamSet { c: cc, d, f, g } = p;
    let ig = c(0.0, g);
    let h = re(0.5 - d);
    ComplexMatrix4::from_rows([
        [re(d), ig, ig, re(cc)],
        [-ig, h, re(f), -ig],
        [-ig, re(f), h, -ig],
        [re(cc), ig, ig, re(d)],
    ])
}

/// Rotation-invariant member: `g = 0`, `f = 2d - c - ½`.
pub fn build_rho_r(c: f64, d: f64) -> ComplexMatrix4 {
    build_rho_aux(ParamSet {
        c,
        d,
        f: 2.0 * d - c - 0.5,
        g: 0.0,
    })
}

/// Twist-invariant member: `g = 0`, `f = -2d - c + ½`.
pub fn build_rho_t(c: f64, d: f64) -> ComplexMatrix4 {
    build_rho_aux(ParamSet {
        c,
        d,
        f: -2.0 * d - c + 0.5,
        g: 0.0,
    })
}

pub fn build_family(family: Family, c: f64, d: f64) -> ComplexMatrix4 {
    match family {
        Family::Rotational => build_rho_r(c, d),
        Family::Twist => build_rho_t(c, d),
    }
}

/// Closed-form eigenvalues of a family member (unsorted).
pub fn family_eigenvalues(family: Family, c: f64, d: f64) -> [f64; 4] {
    let k = (2.0 * d - 0.5).abs();
    match family {
        Family::Rotational => [d - c, d - c, c - d + 0.5 + k, c - d + 0.5 - k],
        Family::Twist => [d + c, d + c, -c - d + 0.5 + k, -c - d + 0.5 - k],
    }
}

/// Positivity of a family member from its closed-form eigenvalues:
/// `½ ± |2d - ½| ≥ d ∓ c ≥ 0` (with `d - c` for rotational, `d + c` for twist).
pub fn positivity_feasible(family: Family, c: f64, d: f64) -> bool {
    let s = match family {
        Family::Rotational => d - c,
        Family::Twist => d + c,
    };
    let k = (2.0 * d - 0.5).abs();
    s >= -PSD_TOL && 0.5 - k - s >= -PSD_TOL
}

/// The closed interval of `c` that keeps a family member positive for the
/// given `d`, or `None` if it is empty.
pub fn feasible_c_interval(family: Family, d: f64) -> Option<(f64, f64)> {
    let k = (2.0 * d - 0.5).abs();
    let (lo, hi) = match family {
        Family::Rotational => (d - 0.5 + k, d),
        Family::Twist => (-d, 0.5 - k - d),
    };
    (lo <= hi + PSD_TOL).then_some((lo, hi.max(lo)))
}

/// `Tr[ρ·X]` without forming the product.
pub(crate) fn trace_of_product(a: &ComplexMatrix4, b: &ComplexMatrix4) -> ComplexScalar {
    let mut s = re(0.0);
    for i in 0..4 {
        for j in 0..4 {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

fn lhs_raw(m: &ComplexMatrix4, alpha: Angle, beta: Angle) -> f64 {
    let qb = polarizer_a(beta);
    // The A-side projector is Hermitian, so its adjoint is itself.
    let chain = qb.adjoint() * polarizer_a(alpha) * qb;
    trace_of_product(m, &chain).re
}

fn rhs_raw(m: &ComplexMatrix4, alpha: Angle, beta: Angle, mode: AtomicMode) -> f64 {
    let op = polarizer_a(mode.rhs_angle(alpha)) * polarizer_b(beta);
    trace_of_product(m, &op).re
}

/// Passage probability through two polarizers, at `β` then `α`, both on side A.
pub fn atomic_lhs(rho: &DensityMatrix, alpha: Angle, beta: Angle) -> f64 {
    lhs_raw(rho.matrix(), alpha, beta)
}

/// Joint passage probability with one polarizer on each side, the A-side angle
/// substituted according to `mode`.
pub fn atomic_rhs(rho: &DensityMatrix, alpha: Angle, beta: Angle, mode: AtomicMode) -> f64 {
    rhs_raw(rho.matrix(), alpha, beta, mode)
}

/// Largest `|lhs - rhs|` of the atomic-symmetry condition over the uniform
/// `grid_size × grid_size` grid on `[0, π)²`.
pub fn atomic_residual(rho: &DensityMatrix, mode: AtomicMode, grid_size: usize) -> Result<f64> {
    if grid_size < 8 {
        return Err(Error::InvalidParameter(format!(
            "atomic grid size {grid_size} is below the minimum of 8"
        )));
    }
    let m = rho.matrix();
    let mut worst: f64 = 0.0;
    for alpha in angle_grid(grid_size) {
        for beta in angle_grid(grid_size) {
            let gap = (lhs_raw(m, alpha, beta) - rhs_raw(m, alpha, beta, mode)).abs();
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}

/// Parameters and state that satisfy the atomic symmetry within a family.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicSolution {
    pub kind: BellKind,
    pub d: f64,
    pub c: f64,
    pub rho: DensityMatrix,
}

/// Sample points `(α, β)` for coefficient matching: `α - β ∈ {0, π/8, π/4}`,
/// each taken at two absolute offsets so that a residual depending on more
/// than the angle difference is caught as inconsistent.
fn solve_samples() -> Vec<(Angle, Angle)> {
    let mut out = Vec::new();
    for beta in [0.0, 0.3] {
        for delta in [0.0, FRAC_PI_8, FRAC_PI_4] {
            out.push((Angle(beta + delta), Angle(beta)));
        }
    }
    out
}

/// Solves the atomic-symmetry condition for the family and mode tied to `kind`.
///
/// The residual is affine in `d` (and independent of `c` once the family
/// fixes `f`), so it is sampled at `d = 0` and `d = 1` on a few angle pairs
/// and the least-squares root is taken. `c` is then read off the positivity
/// interval, which must have collapsed to a point.
pub fn solve_atomic(kind: BellKind) -> Result<AtomicSolution> {
    let family = kind.family();
    let mode = kind.mode();
    let gap = |d: f64, alpha: Angle, beta: Angle| {
        let m = build_family(family, 0.0, d);
        lhs_raw(&m, alpha, beta) - rhs_raw(&m, alpha, beta, mode)
    };

    let rows: Vec<(f64, f64)> = solve_samples()
        .into_iter()
        .map(|(alpha, beta)| {
            let at0 = gap(0.0, alpha, beta);
            let at1 = gap(1.0, alpha, beta);
            (at0, at1 - at0)
        })
        .collect();
    let slope_sq: f64 = rows.iter().map(|(_, b)| b * b).sum();
    if slope_sq < 1e-20 {
        return Err(Error::NoSolution(format!(
            "{kind}: the {mode} residual does not depend on d"
        )));
    }
    let d = -rows.iter().map(|(a, b)| a * b).sum::<f64>() / slope_sq;
    let inconsistency = rows
        .iter()
        .map(|(a, b)| (a + b * d).abs())
        .fold(0.0, f64::max);
    if inconsistency > SOLVE_TOL {
        return Err(Error::NoSolution(format!(
            "{kind}: sampled equations disagree by {inconsistency:e}"
        )));
    }

    let (lo, hi) = feasible_c_interval(family, d)
        .ok_or_else(|| Error::NoSolution(format!("{kind}: no positive state with d = {d}")))?;
    if hi - lo > SOLVE_TOL {
        return Err(Error::NoSolution(format!(
            "{kind}: c is only bounded to [{lo}, {hi}]"
        )));
    }
    let c = 0.5 * (lo + hi);
    let rho = validate_density(build_family(family, c, d))?;
    Ok(AtomicSolution { kind, d, c, rho })
}

/// Unit vector of a Bell state in the linear basis.
pub fn bell_state(kind: BellKind) -> StateVector4 {
    let h = FRAC_1_SQRT_2;
    let amps = match kind {
        BellKind::PhiPlus => [h, 0.0, 0.0, h],
        BellKind::PhiMinus => [h, 0.0, 0.0, -h],
        BellKind::PsiPlus => [0.0, h, h, 0.0],
        BellKind::PsiMinus => [0.0, h, -h, 0.0],
    };
    StateVector4::from_real(amps).expect("Bell states are normalized")
}

/// `{φ⁺, ψ⁻, (φ⁻ - iψ⁺)/√2, (φ⁻ + iψ⁺)/√2}`: the first two are fixed by equal
/// rotations, the last two only pick up a phase.
pub fn rot_invariant_basis() -> [StateVector4; 4] {
    let phi_m = bell_state(BellKind::PhiMinus);
    let psi_p = bell_state(BellKind::PsiPlus);
    let mix = |sign: f64| {
        let amps = std::array::from_fn(|k| {
            (phi_m.amplitudes()[k] + c(0.0, sign) * psi_p.amplitudes()[k]) * FRAC_1_SQRT_2
        });
        StateVector4::new(amps).expect("orthonormal combination")
    };
    [
        bell_state(BellKind::PhiPlus),
        bell_state(BellKind::PsiMinus),
        mix(-1.0),
        mix(1.0),
    ]
}

/// Pairs with identical, uniformly random polarization: correlated but
/// separable.
pub fn semiclassical_state() -> DensityMatrix {
    let m = ComplexMatrix4::from_real([
        [3.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0, 1.0, 0.0],
        [1.0, 0.0, 0.0, 3.0],
    ])
    .scale_real(0.125);
    validate_density(m).expect("semiclassical state is a density matrix")
}

/// Polarizer settings for a CHSH measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChshAngles {
    pub a: Angle,
    pub a_prime: Angle,
    pub b: Angle,
    pub b_prime: Angle,
}

impl ChshAngles {
    pub fn new(a: Angle, a_prime: Angle, b: Angle, b_prime: Angle) -> Self {
        Self {
            a,
            a_prime,
            b,
            b_prime,
        }
    }

    /// `a = 0, a' = π/4, b = π/8, b' = 3π/8`.
    pub fn standard() -> Self {
        Self::new(
            Angle(0.0),
            Angle(FRAC_PI_4),
            Angle(FRAC_PI_8),
            Angle(3.0 * FRAC_PI_8),
        )
    }
}

impl Default for ChshAngles {
    fn default() -> Self {
        Self::standard()
    }
}

/// Joint transmission probability through polarizers at `alpha` (A) and `beta` (B).
pub fn coincidence(rho: &DensityMatrix, alpha: Angle, beta: Angle) -> f64 {
    trace_of_product(rho.matrix(), &(polarizer_a(alpha) * polarizer_b(beta))).re
}

/// Polarization correlation `E(α, β)` in `[-1, 1]`.
pub fn correlation(rho: &DensityMatrix, alpha: Angle, beta: Angle) -> f64 {
    let perp = Angle(FRAC_PI_2);
    coincidence(rho, alpha, beta) + coincidence(rho, alpha + perp, beta + perp)
        - coincidence(rho, alpha + perp, beta)
        - coincidence(rho, alpha, beta + perp)
}

/// `S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|`.
pub fn chsh_score(rho: &DensityMatrix, angles: &ChshAngles) -> f64 {
    let e = |x, y| correlation(rho, x, y);
    let ChshAngles {
        a,
        a_prime,
        b,
        b_prime,
    } = *angles;
    (e(a, b) - e(a, b_prime) + e(a_prime, b) + e(a_prime, b_prime)).abs()
}
