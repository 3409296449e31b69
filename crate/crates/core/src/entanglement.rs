//! Concurrence and the ε-deformation of `φ⁺` that links a defect in the
//! atomic symmetry to a defect in entanglement.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::constraints::{validate_density, DensityMatrix};
use crate::derivation::{atomic_residual, build_rho_r, positivity_feasible, AtomicMode, Family};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_sqrt, singular_values, ComplexMatrix4, StateVector4};

/// Grid used for the atomic residual column of a linearity scan. Any grid
/// containing `α = β` reaches the exact maximum `|½ - d|`.
pub const SCAN_ATOMIC_GRID: usize = 16;

/// Largest ε for which every choice of `c` still yields a density matrix.
pub const EPSILON_MAX: f64 = 1.0 / 6.0;

/// `σ_y ⊗ σ_y`, which is real.
fn sigma_yy() -> ComplexMatrix4 {
    ComplexMatrix4::from_real([
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ])
}

/// Spin-flipped state `(σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn spin_flip(m: &ComplexMatrix4) -> ComplexMatrix4 {
    let s = sigma_yy();
    s * m.conj() * s
}

/// The decreasing values `λ₁ ≥ … ≥ λ₄` of Wootters' formula.
///
/// They are the singular values of `√ρ̃ · √ρ` (equivalently the square roots
/// of the eigenvalues of `√ρ ρ̃ √ρ`); `√ρ̃` is the spin flip of `√ρ`.
pub fn wootters_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let root = hermitian_sqrt(rho.matrix())?;
    singular_values(&(spin_flip(&root) * root))
}

/// Two-qubit concurrence, in `[0, 1]`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let l = wootters_lambdas(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// `2|ad - bc|` for a pure state with amplitudes `(a, b, c, d)`.
pub fn concurrence_pure_oracle(psi: &StateVector4) -> f64 {
    let [a, b, c, d] = *psi.amplitudes();
    2.0 * (a * d - b * c).norm()
}

/// Where `c` sits inside the positivity interval `[½ - 3ε, ½ - ε]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CChoice {
    Low,
    Middle,
    High,
}

impl CChoice {
    pub const ALL: [CChoice; 3] = [CChoice::Low, CChoice::Middle, CChoice::High];

    pub fn c_for(self, epsilon: f64) -> f64 {
        match self {
            CChoice::Low => 0.5 - 3.0 * epsilon,
            CChoice::Middle => 0.5 - 2.0 * epsilon,
            CChoice::High => 0.5 - epsilon,
        }
    }

    /// Exact slope of concurrence against ε for this choice.
    pub fn expected_slope(self) -> f64 {
        match self {
            CChoice::Low => -8.0,
            CChoice::Middle => -6.0,
            CChoice::High => -4.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CChoice::Low => "low",
            CChoice::Middle => "middle",
            CChoice::High => "high",
        }
    }
}

impl fmt::Display for CChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownChoice(s.to_string()))
    }
}

/// `φ⁺` deformed by `d = ½ - ε`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsilonFamily {
    epsilon: f64,
    c_choice: CChoice,
}

impl EpsilonFamily {
    pub fn new(epsilon: f64, c_choice: CChoice) -> Result<Self> {
        if !(0.0..=EPSILON_MAX).contains(&epsilon) {
            return Err(Error::InfeasibleEpsilon(format!(
                "epsilon {epsilon} outside [0, 1/6]"
            )));
        }
        Ok(Self { epsilon, c_choice })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn c_choice(&self) -> CChoice {
        self.c_choice
    }

    pub fn d(&self) -> f64 {
        0.5 - self.epsilon
    }

    pub fn c(&self) -> f64 {
        self.c_choice.c_for(self.epsilon)
    }
}

pub fn epsilon_state(fam: &EpsilonFamily) -> Result<DensityMatrix> {
    let (c, d) = (fam.c(), fam.d());
    if !positivity_feasible(Family::Rotational, c, d) {
        return Err(Error::InfeasibleEpsilon(format!(
            "c = {c}, d = {d} violates positivity"
        )));
    }
    validate_density(build_rho_r(c, d))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub epsilon: f64,
    pub concurrence: f64,
    pub atomic_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearityScan {
    pub c_choice: CChoice,
    pub rows: Vec<ScanRow>,
    /// Least-squares slope of concurrence against ε.
    pub slope: f64,
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Concurrence and atomic residual on `steps` evenly spaced ε in `[0, eps_max]`.
pub fn linearity_scan(c_choice: CChoice, eps_max: f64, steps: usize) -> Result<LinearityScan> {
    if !(eps_max > 0.0 && eps_max <= 0.125) {
        return Err(Error::InfeasibleEpsilon(format!(
            "eps-max must lie in (0, 1/8], got {eps_max}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    let rows = (0..steps)
        .map(|k| {
            let epsilon = eps_max * k as f64 / (steps - 1) as f64;
            let rho = epsilon_state(&EpsilonFamily::new(epsilon, c_choice)?)?;
            Ok(ScanRow {
                epsilon,
                concurrence: concurrence(&rho)?,
                atomic_residual: atomic_residual(&rho, AtomicMode::Parallel, SCAN_ATOMIC_GRID)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.concurrence).collect();
    let slope = least_squares_slope(&xs, &ys);
    Ok(LinearityScan {
        c_choice,
        rows,
        slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{bell_state, semiclassical_state, BellKind};
    use crate::linalg::{c, hermitian_eigenvalues, re};
    use crate::operators::{rotation, Angle};
    use proptest::prelude::*;

    /// Route through the eigenvalues of `√ρ ρ̃ √ρ`, kept as a cross-check.
    fn lambdas_via_sandwich(rho: &DensityMatrix) -> [f64; 4] {
        let root = hermitian_sqrt(rho.matrix()).unwrap();
        let r = root * spin_flip(rho.matrix()) * root;
        hermitian_eigenvalues(&r)
            .unwrap()
            .map(|x| x.max(0.0).sqrt())
    }

    fn pure(amps: [f64; 4]) -> StateVector4 {
        StateVector4::from_real(amps).unwrap()
    }

    fn rand_state(vals: &[f64]) -> StateVector4 {
        StateVector4::normalized(std::array::from_fn(|k| c(vals[2 * k], vals[2 * k + 1]))).unwrap()
    }

    #[test]
    fn concurrence_examples() {
        let phi = validate_density(bell_state(BellKind::PhiPlus).projector()).unwrap();
        assert!((concurrence(&phi).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(concurrence(&DensityMatrix::maximally_mixed()).unwrap(), 0.0);
        assert!(concurrence(&semiclassical_state()).unwrap() < 1e-12);
    }

    #[test]
    fn oracle_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((concurrence_pure_oracle(&pure([h, 0.0, 0.0, h])) - 1.0).abs() < 1e-15);
        assert_eq!(concurrence_pure_oracle(&pure([1.0, 0.0, 0.0, 0.0])), 0.0);
        let psi = pure([0.9f64.sqrt(), 0.0, 0.0, 0.1f64.sqrt()]);
        assert!((concurrence_pure_oracle(&psi) - 0.6).abs() < 1e-15);
        let rho = validate_density(psi.projector()).unwrap();
        assert!((concurrence(&rho).unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn epsilon_state_examples() {
        let at0 = epsilon_state(&EpsilonFamily::new(0.0, CChoice::Middle).unwrap()).unwrap();
        assert!(
            at0.matrix()
                .distance(&bell_state(BellKind::PhiPlus).projector())
                < 1e-15
        );

        let m = *epsilon_state(&EpsilonFamily::new(0.05, CChoice::Middle).unwrap())
            .unwrap()
            .matrix();
        // Rotation invariance ties the middle coherence to 2d - c - 1/2, which
        // vanishes for the middle choice of c.
        let want = ComplexMatrix4::from_real([
            [0.45, 0.0, 0.0, 0.40],
            [0.0, 0.05, 0.0, 0.0],
            [0.0, 0.0, 0.05, 0.0],
            [0.40, 0.0, 0.0, 0.45],
        ]);
        assert!(m.distance(&want) < 1e-14);

        let high = epsilon_state(&EpsilonFamily::new(0.05, CChoice::High).unwrap()).unwrap();
        assert!(high.matrix().distance(&build_rho_r(0.45, 0.45)) < 1e-15);

        assert!(matches!(
            EpsilonFamily::new(0.2, CChoice::Middle),
            Err(Error::InfeasibleEpsilon(_))
        ));
        assert!(EpsilonFamily::new(-0.01, CChoice::Low).is_err());
        // At the far edge the low choice is still a state and fully separable.
        let edge = epsilon_state(&EpsilonFamily::new(EPSILON_MAX, CChoice::Low).unwrap()).unwrap();
        assert_eq!(concurrence(&edge).unwrap(), 0.0);
    }

    #[test]
    fn middle_coherence_variant_has_same_concurrence_but_breaks_rotation() {
        use crate::constraints::rotational_residual;
        let eps = 0.05;
        let variant = validate_density(ComplexMatrix4::from_real([
            [0.5 - eps, 0.0, 0.0, 0.5 - 2.0 * eps],
            [0.0, eps, eps, 0.0],
            [0.0, eps, eps, 0.0],
            [0.5 - 2.0 * eps, 0.0, 0.0, 0.5 - eps],
        ]))
        .unwrap();
        assert!((concurrence(&variant).unwrap() - (1.0 - 6.0 * eps)).abs() < 1e-12);
        assert!(rotational_residual(&variant, 32).unwrap() > 1e-3);
        let member = epsilon_state(&EpsilonFamily::new(eps, CChoice::Middle).unwrap()).unwrap();
        assert!((concurrence(&member).unwrap() - (1.0 - 6.0 * eps)).abs() < 1e-12);
        assert!(rotational_residual(&member, 32).unwrap() < 1e-12);
    }

    #[test]
    fn linearity_slopes() {
        for choice in CChoice::ALL {
            let scan = linearity_scan(choice, 0.1, 11).unwrap();
            assert_eq!(scan.rows.len(), 11);
            assert!(
                (scan.slope - choice.expected_slope()).abs() < 1e-9,
                "{choice}: {}",
                scan.slope
            );
            for row in &scan.rows {
                assert!((row.atomic_residual - row.epsilon).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn middle_scan_is_strictly_monotone() {
        let scan = linearity_scan(CChoice::Middle, 0.1, 21).unwrap();
        for w in scan.rows.windows(2) {
            assert!(w[1].concurrence < w[0].concurrence);
            assert!(w[1].atomic_residual > w[0].atomic_residual);
        }
    }

    #[test]
    fn defect_ratio_is_constant() {
        for choice in CChoice::ALL {
            let scan = linearity_scan(choice, 0.1, 11).unwrap();
            for row in scan.rows.iter().skip(1) {
                let ratio = (1.0 - row.concurrence) / row.atomic_residual;
                assert!((ratio + choice.expected_slope()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn scan_rejects_bad_parameters() {
        assert!(matches!(
            linearity_scan(CChoice::Middle, 0.0, 2),
            Err(Error::InfeasibleEpsilon(_))
        ));
        assert!(matches!(
            linearity_scan(CChoice::Middle, 0.2, 5),
            Err(Error::InfeasibleEpsilon(_))
        ));
        assert!(matches!(
            linearity_scan(CChoice::Middle, 0.1, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn least_squares_on_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = xs.map(|x| 2.5 - 1.5 * x);
        assert!((least_squares_slope(&xs, &ys) + 1.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn pure_state_concurrence_matches_oracle(vals in prop::collection::vec(-1.0f64..1.0, 8)) {
            prop_assume!(vals.iter().map(|v| v * v).sum::<f64>() > 1e-3);
            let psi = rand_state(&vals);
            let rho = validate_density(psi.projector()).unwrap();
            prop_assert!((concurrence(&rho).unwrap() - concurrence_pure_oracle(&psi)).abs() <= 1e-9);
        }

        #[test]
        fn concurrence_is_local_rotation_invariant(vals in prop::collection::vec(-1.0f64..1.0, 8), t in -3.0f64..3.0, p in -3.0f64..3.0) {
            prop_assume!(vals.iter().map(|v| v * v).sum::<f64>() > 1e-3);
            let psi = rand_state(&vals);
            let noise = DensityMatrix::maximally_mixed().into_matrix();
            let rho = validate_density(psi.projector().scale_real(0.8) + noise.scale_real(0.2)).unwrap();
            let u = rotation(Angle(t), Angle(p));
            let turned = validate_density(rho.matrix().conjugate_by(&u)).unwrap();
            prop_assert!((concurrence(&rho).unwrap() - concurrence(&turned).unwrap()).abs() < 1e-10);
        }

        #[test]
        fn product_mixtures_are_separable(vals in prop::collection::vec(-1.0f64..1.0, 16), w in 0.0f64..1.0) {
            let qubit = |k: usize| {
                let a = c(vals[k], vals[k + 1]);
                let b = c(vals[k + 2], vals[k + 3]);
                let n = (a.norm_sqr() + b.norm_sqr()).sqrt().max(1e-9);
                [a / n, b / n]
            };
            let prod = |x: [_; 2], y: [_; 2]| {
                StateVector4::normalized([x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]]).unwrap()
            };
            let s1 = prod(qubit(0), qubit(4));
            let s2 = prod(qubit(8), qubit(12));
            let rho = validate_density(s1.projector().scale_real(w) + s2.projector().scale_real(1.0 - w)).unwrap();
            let conc = concurrence(&rho).unwrap();
            prop_assert!((0.0..=1e-7).contains(&conc), "{}", conc);
        }

        #[test]
        fn sandwich_route_agrees_on_full_rank(vals in prop::collection::vec(-1.0f64..1.0, 32)) {
            let a = ComplexMatrix4::from_fn(|i, j| c(vals[2 * (4 * i + j)], vals[2 * (4 * i + j) + 1]));
            let m = a.adjoint() * a + ComplexMatrix4::identity().scale_real(0.05);
            let rho = validate_density(m.scale_real(1.0 / m.trace().re)).unwrap();
            let fast = wootters_lambdas(&rho).unwrap();
            let slow = lambdas_via_sandwich(&rho);
            for (x, y) in fast.iter().zip(slow.iter()) {
                prop_assert!((x - y).abs() < 1e-7);
            }
            let conc = concurrence(&rho).unwrap();
            prop_assert!((0.0..=1.0).contains(&conc));
        }
    }

    #[test]
    fn spin_flip_of_bell_state_is_itself() {
        let p = bell_state(BellKind::PsiMinus).projector();
        assert!(spin_flip(&p).distance(&p) < 1e-15);
        let xx = pure([1.0, 0.0, 0.0, 0.0]).projector();
        assert_eq!(spin_flip(&xx)[(3, 3)], re(1.0));
    }
}
